#ifndef PUGM_EVALUATION_HPP
#define PUGM_EVALUATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "pugm/bayes_em.hpp"
#include "pugm/gaussian.hpp"
#include "pugm/profile_graph.hpp"

namespace pugm {

struct ConfusionCounts {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::int64_t total() const { return tp + fp + tn + fn; }
};

struct EdgeConfusion {
  std::vector<std::string> levels;
  std::vector<ConfusionCounts> per_level;
  ConfusionCounts pooled;
};

// Per-level counts over unordered vertex pairs; pooled counts are the sums.
EdgeConfusion confusion(const MultipleGraphs& truth, const MultipleGraphs& estimate);

// Division-by-zero cases surface as empty optionals.
struct Metrics {
  std::optional<double> accuracy, sensitivity, specificity, balanced_accuracy;
};
Metrics metrics(const ConfusionCounts& c);

// Mann-Whitney AUC of per-pair-per-level scores against edge indicators,
// pooled across levels; ties contribute 1/2. Empty optional when only one
// class is present.
std::optional<double> auc(const std::vector<Eigen::MatrixXd>& scores,
                          const MultipleGraphs& truth);

struct RobustnessSummary {
  std::vector<std::string> levels;
  std::vector<std::optional<double>> mean_per_level;
  std::vector<std::optional<double>> se_per_level;
  std::optional<double> mean_overall;
  std::optional<double> se_overall;
  int reps = 0;
  double fraction = 0.0;
};

struct RobustnessConfig {
  double fraction = 0.1;
  int reps = 100;
  std::uint64_t seed = 0;
  double edge_cut = 0.5;
  double vertex_cut = 0.5;
};

// Fits the full dataset once as the reference, then repeatedly drops
// floor(fraction * n_x) rows per level, refits, and scores the induced
// multiple graphs against the reference by balanced accuracy.
RobustnessSummary robustness_harness(const ProfileDataset& data, const Hyperparameters& hyper,
                                     const FitConfig& fit_cfg, const RobustnessConfig& cfg);

}  // namespace pugm

#endif
