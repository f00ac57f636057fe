#ifndef PUGM_GAUSSIAN_HPP
#define PUGM_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "pugm/profile_graph.hpp"

namespace pugm {

// Parameters of the Gaussian profile model: shared baseline mean alpha,
// per-level mean offsets beta_x and precision matrices Omega_x. Sigma_x and
// zeta_x are derived on demand.
struct GaussianProfileParams {
  std::vector<std::string> vertices;
  std::vector<std::string> levels;
  Eigen::VectorXd alpha;
  std::vector<Eigen::VectorXd> beta;
  std::vector<Eigen::MatrixXd> omega;
  // Generators that define zeta first (and derive beta = Sigma zeta) store it
  // here so its zero pattern survives the floating-point round trip; empty
  // for fitted parameters, where zeta is derived.
  std::vector<Eigen::VectorXd> zeta_explicit;

  int p() const { return static_cast<int>(vertices.size()); }
  int q() const { return static_cast<int>(levels.size()); }
  Eigen::MatrixXd sigma(int x) const;   // Omega_x^{-1}; NumericalError if not PD
  Eigen::VectorXd zeta(int x) const {
    return zeta_explicit.empty() ? Eigen::VectorXd(omega.at(x) * beta.at(x))
                                 : zeta_explicit.at(x);
  }
  void validate() const;
};

struct ProfileDataset {
  std::vector<std::string> levels;
  std::vector<Eigen::MatrixXd> data;  // n_x rows, p columns per level

  int q() const { return static_cast<int>(levels.size()); }
  int p() const { return data.empty() ? 0 : static_cast<int>(data.front().cols()); }
  int n(int x) const { return static_cast<int>(data.at(x).rows()); }
  void validate() const;
};

// E-step expectations of the coefficient, global-edge and profile-edge
// indicators. gamma_star and r_star are symmetric with zero diagonals.
struct PosteriorSummaries {
  std::vector<std::string> vertices;
  std::vector<std::string> levels;
  Eigen::VectorXd theta_star;
  Eigen::MatrixXd gamma_star;
  std::vector<Eigen::MatrixXd> r_star;

  int p() const { return static_cast<int>(vertices.size()); }
  int q() const { return static_cast<int>(levels.size()); }
};

// zeta_x = Omega_x beta_x; rejects non-symmetric or non-PD matrices.
Eigen::VectorXd zeta_from(const Eigen::VectorXd& beta_x, const Eigen::MatrixXd& omega_x);

struct ConformanceResult {
  std::vector<std::string> violations;
  bool conforms() const { return violations.empty(); }
};

// Zero-pattern check against a profile graph: |zeta_ax| <= tol for every
// square vertex a at every level, |omega_ab,x| <= tol whenever x lies in the
// label of {a,b}.
ConformanceResult conforms_to_graph(const GaussianProfileParams& params,
                                    const ProfileGraph& graph, double tol);

struct ExtractionResult {
  ProfileGraph graph;
  // square candidates (theta* below the cut) demoted to circle because they
  // touch a dotted edge
  std::vector<std::string> demoted;
};

// Median-probability-style selection: level x enters the label of {i,j} when
// r*_ij,x <= edge_cut; vertex i becomes square when theta*_i <= vertex_cut and
// the square rule allows it.
ExtractionResult extract_profile_graph(const PosteriorSummaries& post, double edge_cut = 0.5,
                                       double vertex_cut = 0.5);

}  // namespace pugm

#endif
