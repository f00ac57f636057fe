#ifndef PUGM_SIMULATION_HPP
#define PUGM_SIMULATION_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "pugm/gaussian.hpp"
#include "pugm/profile_graph.hpp"

namespace pugm {

// The four structural scenarios: (1) every non-baseline level is an
// independent thinned copy of the baseline support, (2) two groups sharing a
// structure, (3) all but the last level share the baseline, (4) one shared
// structure everywhere.
struct ScenarioSpec {
  int scenario = 1;
  int p = 20;
  int q = 4;
  double s = 0.0;       // activation probability for extra off-diagonal support
  int n_x = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

// Banded baseline: unit diagonal, first off-diagonal 0.5, second 0.4.
Eigen::MatrixXd baseline_precision(int p);

// Scenario-dependent supports: thinning drops each nonzero off-diagonal pair
// with probability 1/2; the s parameter then activates currently-zero pairs
// (value +-0.4) before groups are copied, and the diagonal is loaded until
// the matrix is comfortably PD.
std::vector<Eigen::MatrixXd> derive_level_precisions(const Eigen::MatrixXd& omega0,
                                                     const ScenarioSpec& spec);

// Level 0 row is zero; later levels have the external effect on the first
// four responses only.
Eigen::MatrixXd truth_zeta(int p, int q);

struct GroundTruth {
  GaussianProfileParams params;
  ProfileGraph graph;
};

struct SimulationResult {
  ProfileDataset dataset;
  GroundTruth truth;
};

// beta_x = Sigma_x zeta_x, rows drawn from N(beta_x, Sigma_x) via Cholesky;
// the truth graph carries the zero patterns of Omega_x as labels and the
// all-zero zeta rows as square candidates.
SimulationResult generate(const ScenarioSpec& spec);

}  // namespace pugm

#endif
