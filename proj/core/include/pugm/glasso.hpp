#ifndef PUGM_GLASSO_HPP
#define PUGM_GLASSO_HPP

#include <Eigen/Dense>

namespace pugm {

struct GlassoOptions {
  double kkt_tol = 1e-9;     // absolute, on the stationarity residual
  int max_sweeps = 1000;
  int inner_max = 200;
  double inner_tol = 1e-12;
  double spectral_bound = 1e6;
};

struct GlassoResult {
  Eigen::MatrixXd omega;
  int sweeps = 0;
  double kkt_residual = 0.0;
  bool pd_repaired = false;
  bool spectrally_clipped = false;
};

// Maximises log det(Omega) - tr(S Omega) - sum_{i != j} rho_ij |omega_ij|
// over symmetric positive definite Omega with ||Omega||_2 bounded, by cyclic
// coordinate descent over columns (each column solves a lasso subproblem).
// Stationarity at the optimum: (Omega^{-1})_ij = S_ij + rho_ij sign(omega_ij)
// off the diagonal, (Omega^{-1})_ii = S_ii.
//
// S must be symmetric with strictly positive diagonal; rho symmetric,
// nonnegative, zero diagonal; warm a PD symmetric start.
GlassoResult weighted_glasso(const Eigen::MatrixXd& s, const Eigen::MatrixXd& rho,
                             const Eigen::MatrixXd& warm, const GlassoOptions& opts = {});

}  // namespace pugm

#endif
