#ifndef PUGM_BAYES_EM_HPP
#define PUGM_BAYES_EM_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "pugm/gaussian.hpp"
#include "pugm/glasso.hpp"

namespace pugm {

struct Hyperparameters {
  double p1 = 0.5, p2 = 0.5, p3 = 0.5, p4 = 0.5;
  double nu1 = 1.0, nu0 = 0.1;        // Laplace slab/spike scales on omega
  double lambda1 = 10.0, lambda0 = 0.05;  // Normal slab/spike variances on beta
  double tau = 0.1;                   // Exponential rate on diagonal omega
  double spectral_bound = 1e6;
  int q_max = 12;                     // cap for the exact 2^q mixture sums

  void validate() const;  // probabilities in (0,1); nu1 > nu0 > 0; lambda1 > lambda0 > 0; tau > 0
};

// Laplace density (1 / 2nu) exp(-|w| / nu) used for both spike and slab.
double spike_slab_density_omega(double w, double nu);
double log_spike_slab_density_omega(double w, double nu);

// Zero-mean Normal density with variance lambda.
double spike_slab_density_beta(double b, double lambda);
double log_spike_slab_density_beta(double b, double lambda);

// Posterior expectations of the latent indicators at the current parameters:
//   theta*_i  = P[theta_i = 1 | beta_i., omega_i.]
//   gamma*_ij = P[gamma_ij = 1 | beta_i., beta_j., omega_ij.]
//   r*_ij,x   = gamma* ( theta*_i theta*_j h1(w_x)
//                        + (1 - theta*_i theta*_j) rbar_/x h0(w_x) )
// with rbar_/x the posterior of the shared tied-branch indicator given the
// other q-1 profiles. All ratios run in log space; the 2^q binary-sequence
// mixture sums are enumerated exactly (hence the q_max cap).
PosteriorSummaries e_step(const GaussianProfileParams& params, const Hyperparameters& hyper);

// Ridge-form update: beta = (n Omega + D)^{-1} Omega Y' 1 with
// D = diag(theta*_i / lambda1 + (1 - theta*_i) / lambda0); data must already
// be centered (alpha handled by the caller).
Eigen::VectorXd m_step_beta(const Eigen::MatrixXd& centered_x, const Eigen::MatrixXd& omega_x,
                            const Eigen::VectorXd& theta_star, const Hyperparameters& hyper);

// Maximiser of n/2 log det - n/2 tr(S Omega) - tau sum_i omega_ii
// - sum_{i<j} 2 w_ij |omega_ij| with w_ij = r*/nu1 + (1-r*)/nu0, solved as a
// weighted graphical lasso on S + (2 tau / n) I.
Eigen::MatrixXd m_step_omega(const Eigen::MatrixXd& scatter, int n_x,
                             const Eigen::MatrixXd& r_star_x, const Hyperparameters& hyper,
                             const Eigen::MatrixXd* warm = nullptr,
                             const GlassoOptions* opts = nullptr);

struct FitConfig {
  int max_iter = 1000;
  double tol = 1e-6;  // relative change of the Q objective
  GlassoOptions glasso;
  // optional warm start; beta/omega are taken as the initial Delta (alpha
  // still comes from centering the data)
  std::shared_ptr<const GaussianProfileParams> init;
};

struct EmState {
  GaussianProfileParams params;
  PosteriorSummaries summaries;
  int iterations = 0;
  bool converged = false;
  // per iteration: Q after the parameter update, under that iteration's
  // summaries, plus the pre-update value of the same objective (the EM ascent
  // pair), and step sizes
  std::vector<double> q_trace;
  std::vector<double> q_pre_trace;
  std::vector<double> max_delta_omega;
  std::vector<double> max_delta_beta;
};

// Expected complete-data log posterior (up to the dropped constant) at the
// given parameters and summaries.
double log_q_objective(const GaussianProfileParams& params, const PosteriorSummaries& summaries,
                       const ProfileDataset& data, const Hyperparameters& hyper);

// Centers the data once (alpha = pooled column means), then alternates the
// E-step with the per-level beta and Omega updates until the relative change
// of Q drops below tol.
EmState fit(const ProfileDataset& data, const Hyperparameters& hyper, const FitConfig& cfg = {});

}  // namespace pugm

#endif
