#include "pugm/bayes_em.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pugm {

void Hyperparameters::validate() const {
  auto prob = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0))
      throw InputError(std::string(name) + " must lie strictly in (0,1)");
  };
  prob(p1, "p1");
  prob(p2, "p2");
  prob(p3, "p3");
  prob(p4, "p4");
  if (!(nu1 > nu0 && nu0 > 0.0)) throw InputError("need nu1 > nu0 > 0");
  if (!(lambda1 > lambda0 && lambda0 > 0.0)) throw InputError("need lambda1 > lambda0 > 0");
  if (!(tau > 0.0)) throw InputError("need tau > 0");
  if (!(spectral_bound > 0.0)) throw InputError("need spectral_bound > 0");
  if (q_max < 1 || q_max > 24) throw InputError("q_max out of range");
}

double spike_slab_density_omega(double w, double nu) {
  return std::exp(log_spike_slab_density_omega(w, nu));
}

double log_spike_slab_density_omega(double w, double nu) {
  if (!(nu > 0.0)) throw InputError("Laplace scale must be positive");
  return -std::log(2.0 * nu) - std::abs(w) / nu;
}

double spike_slab_density_beta(double b, double lambda) {
  return std::exp(log_spike_slab_density_beta(b, lambda));
}

double log_spike_slab_density_beta(double b, double lambda) {
  if (!(lambda > 0.0)) throw InputError("Normal variance must be positive");
  return -0.5 * std::log(2.0 * std::numbers::pi * lambda) - b * b / (2.0 * lambda);
}

namespace {

struct PairLogs {
  double l1 = 0.0;     // sum_x log Laplace(w_x; nu1)
  double l0 = 0.0;     // sum_x log Laplace(w_x; nu0)
  double mix3 = 0.0;   // log sum over binary sequences of prod_x p3-weighted densities
};

// log sum over all r in {0,1}^q of prod_x [p3 P1(w_x)]^{r_x} [(1-p3) P0(w_x)]^{1-r_x},
// enumerated exactly as the binary-sequence expansion.
double log_mixture_sum(const std::vector<double>& t1, const std::vector<double>& t0) {
  const int q = static_cast<int>(t1.size());
  const std::uint32_t total = 1u << q;
  std::vector<double> terms(total);
  for (std::uint32_t r = 0; r < total; ++r) {
    double acc = 0.0;
    for (int x = 0; x < q; ++x) acc += ((r >> x) & 1u) ? t1[x] : t0[x];
    terms[r] = acc;
  }
  return log_sum_exp(terms);
}

void check_finite(double v, int i, int j, int x) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "non-finite density at pair (" << i << "," << j << ")";
    if (x >= 0) os << " level index " << x;
    throw NumericalError(os.str());
  }
}

}  // namespace

PosteriorSummaries e_step(const GaussianProfileParams& params, const Hyperparameters& hyper) {
  hyper.validate();
  const int p = params.p(), q = params.q();
  if (q > hyper.q_max) {
    std::ostringstream os;
    os << "E-step enumerates 2^q mixture terms; q = " << q << " exceeds q_max = " << hyper.q_max;
    throw CapacityError(os.str());
  }

  const double lp1 = std::log(hyper.p1), l1mp1 = std::log1p(-hyper.p1);
  const double lp2 = std::log(hyper.p2), l1mp2 = std::log1p(-hyper.p2);
  const double lp3 = std::log(hyper.p3), l1mp3 = std::log1p(-hyper.p3);
  const double lp4 = std::log(hyper.p4), l1mp4 = std::log1p(-hyper.p4);

  // per-pair omega log-densities
  const int npairs = p * (p - 1) / 2;
  std::vector<PairLogs> pl(npairs);
  std::vector<std::vector<double>> lw1(npairs, std::vector<double>(q));
  std::vector<std::vector<double>> lw0(npairs, std::vector<double>(q));
  auto pair_at = [p](int i, int j) { return i * (2 * p - i - 1) / 2 + (j - i - 1); };
  std::vector<double> t1(q), t0(q);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const int k = pair_at(i, j);
      for (int x = 0; x < q; ++x) {
        const double w = params.omega[x](i, j);
        lw1[k][x] = log_spike_slab_density_omega(w, hyper.nu1);
        lw0[k][x] = log_spike_slab_density_omega(w, hyper.nu0);
        check_finite(lw1[k][x], i, j, x);
        check_finite(lw0[k][x], i, j, x);
        pl[k].l1 += lw1[k][x];
        pl[k].l0 += lw0[k][x];
        t1[x] = lp3 + lw1[k][x];
        t0[x] = l1mp3 + lw0[k][x];
      }
      pl[k].mix3 = log_mixture_sum(t1, t0);
    }
  }

  // per-vertex beta log-densities
  std::vector<double> lb1(p, 0.0), lb0(p, 0.0);
  for (int i = 0; i < p; ++i) {
    for (int x = 0; x < q; ++x) {
      const double b = params.beta[x](i);
      lb1[i] += log_spike_slab_density_beta(b, hyper.lambda1);
      lb0[i] += log_spike_slab_density_beta(b, hyper.lambda0);
    }
    check_finite(lb1[i], i, i, -1);
  }

  PosteriorSummaries out;
  out.vertices = params.vertices;
  out.levels = params.levels;
  out.theta_star.resize(p);
  out.gamma_star = Eigen::MatrixXd::Zero(p, p);
  out.r_star.assign(q, Eigen::MatrixXd::Zero(p, p));

  // theta*: row-conditional posterior; each pair contributes the marginal of
  // omega_ij,. given theta_i, with theta_j integrated under its prior
  for (int i = 0; i < p; ++i) {
    double num = lp2 + lb1[i];
    double den = l1mp2 + lb0[i];
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      const int k = pair_at(std::min(i, j), std::max(i, j));
      const double g_tied = log_sum_exp(lp4 + pl[k].l1, l1mp4 + pl[k].l0);
      const double g1 = log_sum_exp(l1mp1 + pl[k].l0, lp1 + pl[k].mix3);  // theta_i theta_j = 1
      const double g0 = log_sum_exp(l1mp1 + pl[k].l0, lp1 + g_tied);      // theta_i theta_j = 0
      num += log_sum_exp(lp2 + g1, l1mp2 + g0);
      den += g0;
    }
    out.theta_star(i) = logistic(num - den);
  }

  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const int k = pair_at(i, j);
      const double lw11 = 2.0 * lp2 + lb1[i] + lb1[j];
      const double lw_not11 = log_sum_exp(
          {2.0 * l1mp2 + lb0[i] + lb0[j], lp2 + l1mp2 + lb1[i] + lb0[j],
           lp2 + l1mp2 + lb0[i] + lb1[j]});
      const double tied = log_sum_exp(lp4 + pl[k].l1, l1mp4 + pl[k].l0);
      const double g1 = log_sum_exp(lw11 + pl[k].mix3, lw_not11 + tied);
      const double g0 = pl[k].l0 + log_sum_exp(lw11, lw_not11);
      const double gamma = logistic(lp1 + g1 - l1mp1 - g0);
      out.gamma_star(i, j) = out.gamma_star(j, i) = gamma;

      const double tt = out.theta_star(i) * out.theta_star(j);
      for (int x = 0; x < q; ++x) {
        const double h1 = logistic(lp3 + lw1[k][x] - l1mp3 - lw0[k][x]);
        const double h0 = logistic(lp4 + lw1[k][x] - l1mp4 - lw0[k][x]);
        double rest1 = lp4, rest0 = l1mp4;
        for (int y = 0; y < q; ++y) {
          if (y == x) continue;
          rest1 += lw1[k][y];
          rest0 += lw0[k][y];
        }
        const double r_shared = logistic(rest1 - rest0);
        const double r = gamma * (tt * h1 + (1.0 - tt) * r_shared * h0);
        check_finite(r, i, j, x);
        out.r_star[x](i, j) = out.r_star[x](j, i) = r;
      }
    }
  }
  return out;
}

Eigen::VectorXd m_step_beta(const Eigen::MatrixXd& centered_x, const Eigen::MatrixXd& omega_x,
                            const Eigen::VectorXd& theta_star, const Hyperparameters& hyper) {
  const int n = static_cast<int>(centered_x.rows());
  const int p = static_cast<int>(centered_x.cols());
  if (omega_x.rows() != p || theta_star.size() != p)
    throw InputError("m_step_beta dimension mismatch");
  Eigen::VectorXd d(p);
  for (int i = 0; i < p; ++i)
    d(i) = theta_star(i) / hyper.lambda1 + (1.0 - theta_star(i)) / hyper.lambda0;
  Eigen::MatrixXd lhs = static_cast<double>(n) * omega_x;
  lhs.diagonal() += d;
  Eigen::VectorXd rhs = omega_x * centered_x.colwise().sum().transpose();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
  if (ldlt.info() != Eigen::Success) throw NumericalError("beta update system is singular");
  Eigen::VectorXd beta = ldlt.solve(rhs);
  if (!beta.allFinite()) throw NumericalError("beta update produced non-finite values");
  return beta;
}

Eigen::MatrixXd m_step_omega(const Eigen::MatrixXd& scatter, int n_x,
                             const Eigen::MatrixXd& r_star_x, const Hyperparameters& hyper,
                             const Eigen::MatrixXd* warm, const GlassoOptions* opts) {
  const int p = static_cast<int>(scatter.rows());
  if (scatter.cols() != p || r_star_x.rows() != p || r_star_x.cols() != p)
    throw InputError("m_step_omega dimension mismatch");
  if (n_x < 1) throw InputError("need at least one observation");

  Eigen::MatrixXd s = scatter;
  s.diagonal().array() += 2.0 * hyper.tau / static_cast<double>(n_x);
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      const double r = r_star_x(i, j);
      const double w = r / hyper.nu1 + (1.0 - r) / hyper.nu0;
      rho(i, j) = 2.0 * w / static_cast<double>(n_x);
    }
  }
  GlassoOptions o = opts ? *opts : GlassoOptions{};
  o.spectral_bound = hyper.spectral_bound;
  Eigen::MatrixXd start;
  if (warm) {
    start = *warm;
  } else {
    Eigen::MatrixXd ridge = s;
    ridge.diagonal().array() += 0.1;
    start = Eigen::LDLT<Eigen::MatrixXd>(ridge).solve(Eigen::MatrixXd::Identity(p, p));
    start = 0.5 * (start + start.transpose());
  }
  return weighted_glasso(s, rho, start, o).omega;
}

double log_q_objective(const GaussianProfileParams& params, const PosteriorSummaries& summaries,
                       const ProfileDataset& data, const Hyperparameters& hyper) {
  const int p = params.p(), q = params.q();
  if (data.q() != q || data.p() != p || summaries.p() != p || summaries.q() != q)
    throw InputError("log_q_objective dimension mismatch");
  double qval = 0.0;
  for (int x = 0; x < q; ++x) {
    const Eigen::MatrixXd& om = params.omega[x];
    Eigen::LLT<Eigen::MatrixXd> llt(om);
    if (llt.info() != Eigen::Success)
      throw NumericalError("omega not PD in objective at level " + params.levels[x]);
    const double logdet =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    const Eigen::MatrixXd resid =
        data.data[x].rowwise() - (params.alpha + params.beta[x]).transpose();
    const Eigen::MatrixXd scatter = resid.transpose() * resid;
    const double n = static_cast<double>(data.n(x));
    qval += 0.5 * (n * logdet - (scatter.cwiseProduct(om)).sum());
    for (int i = 0; i < p; ++i) {
      const double d =
          summaries.theta_star(i) / hyper.lambda1 + (1.0 - summaries.theta_star(i)) / hyper.lambda0;
      qval -= 0.5 * params.beta[x](i) * params.beta[x](i) * d + hyper.tau * om(i, i);
    }
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        const double r = summaries.r_star[x](i, j);
        const double w = r / hyper.nu1 + (1.0 - r) / hyper.nu0;
        qval -= 2.0 * w * std::abs(om(i, j));
      }
    }
  }
  return qval;
}

EmState fit(const ProfileDataset& data, const Hyperparameters& hyper, const FitConfig& cfg) {
  data.validate();
  hyper.validate();
  const int p = data.p(), q = data.q();

  EmState state;
  state.params.levels = data.levels;
  state.params.vertices.reserve(p);
  for (int i = 0; i < p; ++i) state.params.vertices.push_back("y" + std::to_string(i + 1));

  // center once; alpha keeps the pooled pre-centering column means
  double total_rows = 0.0;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(p);
  for (int x = 0; x < q; ++x) {
    alpha += data.data[x].colwise().sum().transpose();
    total_rows += static_cast<double>(data.n(x));
  }
  alpha /= total_rows;
  state.params.alpha = alpha;

  ProfileDataset centered = data;
  for (int x = 0; x < q; ++x) centered.data[x].rowwise() -= alpha.transpose();

  // warm, scale-aware start: ridge inverse of the level covariance, unless an
  // explicit initialisation was supplied
  state.params.beta.resize(q);
  state.params.omega.resize(q);
  if (cfg.init) {
    if (cfg.init->p() != p || cfg.init->q() != q)
      throw InputError("initialisation parameters have the wrong shape");
    state.params.beta = cfg.init->beta;
    state.params.omega = cfg.init->omega;
  } else {
    for (int x = 0; x < q; ++x) {
      const Eigen::VectorXd mean = centered.data[x].colwise().mean().transpose();
      state.params.beta[x] = mean;
      const Eigen::MatrixXd r = centered.data[x].rowwise() - mean.transpose();
      Eigen::MatrixXd s = (r.transpose() * r) / static_cast<double>(data.n(x));
      s.diagonal().array() += 0.1;
      Eigen::MatrixXd om = Eigen::LDLT<Eigen::MatrixXd>(s).solve(Eigen::MatrixXd::Identity(p, p));
      state.params.omega[x] = 0.5 * (om + om.transpose());
    }
  }

  // dataset view with alpha already removed, for the objective
  ProfileDataset centered_view = centered;
  GaussianProfileParams zero_alpha_params = state.params;
  zero_alpha_params.alpha = Eigen::VectorXd::Zero(p);

  double prev_q = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    try {
      state.summaries = e_step(state.params, hyper);
      zero_alpha_params.beta = state.params.beta;
      zero_alpha_params.omega = state.params.omega;
      const double q_pre = log_q_objective(zero_alpha_params, state.summaries, centered_view, hyper);

      double max_db = 0.0, max_dw = 0.0;
      for (int x = 0; x < q; ++x) {
        const Eigen::VectorXd beta_new =
            m_step_beta(centered.data[x], state.params.omega[x], state.summaries.theta_star, hyper);
        max_db = std::max(max_db, (beta_new - state.params.beta[x]).cwiseAbs().maxCoeff());
        state.params.beta[x] = beta_new;

        const Eigen::MatrixXd resid = centered.data[x].rowwise() - beta_new.transpose();
        const Eigen::MatrixXd scatter =
            (resid.transpose() * resid) / static_cast<double>(data.n(x));
        const Eigen::MatrixXd omega_new = m_step_omega(
            scatter, data.n(x), state.summaries.r_star[x], hyper, &state.params.omega[x],
            &cfg.glasso);
        max_dw = std::max(max_dw, (omega_new - state.params.omega[x]).cwiseAbs().maxCoeff());
        state.params.omega[x] = omega_new;
      }

      zero_alpha_params.beta = state.params.beta;
      zero_alpha_params.omega = state.params.omega;
      const double q_post =
          log_q_objective(zero_alpha_params, state.summaries, centered_view, hyper);

      state.q_pre_trace.push_back(q_pre);
      state.q_trace.push_back(q_post);
      state.max_delta_beta.push_back(max_db);
      state.max_delta_omega.push_back(max_dw);
      state.iterations = iter;

      if (iter > 1 && std::abs(q_post - prev_q) <= cfg.tol * std::max(1.0, std::abs(prev_q))) {
        state.converged = true;
        prev_q = q_post;
        break;
      }
      prev_q = q_post;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (EM iteration " + std::to_string(iter) + ")");
    }
  }
  // summaries consistent with the returned parameters
  state.summaries = e_step(state.params, hyper);
  return state;
}

}  // namespace pugm
