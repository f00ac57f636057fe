#include "pugm/glasso.hpp"

#include <cmath>

#include "pugm/common.hpp"

namespace pugm {

namespace {

double kkt_residual(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& w,
                    const Eigen::MatrixXd& s, const Eigen::MatrixXd& rho) {
  const int p = static_cast<int>(s.rows());
  double worst = 0.0;
  for (int i = 0; i < p; ++i) {
    worst = std::max(worst, std::abs(w(i, i) - s(i, i)));
    for (int j = i + 1; j < p; ++j) {
      const double resid = w(i, j) - s(i, j);
      if (omega(i, j) == 0.0)
        worst = std::max(worst, std::abs(resid) - rho(i, j));
      else
        worst = std::max(worst, std::abs(resid - rho(i, j) * (omega(i, j) > 0 ? 1.0 : -1.0)));
    }
  }
  return worst;
}

}  // namespace

GlassoResult weighted_glasso(const Eigen::MatrixXd& s, const Eigen::MatrixXd& rho,
                             const Eigen::MatrixXd& warm, const GlassoOptions& opts) {
  const int p = static_cast<int>(s.rows());
  if (s.cols() != p || rho.rows() != p || rho.cols() != p || warm.rows() != p)
    throw InputError("glasso inputs must be p x p");
  for (int i = 0; i < p; ++i)
    if (!(s(i, i) > 0.0))
      throw NumericalError("scatter diagonal must be strictly positive");

  GlassoResult res;
  res.omega = warm;
  Eigen::MatrixXd& omega = res.omega;
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success) throw NumericalError("glasso warm start is not PD");
  Eigen::MatrixXd w = llt.solve(Eigen::MatrixXd::Identity(p, p));  // Omega^{-1}, maintained

  if (p == 1) {
    omega(0, 0) = 1.0 / s(0, 0);
    res.kkt_residual = 0.0;
    return res;
  }

  Eigen::VectorXd u(p - 1), grad(p - 1), s12(p - 1), c(p - 1);
  Eigen::MatrixXd theta11(p - 1, p - 1);
  std::vector<int> idx(p - 1);

  for (res.sweeps = 1; res.sweeps <= opts.max_sweeps; ++res.sweeps) {
    for (int j = 0; j < p; ++j) {
      int t = 0;
      for (int k = 0; k < p; ++k)
        if (k != j) idx[t++] = k;

      // theta11 = inverse of Omega with row/column j deleted, from W blocks
      const double wjj = w(j, j);
      for (int a = 0; a < p - 1; ++a)
        for (int b = 0; b < p - 1; ++b)
          theta11(a, b) = w(idx[a], idx[b]) - w(idx[a], j) * w(idx[b], j) / wjj;

      for (int a = 0; a < p - 1; ++a) {
        s12(a) = s(idx[a], j);
        c(a) = rho(idx[a], j);
        u(a) = omega(idx[a], j);
      }
      const double s22 = s(j, j);

      // lasso subproblem: min_u (1/2) s22 u' theta11 u + s12' u + sum c_a |u_a|
      grad = s12 + s22 * (theta11 * u);
      for (int inner = 0; inner < opts.inner_max; ++inner) {
        double step = 0.0;
        for (int a = 0; a < p - 1; ++a) {
          const double quad = s22 * theta11(a, a);
          const double g = grad(a) - quad * u(a);
          double next = 0.0;
          if (std::abs(g) > c(a)) next = -(g - std::copysign(c(a), g)) / quad;
          const double diff = next - u(a);
          if (diff != 0.0) {
            grad += (s22 * diff) * theta11.col(a);
            u(a) = next;
            step = std::max(step, std::abs(diff));
          }
        }
        if (step < opts.inner_tol) break;
      }

      const double v = 1.0 / s22;  // Schur complement of the updated column
      Eigen::VectorXd tu = theta11 * u;
      for (int a = 0; a < p - 1; ++a) {
        omega(idx[a], j) = u(a);
        omega(j, idx[a]) = u(a);
      }
      omega(j, j) = v + u.dot(tu);

      // refresh W = Omega^{-1} from the block inverse
      for (int a = 0; a < p - 1; ++a)
        for (int b = 0; b < p - 1; ++b)
          w(idx[a], idx[b]) = theta11(a, b) + tu(a) * tu(b) / v;
      for (int a = 0; a < p - 1; ++a) {
        w(idx[a], j) = -tu(a) / v;
        w(j, idx[a]) = -tu(a) / v;
      }
      w(j, j) = 1.0 / v;
    }
    res.kkt_residual = kkt_residual(omega, w, s, rho);
    if (res.kkt_residual < opts.kkt_tol) break;
  }

  // Safety rails; the column updates keep Omega PD by construction, so these
  // fire only on numerically degenerate inputs.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0) {
    omega += (std::abs(lo) + 1e-8) * Eigen::MatrixXd::Identity(p, p);
    res.pd_repaired = true;
  }
  if (hi > opts.spectral_bound) {
    Eigen::VectorXd clipped = eig.eigenvalues().cwiseMin(opts.spectral_bound).cwiseMax(1e-12);
    omega = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    res.spectrally_clipped = true;
  }
  return res;
}

}  // namespace pugm
