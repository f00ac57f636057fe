#include "pugm/gaussian.hpp"

#include <cmath>
#include <sstream>

namespace pugm {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw InputError(std::string(what) + " is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InputError(std::string(what) + " is not symmetric");
}

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string(what) + " is not positive definite");
  return llt;
}

}  // namespace

Eigen::MatrixXd GaussianProfileParams::sigma(int x) const {
  const Eigen::MatrixXd& om = omega.at(x);
  require_symmetric(om, "omega");
  auto llt = checked_llt(om, "omega");
  return llt.solve(Eigen::MatrixXd::Identity(om.rows(), om.cols()));
}

void GaussianProfileParams::validate() const {
  if (static_cast<int>(beta.size()) != q() || static_cast<int>(omega.size()) != q())
    throw InputError("params need one beta and one omega per level");
  if (alpha.size() != p()) throw InputError("alpha has wrong length");
  if (!zeta_explicit.empty() && static_cast<int>(zeta_explicit.size()) != q())
    throw InputError("explicit zeta needs one vector per level");
  for (int x = 0; x < q(); ++x) {
    if (beta[x].size() != p()) throw InputError("beta has wrong length at level " + levels[x]);
    if (omega[x].rows() != p() || omega[x].cols() != p())
      throw InputError("omega has wrong shape at level " + levels[x]);
    require_symmetric(omega[x], "omega");
    checked_llt(omega[x], "omega");
    if (!zeta_explicit.empty()) {
      const double drift = (omega[x] * beta[x] - zeta_explicit[x]).cwiseAbs().maxCoeff();
      if (drift > 1e-8)
        throw InputError("explicit zeta inconsistent with omega * beta at level " + levels[x]);
    }
  }
}

void ProfileDataset::validate() const {
  if (levels.size() != data.size()) throw InputError("dataset needs one matrix per level");
  if (data.empty()) throw InputError("empty dataset");
  const auto cols = data.front().cols();
  for (size_t x = 0; x < data.size(); ++x) {
    if (data[x].rows() < 1) throw InputError("level " + levels[x] + " has no observations");
    if (data[x].cols() != cols) throw InputError("level " + levels[x] + " has wrong column count");
  }
}

Eigen::VectorXd zeta_from(const Eigen::VectorXd& beta_x, const Eigen::MatrixXd& omega_x) {
  if (omega_x.rows() != beta_x.size()) throw InputError("beta/omega dimension mismatch");
  require_symmetric(omega_x, "omega");
  checked_llt(omega_x, "omega");
  return omega_x * beta_x;
}

ConformanceResult conforms_to_graph(const GaussianProfileParams& params,
                                    const ProfileGraph& graph, double tol) {
  if (params.p() != graph.p() || params.q() != graph.q())
    throw InputError("parameter and graph dimensions differ");
  ConformanceResult res;
  for (int a = 0; a < graph.p(); ++a) {
    if (graph.kind(a) != VertexKind::square) continue;
    for (int x = 0; x < graph.q(); ++x) {
      const double z = params.zeta(x)(a);
      if (std::abs(z) > tol) {
        std::ostringstream os;
        os << "square vertex " << graph.vertex_name(a) << ": zeta(" << graph.space().name(x)
           << ") = " << z;
        res.violations.push_back(os.str());
      }
    }
  }
  for (int a = 0; a < graph.p(); ++a) {
    for (int b = a + 1; b < graph.p(); ++b) {
      const LevelSet z = graph.label(a, b);
      for (int x = 0; x < graph.q(); ++x) {
        if (!((z >> x) & 1U)) continue;
        const double w = params.omega[x](a, b);
        if (std::abs(w) > tol) {
          std::ostringstream os;
          os << "pair {" << graph.vertex_name(a) << "," << graph.vertex_name(b) << "} at level "
             << graph.space().name(x) << ": omega = " << w;
          res.violations.push_back(os.str());
        }
      }
    }
  }
  return res;
}

ExtractionResult extract_profile_graph(const PosteriorSummaries& post, double edge_cut,
                                       double vertex_cut) {
  const int p = post.p(), q = post.q();
  if (post.theta_star.size() != p || static_cast<int>(post.r_star.size()) != q)
    throw InputError("incomplete posterior summaries");
  StateSpace space(post.levels);
  std::vector<LevelSet> labels(static_cast<size_t>(p) * (p - 1) / 2, 0);
  std::vector<VertexKind> kinds(p, VertexKind::circle);
  ProfileGraph skeleton(space, post.vertices, labels);  // pair indexing helper
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      LevelSet z = 0;
      for (int x = 0; x < q; ++x)
        if (post.r_star[x](i, j) <= edge_cut) z |= LevelSet{1} << x;
      labels[skeleton.pair_index(i, j)] = z;
    }
  }
  ExtractionResult res{ProfileGraph(space, post.vertices, labels), {}};
  const LevelSet full = space.full_mask();
  for (int i = 0; i < p; ++i) {
    if (post.theta_star(i) > vertex_cut) continue;
    bool dotted = false;
    for (int j = 0; j < p && !dotted; ++j) {
      if (j == i) continue;
      const LevelSet z = labels[skeleton.pair_index(i, j)];
      dotted = z != 0 && z != full;
    }
    if (dotted)
      res.demoted.push_back(post.vertices[i]);
    else
      kinds[i] = VertexKind::square;
  }
  res.graph = ProfileGraph(space, post.vertices, labels, kinds);
  return res;
}

}  // namespace pugm
