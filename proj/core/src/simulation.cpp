#include "pugm/simulation.hpp"

#include <cmath>

#include "pugm/rng.hpp"

namespace pugm {

namespace {

// seed streams: 0 = structure, 1 + x = data for level x
constexpr std::uint64_t kStructureStream = 0;

void repair_pd(Eigen::MatrixXd& m) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const double lo = eig.eigenvalues().minCoeff();
    if (lo > 0.05) return;
    m.diagonal().array() += std::abs(lo) + 0.1;
  }
  throw NumericalError("failed to restore positive definiteness");
}

std::vector<std::vector<int>> scenario_groups(int scenario, int q) {
  std::vector<std::vector<int>> groups;
  switch (scenario) {
    case 1:
      for (int x = 0; x < q; ++x) groups.push_back({x});
      break;
    case 2: {
      std::vector<int> first, second;
      for (int x = 0; x < q; ++x) (x < (q + 1) / 2 ? first : second).push_back(x);
      groups.push_back(first);
      if (!second.empty()) groups.push_back(second);
      break;
    }
    case 3: {
      std::vector<int> first;
      for (int x = 0; x + 1 < q; ++x) first.push_back(x);
      groups.push_back(first);
      groups.push_back({q - 1});
      break;
    }
    case 4: {
      std::vector<int> all;
      for (int x = 0; x < q; ++x) all.push_back(x);
      groups.push_back(all);
      break;
    }
    default:
      throw InputError("scenario must be 1, 2, 3 or 4");
  }
  return groups;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (scenario < 1 || scenario > 4) throw InputError("scenario must be 1..4");
  if (p < 4) throw InputError("need p >= 4");
  if (q < 2) throw InputError("need q >= 2");
  if (n_x < 1) throw InputError("need n_x >= 1");
  if (s < 0.0 || s >= 1.0) throw InputError("need 0 <= s < 1");
}

Eigen::MatrixXd baseline_precision(int p) {
  if (p < 3) throw InputError("need p >= 3");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  for (int a = 0; a + 1 < p; ++a) m(a, a + 1) = m(a + 1, a) = 0.5;
  for (int a = 0; a + 2 < p; ++a) m(a, a + 2) = m(a + 2, a) = 0.4;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("baseline precision not positive definite");
  return m;
}

std::vector<Eigen::MatrixXd> derive_level_precisions(const Eigen::MatrixXd& omega0,
                                                     const ScenarioSpec& spec) {
  spec.validate();
  const int p = static_cast<int>(omega0.rows());
  Rng rng(derive_seed(spec.seed, kStructureStream));
  std::vector<Eigen::MatrixXd> out(spec.q);
  const auto groups = scenario_groups(spec.scenario, spec.q);
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    Eigen::MatrixXd m = omega0;
    const bool baseline_group = gi == 0;
    if (!baseline_group) {
      for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
          if (m(a, b) != 0.0 && rng.uniform() < 0.5) m(a, b) = m(b, a) = 0.0;
    }
    if (spec.s > 0.0) {
      for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
          if (m(a, b) == 0.0 && rng.uniform() < spec.s) {
            const double v = rng.uniform() < 0.5 ? 0.4 : -0.4;
            m(a, b) = m(b, a) = v;
          }
        }
      }
    }
    repair_pd(m);
    for (int x : groups[gi]) out[x] = m;
  }
  return out;
}

Eigen::MatrixXd truth_zeta(int p, int q) {
  if (p < 4) throw InputError("truth zeta needs p >= 4");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(q, p);
  for (int x = 1; x < q; ++x)
    for (int a = 0; a < 4; ++a) z(x, a) = 1.0;
  return z;
}

SimulationResult generate(const ScenarioSpec& spec) {
  spec.validate();
  const int p = spec.p, q = spec.q;
  const Eigen::MatrixXd omega0 = baseline_precision(p);
  const auto omegas = derive_level_precisions(omega0, spec);
  const Eigen::MatrixXd zeta = truth_zeta(p, q);

  GaussianProfileParams params;
  for (int i = 0; i < p; ++i) params.vertices.push_back("y" + std::to_string(i + 1));
  for (int x = 0; x < q; ++x) params.levels.push_back(std::to_string(x));
  params.alpha = Eigen::VectorXd::Zero(p);
  params.omega = omegas;
  params.beta.resize(q);
  params.zeta_explicit.resize(q);
  for (int x = 0; x < q; ++x) params.zeta_explicit[x] = zeta.row(x).transpose();

  ProfileDataset dataset;
  dataset.levels = params.levels;
  dataset.data.resize(q);

  for (int x = 0; x < q; ++x) {
    Eigen::LLT<Eigen::MatrixXd> llt(omegas[x]);
    if (llt.info() != Eigen::Success)
      throw NumericalError("level precision not PD at level " + std::to_string(x));
    const Eigen::MatrixXd sigma = llt.solve(Eigen::MatrixXd::Identity(p, p));
    params.beta[x] = sigma * zeta.row(x).transpose();
    Eigen::LLT<Eigen::MatrixXd> sig_llt(0.5 * (sigma + sigma.transpose()));
    if (sig_llt.info() != Eigen::Success)
      throw NumericalError("level covariance not PD at level " + std::to_string(x));
    const Eigen::MatrixXd chol = sig_llt.matrixL();

    Rng rng(derive_seed(spec.seed, 1 + static_cast<std::uint64_t>(x)));
    Eigen::MatrixXd rows(spec.n_x, p);
    Eigen::VectorXd z(p);
    for (int k = 0; k < spec.n_x; ++k) {
      for (int i = 0; i < p; ++i) z(i) = rng.normal();
      rows.row(k) = (params.beta[x] + chol * z).transpose();
    }
    dataset.data[x] = std::move(rows);
  }

  // truth graph: labels collect the levels at which a pair's precision entry
  // is exactly zero; all-zero zeta rows become squares unless a dotted edge
  // forbids it
  StateSpace space(params.levels);
  std::vector<LevelSet> labels(static_cast<size_t>(p) * (p - 1) / 2, 0);
  ProfileGraph indexer(space, params.vertices, labels);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      LevelSet z = 0;
      for (int x = 0; x < q; ++x)
        if (omegas[x](i, j) == 0.0) z |= LevelSet{1} << x;
      labels[indexer.pair_index(i, j)] = z;
    }
  }
  std::vector<VertexKind> kinds(p, VertexKind::circle);
  const LevelSet full = space.full_mask();
  for (int i = 0; i < p; ++i) {
    bool zeta_zero = true;
    for (int x = 0; x < q && zeta_zero; ++x) zeta_zero = zeta(x, i) == 0.0;
    if (!zeta_zero) continue;
    bool dotted = false;
    for (int j = 0; j < p && !dotted; ++j) {
      if (j == i) continue;
      const LevelSet z = labels[indexer.pair_index(std::min(i, j), std::max(i, j))];
      dotted = z != 0 && z != full;
    }
    if (!dotted) kinds[i] = VertexKind::square;
  }

  ProfileGraph truth_graph(space, params.vertices, labels, kinds);
  return SimulationResult{std::move(dataset), {std::move(params), std::move(truth_graph)}};
}

}  // namespace pugm
