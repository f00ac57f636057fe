#include <doctest.h>

#include "pugm/simulation.hpp"

using namespace pugm;

TEST_CASE("baseline precision bands") {
  const auto m = baseline_precision(4);
  for (int a = 0; a < 4; ++a) CHECK(m(a, a) == 1.0);
  CHECK(m(0, 1) == 0.5);
  CHECK(m(1, 2) == 0.5);
  CHECK(m(2, 3) == 0.5);
  CHECK(m(0, 2) == 0.4);
  CHECK(m(1, 3) == 0.4);
  CHECK(m(0, 3) == 0.0);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("baseline precision is positive definite") {
  for (int p : {3, 5, 20, 60}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(baseline_precision(p));
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
  CHECK_THROWS_AS(baseline_precision(2), InputError);
}

TEST_CASE("scenario 4 without extra support keeps the baseline everywhere") {
  ScenarioSpec spec;
  spec.scenario = 4;
  spec.p = 10;
  spec.q = 4;
  spec.s = 0.0;
  spec.n_x = 5;
  spec.seed = 1;
  const auto omegas = derive_level_precisions(baseline_precision(10), spec);
  for (int x = 0; x < 4; ++x)
    CHECK((omegas[x] - baseline_precision(10)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scenario 2 shares supports within groups and differs across them") {
  ScenarioSpec spec;
  spec.scenario = 2;
  spec.p = 20;
  spec.q = 4;
  spec.s = 0.0;
  spec.n_x = 5;
  spec.seed = 3;
  const auto omegas = derive_level_precisions(baseline_precision(20), spec);
  CHECK((omegas[0] - omegas[1]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((omegas[2] - omegas[3]).cwiseAbs().maxCoeff() == 0.0);
  // first group is the unthinned baseline; second group lost entries
  CHECK((omegas[0] - baseline_precision(20)).cwiseAbs().maxCoeff() == 0.0);
  int removed = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j)
      if (omegas[0](i, j) != 0.0 && omegas[2](i, j) == 0.0) ++removed;
  CHECK(removed > 0);
}

TEST_CASE("scenario 1 thins every non-baseline level independently") {
  ScenarioSpec spec;
  spec.scenario = 1;
  spec.p = 20;
  spec.q = 4;
  spec.s = 0.0;
  spec.n_x = 5;
  spec.seed = 5;
  const auto omegas = derive_level_precisions(baseline_precision(20), spec);
  CHECK((omegas[0] - baseline_precision(20)).cwiseAbs().maxCoeff() == 0.0);
  // with 37 candidate entries per level, identical thinnings are vanishingly unlikely
  CHECK((omegas[1] - omegas[2]).cwiseAbs().maxCoeff() > 0.0);
  CHECK((omegas[2] - omegas[3]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("extra support activation grows with s") {
  ScenarioSpec spec;
  spec.scenario = 4;
  spec.p = 20;
  spec.q = 4;
  spec.n_x = 5;
  spec.seed = 7;
  auto nonzeros = [&](double s) {
    spec.s = s;
    const auto omegas = derive_level_precisions(baseline_precision(20), spec);
    int nz = 0;
    for (int i = 0; i < 20; ++i)
      for (int j = i + 1; j < 20; ++j)
        if (omegas[0](i, j) != 0.0) ++nz;
    return nz;
  };
  const int at_zero = nonzeros(0.0);
  const int at_mid = nonzeros(0.2);
  const int at_high = nonzeros(0.6);
  CHECK(at_zero == 37);  // the two bands at p = 20
  CHECK(at_mid > at_zero);
  CHECK(at_high > at_mid);
}

TEST_CASE("derived precisions are positive definite") {
  for (int scenario = 1; scenario <= 4; ++scenario) {
    ScenarioSpec spec;
    spec.scenario = scenario;
    spec.p = 15;
    spec.q = 4;
    spec.s = 0.1;
    spec.n_x = 5;
    spec.seed = 11 + scenario;
    for (const auto& om : derive_level_precisions(baseline_precision(15), spec)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(om);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("truth zeta layout") {
  const auto z = truth_zeta(20, 4);
  CHECK(z.row(0).cwiseAbs().maxCoeff() == 0.0);
  for (int x = 1; x < 4; ++x) {
    for (int a = 0; a < 4; ++a) CHECK(z(x, a) == 1.0);
    for (int a = 4; a < 20; ++a) CHECK(z(x, a) == 0.0);
  }
  const auto z4 = truth_zeta(4, 3);
  for (int x = 1; x < 3; ++x)
    for (int a = 0; a < 4; ++a) CHECK(z4(x, a) == 1.0);
  CHECK_THROWS_AS(truth_zeta(3, 2), InputError);
}

TEST_CASE("generation shapes and determinism") {
  ScenarioSpec spec;
  spec.scenario = 1;
  spec.p = 20;
  spec.q = 4;
  spec.s = 0.01;
  spec.n_x = 50;
  spec.seed = 7;
  const auto a = generate(spec);
  CHECK(a.dataset.q() == 4);
  for (int x = 0; x < 4; ++x) {
    CHECK(a.dataset.data[x].rows() == 50);
    CHECK(a.dataset.data[x].cols() == 20);
  }
  const auto b = generate(spec);
  for (int x = 0; x < 4; ++x)
    CHECK((a.dataset.data[x] - b.dataset.data[x]).cwiseAbs().maxCoeff() == 0.0);
  spec.seed = 8;
  const auto c = generate(spec);
  CHECK((a.dataset.data[0] - c.dataset.data[0]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("truth graph labels mirror the zero patterns and kinds obey the square rule") {
  ScenarioSpec spec;
  spec.scenario = 2;
  spec.p = 12;
  spec.q = 3;
  spec.s = 0.05;
  spec.n_x = 5;
  spec.seed = 13;
  const auto sim = generate(spec);
  const auto& g = sim.truth.graph;
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) {
      for (int x = 0; x < 3; ++x) {
        const bool zero = sim.truth.params.omega[x](i, j) == 0.0;
        const bool in_label = ((g.label(i, j) >> x) & 1U) != 0;
        CHECK(zero == in_label);
      }
    }
  }
  CHECK(validate(g.to_spec()).ok());
  // vertices 1..4 carry the external effect: always circle
  for (int a = 0; a < 4; ++a) CHECK(g.kind(a) == VertexKind::circle);
  CHECK(conforms_to_graph(sim.truth.params, g, 0.0).conforms());
}

TEST_CASE("moments of the sampler match the target distribution") {
  ScenarioSpec spec;
  spec.scenario = 4;
  spec.p = 6;
  spec.q = 2;
  spec.n_x = 20000;
  spec.seed = 99;
  const auto sim = generate(spec);
  for (int x = 0; x < 2; ++x) {
    const Eigen::MatrixXd sigma = sim.truth.params.sigma(x);
    const Eigen::VectorXd mean = sim.dataset.data[x].colwise().mean();
    for (int i = 0; i < 6; ++i) {
      const double se = std::sqrt(sigma(i, i) / spec.n_x);
      CHECK(std::abs(mean(i) - sim.truth.params.beta[x](i)) < 4.0 * se);
    }
    const Eigen::MatrixXd centered =
        sim.dataset.data[x].rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / (spec.n_x - 1.0);
    CHECK((cov - sigma).norm() / sigma.norm() < 0.05);
  }
}
