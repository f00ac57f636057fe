#include <doctest.h>

#include <random>

#include "pugm/gaussian.hpp"
#include "pugm/simulation.hpp"
#include "support/figures.hpp"

using namespace pugm;

TEST_CASE("zeta from beta and omega") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << 1.0, 2.0;
  CHECK(zeta_from(b, eye).isApprox(b));
  CHECK(zeta_from(Eigen::VectorXd::Zero(2), eye).norm() == 0.0);

  Eigen::MatrixXd m(2, 2);
  m << 2.0, 0.5, 0.5, 1.0;
  Eigen::VectorXd b2(2);
  b2 << 1.0, 0.0;
  const Eigen::VectorXd z = zeta_from(b2, m);
  CHECK(z(0) == doctest::Approx(2.0));
  CHECK(z(1) == doctest::Approx(0.5));

  Eigen::MatrixXd neg(2, 2);
  neg << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(zeta_from(b2, neg), NumericalError);
}

namespace {

GaussianProfileParams diag_params(int p, int q) {
  GaussianProfileParams params;
  for (int i = 0; i < p; ++i) params.vertices.push_back("y" + std::to_string(i + 1));
  for (int x = 0; x < q; ++x) params.levels.push_back(std::to_string(x));
  params.alpha = Eigen::VectorXd::Zero(p);
  params.beta.assign(q, Eigen::VectorXd::Zero(p));
  params.omega.assign(q, Eigen::MatrixXd::Identity(p, p));
  return params;
}

}  // namespace

TEST_CASE("diagonal parameters conform to every graph") {
  auto params = diag_params(4, 3);
  params.vertices = {"a", "b", "c", "d"};
  const auto g = testing::g1();
  CHECK(conforms_to_graph(params, g, 0.0).conforms());
  CHECK(conforms_to_graph(params, testing::square_d_example(), 0.0).conforms());
}

TEST_CASE("a nonzero entry at a labelled level is reported") {
  auto params = diag_params(4, 3);
  params.vertices = {"a", "b", "c", "d"};
  const auto g = testing::g1();
  const int b = 1, c = 2, level1 = 1;
  params.omega[level1](b, c) = params.omega[level1](c, b) = 0.3;
  const auto res = conforms_to_graph(params, g, 0.0);
  REQUIRE_FALSE(res.conforms());
  CHECK(res.violations.front().find("{b,c}") != std::string::npos);
  CHECK(res.violations.front().find("level 1") != std::string::npos);
}

TEST_CASE("simulation truth conforms to its own graph exactly") {
  ScenarioSpec spec;
  spec.scenario = 1;
  spec.p = 8;
  spec.q = 3;
  spec.n_x = 5;
  spec.seed = 11;
  const auto sim = generate(spec);
  CHECK(conforms_to_graph(sim.truth.params, sim.truth.graph, 0.0).conforms());
}

TEST_CASE("graph extraction thresholds") {
  PosteriorSummaries post;
  post.vertices = {"a", "b", "c"};
  post.levels = {"0", "1", "2", "3"};
  post.theta_star = Eigen::VectorXd::Ones(3);
  post.gamma_star = Eigen::MatrixXd::Zero(3, 3);
  post.r_star.assign(4, Eigen::MatrixXd::Zero(3, 3));

  SUBCASE("all r* zero gives the empty graph") {
    const auto g = extract_profile_graph(post).graph;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) CHECK(g.is_missing(i, j));
  }

  SUBCASE("a pair certain at every level becomes a full edge") {
    for (auto& r : post.r_star) r(0, 1) = r(1, 0) = 1.0;
    const auto g = extract_profile_graph(post).graph;
    CHECK(g.is_full(0, 1));
    CHECK(g.is_missing(0, 2));
  }

  SUBCASE("mixed r* values yield the dotted label of the sub-threshold levels") {
    const double r[4] = {0.9, 0.9, 0.1, 0.1};
    for (int x = 0; x < 4; ++x) post.r_star[x](0, 1) = post.r_star[x](1, 0) = r[x];
    const auto g = extract_profile_graph(post, 0.5, 0.5).graph;
    CHECK(g.label(0, 1) == ((LevelSet{1} << 2) | (LevelSet{1} << 3)));
  }
}

TEST_CASE("square candidates demote to circle when a dotted edge blocks them") {
  PosteriorSummaries post;
  post.vertices = {"a", "b"};
  post.levels = {"0", "1"};
  post.theta_star = Eigen::VectorXd::Zero(2);  // both want to be square
  post.gamma_star = Eigen::MatrixXd::Zero(2, 2);
  post.r_star.assign(2, Eigen::MatrixXd::Zero(2, 2));
  post.r_star[0](0, 1) = post.r_star[0](1, 0) = 1.0;  // dotted: present at 0, absent at 1
  const auto res = extract_profile_graph(post);
  CHECK(res.demoted == std::vector<std::string>{"a", "b"});
  CHECK(validate(res.graph.to_spec()).ok());
  for (int v = 0; v < 2; ++v) CHECK(res.graph.kind(v) == VertexKind::circle);
}

TEST_CASE("extraction output always validates") {
  // randomized summaries across a few seeds
  for (unsigned seed = 1; seed <= 5; ++seed) {
    PosteriorSummaries post;
    post.vertices = {"a", "b", "c", "d", "e"};
    post.levels = {"0", "1", "2"};
    std::mt19937_64 eng(seed);
    auto u = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    post.theta_star.resize(5);
    for (int i = 0; i < 5; ++i) post.theta_star(i) = u();
    post.gamma_star = Eigen::MatrixXd::Zero(5, 5);
    post.r_star.assign(3, Eigen::MatrixXd::Zero(5, 5));
    for (int x = 0; x < 3; ++x)
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) post.r_star[x](i, j) = post.r_star[x](j, i) = u();
    const auto res = extract_profile_graph(post);
    CHECK(validate(res.graph.to_spec()).ok());
  }
}

TEST_CASE("derived sigma inverts omega") {
  ScenarioSpec spec;
  spec.scenario = 2;
  spec.p = 6;
  spec.q = 4;
  spec.n_x = 3;
  spec.seed = 5;
  const auto sim = generate(spec);
  for (int x = 0; x < spec.q; ++x) {
    const Eigen::MatrixXd prod = sim.truth.params.sigma(x) * sim.truth.params.omega[x];
    CHECK((prod - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
  }
}
