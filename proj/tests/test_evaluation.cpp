#include <doctest.h>

#include <random>

#include "pugm/evaluation.hpp"
#include "pugm/simulation.hpp"
#include "support/oracle.hpp"

using namespace pugm;

namespace {

MultipleGraphs ring_graph(int p, int q, int stride) {
  std::vector<std::string> vs, ls;
  for (int v = 0; v < p; ++v) vs.push_back("v" + std::to_string(v));
  for (int x = 0; x < q; ++x) ls.push_back(std::to_string(x));
  MultipleGraphs mg(vs, ls);
  for (int x = 0; x < q; ++x)
    for (int v = 0; v < p; ++v) mg.set_edge(x, v, (v + stride) % p, true);
  return mg;
}

}  // namespace

TEST_CASE("confusion of an estimate against itself and against its complement") {
  const auto truth = ring_graph(6, 2, 1);
  const auto same = confusion(truth, truth);
  CHECK(same.pooled.fp == 0);
  CHECK(same.pooled.fn == 0);
  CHECK(same.pooled.total() == 2 * 15);

  MultipleGraphs complement = truth;
  for (int x = 0; x < 2; ++x)
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) complement.set_edge(x, i, j, !truth.edge(x, i, j));
  const auto opposite = confusion(truth, complement);
  CHECK(opposite.pooled.tp == 0);
  CHECK(opposite.pooled.tn == 0);
}

TEST_CASE("hand-counted four-vertex cross-tab") {
  std::vector<std::string> vs{"a", "b", "c", "d"};
  std::vector<std::string> ls{"0"};
  MultipleGraphs truth(vs, ls), est(vs, ls);
  truth.set_edge(0, 0, 1, true);   // ab: hit
  truth.set_edge(0, 1, 2, true);   // bc: miss
  est.set_edge(0, 0, 1, true);
  est.set_edge(0, 2, 3, true);     // cd: false alarm
  const auto c = confusion(truth, est);
  CHECK(c.pooled.tp == 1);
  CHECK(c.pooled.fn == 1);
  CHECK(c.pooled.fp == 1);
  CHECK(c.pooled.tn == 3);
  // pooled counts equal the per-level sums by construction
  std::int64_t sum = 0;
  for (const auto& lvl : c.per_level) sum += lvl.total();
  CHECK(sum == c.pooled.total());
}

TEST_CASE("metric arithmetic and undefined markers") {
  ConfusionCounts c{3, 2, 10, 1};
  const auto m = metrics(c);
  CHECK(*m.sensitivity == doctest::Approx(0.75));
  CHECK(*m.specificity == doctest::Approx(10.0 / 12.0));
  CHECK(*m.balanced_accuracy == doctest::Approx(0.5 * (0.75 + 10.0 / 12.0)));
  CHECK(*m.accuracy == doctest::Approx(13.0 / 16.0));

  ConfusionCounts no_pos{0, 2, 10, 0};
  CHECK_FALSE(metrics(no_pos).sensitivity.has_value());
  CHECK_FALSE(metrics(no_pos).balanced_accuracy.has_value());

  ConfusionCounts perfect{5, 0, 7, 0};
  const auto mp = metrics(perfect);
  CHECK(*mp.accuracy == 1.0);
  CHECK(*mp.balanced_accuracy == 1.0);
}

TEST_CASE("auc equals the pairwise-comparison brute force") {
  const auto truth = ring_graph(6, 2, 1);
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::MatrixXd> scores(2, Eigen::MatrixXd::Zero(6, 6));
  std::vector<double> flat;
  std::vector<int> labels;
  for (int x = 0; x < 2; ++x) {
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        const double v = std::round(unif(eng) * 8.0) / 8.0;  // force some ties
        scores[x](i, j) = scores[x](j, i) = v;
        flat.push_back(v);
        labels.push_back(truth.edge(x, i, j) ? 1 : 0);
      }
    }
  }
  const auto a = auc(scores, truth);
  REQUIRE(a.has_value());
  CHECK(*a == doctest::Approx(testing::auc_bruteforce(flat, labels)).epsilon(1e-12));
}

TEST_CASE("auc corner cases and rank invariance") {
  const auto truth = ring_graph(5, 1, 1);
  std::vector<Eigen::MatrixXd> scores(1, Eigen::MatrixXd::Zero(5, 5));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      scores[0](i, j) = scores[0](j, i) = truth.edge(0, i, j) ? 1.0 : 0.0;
  CHECK(*auc(scores, truth) == 1.0);

  std::vector<Eigen::MatrixXd> flat(1, Eigen::MatrixXd::Constant(5, 5, 0.3));
  CHECK(*auc(flat, truth) == 0.5);

  // strictly increasing transforms leave the statistic unchanged
  std::mt19937_64 eng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::MatrixXd> raw(1, Eigen::MatrixXd::Zero(5, 5));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) raw[0](i, j) = raw[0](j, i) = unif(eng);
  std::vector<Eigen::MatrixXd> warped = raw;
  warped[0] = (3.0 * raw[0]).array().exp();
  CHECK(*auc(raw, truth) == doctest::Approx(*auc(warped, truth)).epsilon(1e-12));

  // single-class truth has no AUC
  MultipleGraphs empty(truth.vertices(), truth.levels());
  CHECK_FALSE(auc(raw, empty).has_value());
}

TEST_CASE("robustness harness at fraction zero is exact") {
  ScenarioSpec spec;
  spec.scenario = 4;
  spec.p = 8;
  spec.q = 4;
  spec.n_x = 150;
  spec.seed = 21;
  const auto sim = generate(spec);
  RobustnessConfig cfg;
  cfg.fraction = 0.0;
  cfg.reps = 3;
  cfg.seed = 5;
  FitConfig fit_cfg;
  fit_cfg.max_iter = 60;
  const auto sum = robustness_harness(sim.dataset, Hyperparameters{}, fit_cfg, cfg);
  REQUIRE(sum.mean_overall.has_value());
  CHECK(*sum.mean_overall == 1.0);
  for (int x = 0; x < 4; ++x) {
    REQUIRE(sum.mean_per_level[x].has_value());
    CHECK(*sum.mean_per_level[x] == 1.0);
  }
}

TEST_CASE("robustness harness is deterministic under a fixed seed") {
  ScenarioSpec spec;
  spec.scenario = 4;
  spec.p = 6;
  spec.q = 4;
  spec.n_x = 120;
  spec.seed = 2;
  const auto sim = generate(spec);
  RobustnessConfig cfg;
  cfg.fraction = 0.2;
  cfg.reps = 2;
  cfg.seed = 77;
  FitConfig fit_cfg;
  fit_cfg.max_iter = 40;
  const auto a = robustness_harness(sim.dataset, Hyperparameters{}, fit_cfg, cfg);
  const auto b = robustness_harness(sim.dataset, Hyperparameters{}, fit_cfg, cfg);
  CHECK(*a.mean_overall == *b.mean_overall);
  CHECK_THROWS_AS(
      ([&] {
        RobustnessConfig bad = cfg;
        bad.fraction = 1.0;
        robustness_harness(sim.dataset, Hyperparameters{}, fit_cfg, bad);
      }()),
      InputError);
}
