#include <benchmark/benchmark.h>

#include <random>

#include "pugm/bayes_em.hpp"
#include "pugm/markov.hpp"
#include "pugm/simulation.hpp"

namespace {

pugm::ProfileGraph random_graph(int p, int q, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::vector<std::string> vs, ls;
  for (int v = 0; v < p; ++v) vs.push_back("v" + std::to_string(v));
  for (int x = 0; x < q; ++x) ls.push_back(std::to_string(x));
  pugm::StateSpace space(ls);
  std::vector<pugm::LevelSet> labels(p * (p - 1) / 2);
  for (auto& z : labels) z = eng() & space.full_mask();
  return pugm::ProfileGraph(space, vs, labels);
}

void bm_x_separates(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto g = random_graph(p, 4, 3);
  std::vector<int> a{0}, b{p - 1}, c;
  for (int v = 1; v < p - 1; v += 3) c.push_back(v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pugm::x_separates_idx(g, a, b, c, 1));
  }
}
BENCHMARK(bm_x_separates)->Arg(20)->Arg(60)->Arg(120);

void bm_csmp_enumeration(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 3, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pugm::csmp_statements(g));
  }
}
BENCHMARK(bm_csmp_enumeration)->Arg(8)->Arg(10)->Arg(12);

void bm_e_step(benchmark::State& state) {
  pugm::ScenarioSpec spec;
  spec.scenario = 1;
  spec.p = static_cast<int>(state.range(0));
  spec.q = 4;
  spec.n_x = 50;
  spec.seed = 7;
  const auto sim = pugm::generate(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pugm::e_step(sim.truth.params, pugm::Hyperparameters{}));
  }
}
BENCHMARK(bm_e_step)->Arg(20)->Arg(50);

void bm_m_step_omega(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  pugm::ScenarioSpec spec;
  spec.scenario = 4;
  spec.p = p;
  spec.q = 2;
  spec.n_x = 50;
  spec.seed = 9;
  const auto sim = pugm::generate(spec);
  const Eigen::MatrixXd& data = sim.dataset.data[0];
  const Eigen::VectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd r = data.rowwise() - mean.transpose();
  const Eigen::MatrixXd scatter = (r.transpose() * r) / 50.0;
  const Eigen::MatrixXd rstar = Eigen::MatrixXd::Constant(p, p, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pugm::m_step_omega(scatter, 50, rstar, pugm::Hyperparameters{}));
  }
}
BENCHMARK(bm_m_step_omega)->Arg(20)->Arg(50);

void bm_full_fit(benchmark::State& state) {
  pugm::ScenarioSpec spec;
  spec.scenario = 1;
  spec.p = 20;
  spec.q = 4;
  spec.n_x = 50;
  spec.s = 0.010;
  spec.seed = 11;
  const auto sim = pugm::generate(spec);
  pugm::FitConfig cfg;
  cfg.max_iter = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pugm::fit(sim.dataset, pugm::Hyperparameters{}, cfg));
  }
}
BENCHMARK(bm_full_fit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
