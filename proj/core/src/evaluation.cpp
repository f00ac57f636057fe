#include "pugm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pugm/rng.hpp"

namespace pugm {

EdgeConfusion confusion(const MultipleGraphs& truth, const MultipleGraphs& estimate) {
  if (truth.vertices() != estimate.vertices() || truth.levels() != estimate.levels())
    throw InputError("confusion needs matching vertex sets and levels");
  EdgeConfusion out;
  out.levels = truth.levels();
  out.per_level.resize(truth.q());
  for (int x = 0; x < truth.q(); ++x) {
    ConfusionCounts& c = out.per_level[x];
    for (int i = 0; i < truth.p(); ++i) {
      for (int j = i + 1; j < truth.p(); ++j) {
        const bool t = truth.edge(x, i, j);
        const bool e = estimate.edge(x, i, j);
        if (t && e) ++c.tp;
        else if (!t && e) ++c.fp;
        else if (t && !e) ++c.fn;
        else ++c.tn;
      }
    }
    out.pooled.tp += c.tp;
    out.pooled.fp += c.fp;
    out.pooled.tn += c.tn;
    out.pooled.fn += c.fn;
  }
  return out;
}

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  if (c.total() > 0)
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fn > 0)
    m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.tn + c.fp > 0)
    m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  if (m.sensitivity && m.specificity)
    m.balanced_accuracy = 0.5 * (*m.sensitivity + *m.specificity);
  return m;
}

std::optional<double> auc(const std::vector<Eigen::MatrixXd>& scores,
                          const MultipleGraphs& truth) {
  if (static_cast<int>(scores.size()) != truth.q())
    throw InputError("auc needs one score matrix per level");
  std::vector<std::pair<double, int>> obs;
  for (int x = 0; x < truth.q(); ++x) {
    if (scores[x].rows() != truth.p() || scores[x].cols() != truth.p())
      throw InputError("score matrix has wrong shape");
    for (int i = 0; i < truth.p(); ++i)
      for (int j = i + 1; j < truth.p(); ++j)
        obs.emplace_back(scores[x](i, j), truth.edge(x, i, j) ? 1 : 0);
  }
  std::int64_t npos = 0;
  for (const auto& [s, y] : obs) npos += y;
  const std::int64_t nneg = static_cast<std::int64_t>(obs.size()) - npos;
  if (npos == 0 || nneg == 0) return std::nullopt;

  std::sort(obs.begin(), obs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // average ranks over ties
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < obs.size()) {
    size_t j = i;
    while (j < obs.size() && obs[j].first == obs[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (size_t k = i; k < j; ++k)
      if (obs[k].second) rank_sum_pos += avg_rank;
    i = j;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(npos) * (npos + 1);
  return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

namespace {

MultipleGraphs graphs_from_fit(const ProfileDataset& data, const Hyperparameters& hyper,
                               const FitConfig& fit_cfg, double edge_cut, double vertex_cut) {
  EmState state = fit(data, hyper, fit_cfg);
  ExtractionResult ex = extract_profile_graph(state.summaries, edge_cut, vertex_cut);
  return induced_multiple_graphs(ex.graph);
}

}  // namespace

RobustnessSummary robustness_harness(const ProfileDataset& data, const Hyperparameters& hyper,
                                     const FitConfig& fit_cfg, const RobustnessConfig& cfg) {
  data.validate();
  if (cfg.fraction < 0.0 || cfg.fraction >= 1.0) throw InputError("fraction must lie in [0,1)");
  if (cfg.reps < 1) throw InputError("need at least one repetition");
  for (int x = 0; x < data.q(); ++x)
    if (data.n(x) - static_cast<int>(cfg.fraction * data.n(x)) < 1)
      throw InputError("dropping " + std::to_string(cfg.fraction) + " leaves level " +
                       data.levels[x] + " empty");

  const MultipleGraphs reference =
      graphs_from_fit(data, hyper, fit_cfg, cfg.edge_cut, cfg.vertex_cut);

  const int q = data.q();
  std::vector<std::vector<std::optional<double>>> per_level_ba(q);
  std::vector<std::optional<double>> overall_ba;

  for (int rep = 0; rep < cfg.reps; ++rep) {
    ProfileDataset reduced;
    reduced.levels = data.levels;
    reduced.data.resize(q);
    Rng rng(derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(rep)));
    for (int x = 0; x < q; ++x) {
      const int n = data.n(x);
      const int drop = static_cast<int>(cfg.fraction * n);
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      for (int k = 0; k < drop; ++k) {
        const int pick = k + static_cast<int>(rng.uniform() * (n - k));
        std::swap(idx[k], idx[std::min(pick, n - 1)]);
      }
      std::sort(idx.begin() + drop, idx.end());
      Eigen::MatrixXd rows(n - drop, data.p());
      for (int k = drop; k < n; ++k) rows.row(k - drop) = data.data[x].row(idx[k]);
      reduced.data[x] = std::move(rows);
    }
    const MultipleGraphs est =
        graphs_from_fit(reduced, hyper, fit_cfg, cfg.edge_cut, cfg.vertex_cut);
    const EdgeConfusion conf = confusion(reference, est);
    for (int x = 0; x < q; ++x)
      per_level_ba[x].push_back(metrics(conf.per_level[x]).balanced_accuracy);
    overall_ba.push_back(metrics(conf.pooled).balanced_accuracy);
  }

  auto summarize = [](const std::vector<std::optional<double>>& vals)
      -> std::pair<std::optional<double>, std::optional<double>> {
    std::vector<double> xs;
    for (const auto& v : vals)
      if (v) xs.push_back(*v);
    if (xs.empty()) return {std::nullopt, std::nullopt};
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    if (xs.size() == 1) return {mean, std::nullopt};
    double ss = 0.0;
    for (double v : xs) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
    return {mean, se};
  };

  RobustnessSummary out;
  out.levels = data.levels;
  out.reps = cfg.reps;
  out.fraction = cfg.fraction;
  out.mean_per_level.resize(q);
  out.se_per_level.resize(q);
  for (int x = 0; x < q; ++x)
    std::tie(out.mean_per_level[x], out.se_per_level[x]) = summarize(per_level_ba[x]);
  std::tie(out.mean_overall, out.se_overall) = summarize(overall_ba);
  return out;
}

}  // namespace pugm
