#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pugm/bayes_em.hpp"
#include "pugm/evaluation.hpp"
#include "pugm/io.hpp"
#include "pugm/markov.hpp"
#include "pugm/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct HyperFlags {
  std::string file;
  pugm::Hyperparameters hyper;

  void attach(CLI::App* cmd) {
    cmd->add_option("--hyper", file, "hyperparameter JSON file");
    cmd->add_option("--p1", hyper.p1, "prior inclusion probability of gamma");
    cmd->add_option("--p2", hyper.p2, "prior inclusion probability of theta");
    cmd->add_option("--p3", hyper.p3, "per-profile edge probability (free branch)");
    cmd->add_option("--p4", hyper.p4, "shared edge probability (tied branch)");
    cmd->add_option("--nu1", hyper.nu1, "Laplace slab scale on omega");
    cmd->add_option("--nu0", hyper.nu0, "Laplace spike scale on omega");
    cmd->add_option("--lambda1", hyper.lambda1, "Normal slab variance on beta");
    cmd->add_option("--lambda0", hyper.lambda0, "Normal spike variance on beta");
    cmd->add_option("--tau", hyper.tau, "Exponential rate on diagonal omega");
    cmd->add_option("--spectral-bound", hyper.spectral_bound, "hard bound on ||Omega||_2");
    cmd->add_option("--q-max", hyper.q_max, "cap for exact 2^q enumeration");
  }

  pugm::Hyperparameters resolve(const CLI::App* cmd) const {
    pugm::Hyperparameters h = hyper;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw pugm::InputError("cannot open '" + file + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw pugm::InputError("malformed JSON in '" + file + "': " + e.what());
      }
      pugm::Hyperparameters from_file;
      auto pick = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = j.at(key).get<double>();
      };
      pick("p1", from_file.p1);
      pick("p2", from_file.p2);
      pick("p3", from_file.p3);
      pick("p4", from_file.p4);
      pick("nu1", from_file.nu1);
      pick("nu0", from_file.nu0);
      pick("lambda1", from_file.lambda1);
      pick("lambda0", from_file.lambda0);
      pick("tau", from_file.tau);
      pick("spectral_bound", from_file.spectral_bound);
      if (j.contains("q_max")) from_file.q_max = j.at("q_max").get<int>();
      // command-line flags override the file
      h = from_file;
      if (cmd->count("--p1")) h.p1 = hyper.p1;
      if (cmd->count("--p2")) h.p2 = hyper.p2;
      if (cmd->count("--p3")) h.p3 = hyper.p3;
      if (cmd->count("--p4")) h.p4 = hyper.p4;
      if (cmd->count("--nu1")) h.nu1 = hyper.nu1;
      if (cmd->count("--nu0")) h.nu0 = hyper.nu0;
      if (cmd->count("--lambda1")) h.lambda1 = hyper.lambda1;
      if (cmd->count("--lambda0")) h.lambda0 = hyper.lambda0;
      if (cmd->count("--tau")) h.tau = hyper.tau;
      if (cmd->count("--spectral-bound")) h.spectral_bound = hyper.spectral_bound;
      if (cmd->count("--q-max")) h.q_max = hyper.q_max;
    }
    h.validate();
    return h;
  }
};

std::string find_graph_file(const std::string& path) {
  if (!fs::is_directory(path)) return path;
  for (const char* name : {"truth_graph.json", "graph.json", "estimated_graph.json"}) {
    const fs::path candidate = fs::path(path) / name;
    if (fs::exists(candidate)) return candidate.string();
  }
  throw pugm::InputError("no graph JSON found in directory '" + path + "'");
}

std::string opt_cell(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

void print_metric_row(std::ostream& os, const std::string& name, const pugm::Metrics& m,
                      const std::optional<double>& auc_value) {
  os << name << "\t" << opt_cell(m.accuracy) << "\t" << opt_cell(m.sensitivity) << "\t"
     << opt_cell(m.specificity) << "\t" << opt_cell(m.balanced_accuracy) << "\t"
     << opt_cell(auc_value) << "\n";
}

json metrics_json(const pugm::Metrics& m, const std::optional<double>& auc_value) {
  json j;
  if (m.accuracy) j["accuracy"] = *m.accuracy;
  if (m.sensitivity) j["sensitivity"] = *m.sensitivity;
  if (m.specificity) j["specificity"] = *m.specificity;
  if (m.balanced_accuracy) j["balanced_accuracy"] = *m.balanced_accuracy;
  if (auc_value) j["auc"] = *auc_value;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"profile undirected graphical models"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "generate a synthetic profile dataset with truth");
  pugm::ScenarioSpec spec;
  std::string sim_out;
  sim->add_option("--scenario", spec.scenario, "structural scenario 1..4")->required();
  sim->add_option("--p", spec.p, "vertex count")->required();
  sim->add_option("--q", spec.q, "level count")->required();
  sim->add_option("--s", spec.s, "extra-support activation probability");
  sim->add_option("--n", spec.n_x, "observations per level")->required();
  sim->add_option("--seed", spec.seed, "RNG seed");
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->callback([&] {
    pugm::SimulationResult res = pugm::generate(spec);
    fs::create_directories(sim_out);
    pugm::io::save_dataset(res.dataset, sim_out);
    pugm::io::save_params(res.truth.params, (fs::path(sim_out) / "truth_params.json").string());
    pugm::io::save_graph(res.truth.graph, (fs::path(sim_out) / "truth_graph.json").string());
    std::cout << "wrote " << res.dataset.q() << " level files, truth_params.json and "
              << "truth_graph.json to " << sim_out << "\n";
  });

  // --- fit ---
  auto* fit_cmd = app.add_subcommand("fit", "spike-and-slab EM fit");
  std::string fit_data, fit_out = "model.json", fit_trace, fit_init;
  HyperFlags fit_hyper;
  pugm::FitConfig fit_cfg;
  fit_cmd->add_option("--data", fit_data, "dataset directory or CSV")->required();
  fit_cmd->add_option("--out", fit_out, "model JSON output");
  fit_cmd->add_option("--trace", fit_trace, "objective trace CSV output");
  fit_cmd->add_option("--max-iter", fit_cfg.max_iter, "EM iteration cap");
  fit_cmd->add_option("--tol", fit_cfg.tol, "relative Q-change stopping tolerance");
  fit_cmd->add_option("--init", fit_init, "params JSON used as the initial beta/omega");
  fit_hyper.attach(fit_cmd);
  fit_cmd->callback([&] {
    const pugm::ProfileDataset data = pugm::io::load_dataset(fit_data);
    const pugm::Hyperparameters hyper = fit_hyper.resolve(fit_cmd);
    if (!fit_init.empty())
      fit_cfg.init =
          std::make_shared<pugm::GaussianProfileParams>(pugm::io::load_params(fit_init));
    const pugm::EmState state = pugm::fit(data, hyper, fit_cfg);
    pugm::io::save_model(state, fit_out);
    if (!fit_trace.empty()) pugm::io::write_trace_csv(state, fit_trace);
    std::cout << "fit: " << state.iterations << " iterations, "
              << (state.converged ? "converged" : "iteration cap reached") << ", Q = "
              << (state.q_trace.empty() ? 0.0 : state.q_trace.back()) << "\n";
  });

  // --- extract-graph ---
  auto* extract = app.add_subcommand("extract-graph", "profile graph from posterior summaries");
  std::string ex_model, ex_out = "graph.json";
  double edge_cut = 0.5, vertex_cut = 0.5;
  extract->add_option("--model", ex_model, "model JSON from fit")->required();
  extract->add_option("--out", ex_out, "graph JSON output");
  extract->add_option("--edge-cut", edge_cut, "r* threshold: level joins the label when below");
  extract->add_option("--vertex-cut", vertex_cut, "theta* threshold for square vertices");
  extract->callback([&] {
    const pugm::PosteriorSummaries post = pugm::io::load_model_summaries(ex_model);
    const pugm::ExtractionResult res = pugm::extract_profile_graph(post, edge_cut, vertex_cut);
    pugm::io::save_graph(res.graph, ex_out);
    std::cout << "wrote " << ex_out;
    if (!res.demoted.empty()) {
      std::cout << " (demoted to circle:";
      for (const auto& v : res.demoted) std::cout << " " << v;
      std::cout << ")";
    }
    std::cout << "\n";
  });

  // --- enumerate-independencies ---
  auto* enumerate = app.add_subcommand("enumerate-independencies",
                                       "independence statements of a profile graph");
  std::string prop = "gmp", en_graph, en_format = "text";
  pugm::EnumerationLimits limits;
  enumerate->add_option("--property", prop, "pmp|lmp|csmp|gmp")
      ->check(CLI::IsMember({"pmp", "lmp", "csmp", "gmp"}));
  enumerate->add_option("--graph", en_graph, "profile graph JSON")->required();
  enumerate->add_option("--format", en_format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  enumerate->add_option("--max-p", limits.max_p, "subset enumeration cap override");
  enumerate->callback([&] {
    const pugm::ProfileGraph g = pugm::io::load_graph(en_graph);
    std::vector<pugm::IndependenceStatement> stmts;
    if (prop == "pmp") stmts = pugm::pairwise_statements(g);
    else if (prop == "lmp") stmts = pugm::local_statements(g);
    else if (prop == "csmp") stmts = pugm::csmp_statements(g, limits);
    else stmts = pugm::gmp_statements(g, limits);
    std::cout << (en_format == "json" ? pugm::io::statements_to_json(stmts)
                                      : pugm::io::statements_to_text(stmts));
  });

  // --- chain-class ---
  auto* chain_class = app.add_subcommand("chain-class", "induced class of LWF chain graphs");
  std::string cc_graph, cc_out;
  chain_class->add_option("--graph", cc_graph, "profile graph JSON")->required();
  chain_class->add_option("--out", cc_out, "write the three chain graphs as JSON");
  chain_class->callback([&] {
    const pugm::ProfileGraph g = pugm::io::load_graph(cc_graph);
    const pugm::ChainClass cls = pugm::induced_chain_class(g);
    json j;
    j["min"] = json::parse(pugm::io::chain_to_json(cls.min));
    j["max"] = json::parse(pugm::io::chain_to_json(cls.max));
    j["unique"] = json::parse(pugm::io::chain_to_json(cls.unique));
    const std::string body = j.dump(2) + "\n";
    if (cc_out.empty())
      std::cout << body;
    else {
      std::ofstream(cc_out) << body;
      std::cout << "wrote " << cc_out << "\n";
    }
  });

  // --- check-compat ---
  auto* compat = app.add_subcommand("check-compat", "Markov compatibility of a chain graph");
  std::string co_graph, co_chain;
  compat->add_option("--graph", co_graph, "profile graph JSON")->required();
  compat->add_option("--chain", co_chain, "chain graph JSON")->required();
  compat->callback([&] {
    const pugm::ProfileGraph g = pugm::io::load_graph(co_graph);
    const pugm::ChainGraph c = pugm::io::load_chain(co_chain);
    const pugm::CompatibilityResult res = pugm::is_markov_compatible(c, g);
    if (res.compatible)
      std::cout << "compatible\n";
    else
      std::cout << "incompatible: " << res.reason << "\n";
  });

  // --- verify-thm1 ---
  auto* thm1 = app.add_subcommand("verify-thm1",
                                  "exhaustive separation/component equivalence check");
  int thm1_p = 4, thm1_q = 2;
  pugm::EnumerationLimits thm1_limits;
  thm1->add_option("--p", thm1_p, "vertex count")->required();
  thm1->add_option("--q", thm1_q, "level count")->required();
  thm1->add_option("--max-p", thm1_limits.max_p, "subset enumeration cap override");
  thm1->callback([&] {
    const pugm::FamilyCheckResult res = pugm::verify_thm1_family(thm1_p, thm1_q, thm1_limits);
    std::cout << "checked " << res.graphs_checked << " profile graphs on p=" << thm1_p
              << ", q=" << thm1_q << ": "
              << (res.all_hold ? "equivalence holds for every graph" : "FAILED") << "\n";
    if (!res.all_hold) {
      std::cout << res.certificate << "\n";
      throw pugm::NumericalError("equivalence failed");
    }
  });

  // --- evaluate ---
  auto* eval = app.add_subcommand("evaluate", "edge-recovery metrics against a truth graph");
  std::string ev_truth, ev_estimate, ev_scores, ev_model, ev_format = "table";
  bool per_level = false;
  eval->add_option("--truth", ev_truth, "truth graph JSON or directory")->required();
  eval->add_option("--estimate", ev_estimate, "estimated graph JSON or directory")->required();
  eval->add_option("--scores", ev_scores, "edge-list CSV with scores for AUC");
  eval->add_option("--model", ev_model, "model JSON; uses r* as AUC scores");
  eval->add_option("--format", ev_format, "table|json")->check(CLI::IsMember({"table", "json"}));
  eval->add_flag("--per-level", per_level, "also report per-level rows");
  eval->callback([&] {
    const pugm::ProfileGraph truth_graph = pugm::io::load_graph(find_graph_file(ev_truth));
    const pugm::ProfileGraph est_graph = pugm::io::load_graph(find_graph_file(ev_estimate));
    const pugm::MultipleGraphs truth = pugm::induced_multiple_graphs(truth_graph);
    const pugm::MultipleGraphs est = pugm::induced_multiple_graphs(est_graph);
    const pugm::EdgeConfusion conf = pugm::confusion(truth, est);

    std::vector<Eigen::MatrixXd> scores;
    bool have_scores = false;
    if (!ev_scores.empty()) {
      const pugm::io::EdgeListData ext =
          pugm::io::load_edge_list(ev_scores, truth.vertices(), truth.levels());
      if (!ext.has_scores) throw pugm::InputError("'" + ev_scores + "' has no score column");
      scores = ext.scores;
      have_scores = true;
    } else if (!ev_model.empty()) {
      const pugm::PosteriorSummaries post = pugm::io::load_model_summaries(ev_model);
      if (post.vertices != truth.vertices() || post.levels != truth.levels())
        throw pugm::InputError("model summaries do not match the truth graph layout");
      scores = post.r_star;
      have_scores = true;
    }
    std::optional<double> pooled_auc;
    if (have_scores) pooled_auc = pugm::auc(scores, truth);

    if (ev_format == "table") {
      std::cout << "Graph\tAccuracy\tSensitivity\tSpecificity\tBalancedAccuracy\tAUC\n";
      if (per_level) {
        for (int x = 0; x < truth.q(); ++x) {
          std::optional<double> level_auc;
          if (have_scores) {
            pugm::MultipleGraphs one({truth.vertices()}, {truth.levels()[x]});
            for (int i = 0; i < truth.p(); ++i)
              for (int j = i + 1; j < truth.p(); ++j)
                one.set_edge(0, i, j, truth.edge(x, i, j));
            level_auc = pugm::auc({scores[x]}, one);
          }
          print_metric_row(std::cout, "U(" + truth.levels()[x] + ")",
                           pugm::metrics(conf.per_level[x]), level_auc);
        }
      }
      print_metric_row(std::cout, "pooled", pugm::metrics(conf.pooled), pooled_auc);
    } else {
      json j;
      if (per_level) {
        json lv = json::object();
        for (int x = 0; x < truth.q(); ++x)
          lv["U(" + truth.levels()[x] + ")"] =
              metrics_json(pugm::metrics(conf.per_level[x]), std::nullopt);
        j["per_level"] = std::move(lv);
      }
      j["pooled"] = metrics_json(pugm::metrics(conf.pooled), pooled_auc);
      std::cout << j.dump(2) << "\n";
    }
  });

  // --- robustness ---
  auto* robust = app.add_subcommand("robustness", "subsampling stability of the fitted graphs");
  std::string rb_data, rb_format = "table";
  pugm::RobustnessConfig rb_cfg;
  pugm::FitConfig rb_fit_cfg;
  HyperFlags rb_hyper;
  robust->add_option("--data", rb_data, "dataset directory or CSV")->required();
  robust->add_option("--fraction", rb_cfg.fraction, "fraction of rows dropped per level");
  robust->add_option("--reps", rb_cfg.reps, "number of repetitions");
  robust->add_option("--seed", rb_cfg.seed, "RNG seed");
  robust->add_option("--edge-cut", rb_cfg.edge_cut, "extraction edge cut");
  robust->add_option("--vertex-cut", rb_cfg.vertex_cut, "extraction vertex cut");
  robust->add_option("--max-iter", rb_fit_cfg.max_iter, "EM iteration cap");
  robust->add_option("--tol", rb_fit_cfg.tol, "EM stopping tolerance");
  robust->add_option("--format", rb_format, "table|json")->check(CLI::IsMember({"table", "json"}));
  rb_hyper.attach(robust);
  robust->callback([&] {
    const pugm::ProfileDataset data = pugm::io::load_dataset(rb_data);
    const pugm::Hyperparameters hyper = rb_hyper.resolve(robust);
    const pugm::RobustnessSummary sum =
        pugm::robustness_harness(data, hyper, rb_fit_cfg, rb_cfg);
    std::cout << (rb_format == "table" ? pugm::io::robustness_to_table(sum)
                                       : pugm::io::robustness_to_json(sum));
  });

  // --- export-dot ---
  auto* dot = app.add_subcommand("export-dot", "GraphViz rendering of a profile graph");
  std::string dot_graph, dot_out;
  dot->add_option("--graph", dot_graph, "profile graph JSON")->required();
  dot->add_option("--out", dot_out, "output DOT file (stdout when absent)");
  dot->callback([&] {
    const pugm::ProfileGraph g = pugm::io::load_graph(dot_graph);
    const std::string body = pugm::io::dot_export(g);
    if (dot_out.empty())
      std::cout << body;
    else {
      std::ofstream(dot_out) << body;
      std::cout << "wrote " << dot_out << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pugm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const pugm::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
