#ifndef PUGM_IO_HPP
#define PUGM_IO_HPP

#include <string>
#include <vector>

#include "pugm/bayes_em.hpp"
#include "pugm/evaluation.hpp"
#include "pugm/gaussian.hpp"
#include "pugm/markov.hpp"
#include "pugm/profile_graph.hpp"
#include "pugm/statements.hpp"

namespace pugm {
namespace io {

// profile graphs: {"levels": [...], "vertices": [...], "kinds": {...},
// "edges": [{"a":..,"b":..,"label":[...]}]}; absent pair = missing edge,
// empty label = full edge
GraphSpec load_graph_spec(const std::string& path);
ProfileGraph load_graph(const std::string& path);
void save_graph(const ProfileGraph& g, const std::string& path);
std::string graph_to_json(const ProfileGraph& g);

// chain graphs: {"vertices": [...], "undirected": [["a","b"],...], "arrows": [...]}
ChainGraph load_chain(const std::string& path);
void save_chain(const ChainGraph& c, const std::string& path);
std::string chain_to_json(const ChainGraph& c);

// parameters: {"alpha": [...], "levels": [...], "beta": {x: [...]}, "omega": {x: [[...]]}}
GaussianProfileParams load_params(const std::string& path);
void save_params(const GaussianProfileParams& p, const std::string& path);

// fitted model: {"params": {...}, "summaries": {...}, "iterations": n, "converged": b}
void save_model(const EmState& state, const std::string& path);
PosteriorSummaries load_model_summaries(const std::string& path);
GaussianProfileParams load_model_params(const std::string& path);

// datasets: a directory of level_<x>.csv files (header y1,...,yp) or a single
// CSV with header level,y1,...,yp
ProfileDataset load_dataset(const std::string& path);
void save_dataset(const ProfileDataset& d, const std::string& dir);

// external multiple graphs / scores as CSV edge lists: header level,a,b[,score]
struct EdgeListData {
  MultipleGraphs graphs;
  std::vector<Eigen::MatrixXd> scores;  // empty when the file has no score column
  bool has_scores = false;
};
EdgeListData load_edge_list(const std::string& path, const std::vector<std::string>& vertices,
                            const std::vector<std::string>& levels);

std::string dot_export(const ProfileGraph& g);

std::string statements_to_json(const std::vector<IndependenceStatement>& stmts);
std::string statements_to_text(const std::vector<IndependenceStatement>& stmts);

void write_trace_csv(const EmState& state, const std::string& path);

std::string robustness_to_table(const RobustnessSummary& s);
std::string robustness_to_json(const RobustnessSummary& s);

}  // namespace io
}  // namespace pugm

#endif
