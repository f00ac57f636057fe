#ifndef PUGM_PROFILE_GRAPH_HPP
#define PUGM_PROFILE_GRAPH_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pugm/common.hpp"

namespace pugm {

// Subset of the factor state space X as a bitmask over level indices.
// Bit x set <=> level x belongs to the label Z.
using LevelSet = std::uint64_t;

constexpr int kMaxLevels = 64;

// Ordered list of distinct factor levels; insertion order is the canonical
// output order everywhere.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<std::string> levels);

  int q() const { return static_cast<int>(levels_.size()); }
  LevelSet full_mask() const {
    return q() == kMaxLevels ? ~LevelSet{0} : ((LevelSet{1} << q()) - 1);
  }
  const std::vector<std::string>& levels() const { return levels_; }
  const std::string& name(int x) const { return levels_.at(x); }
  int index(const std::string& level) const;         // throws InputError
  int find(const std::string& level) const;          // -1 when absent
  LevelSet mask_of(const std::vector<std::string>& subset) const;
  std::vector<std::string> unmask(LevelSet set) const;

 private:
  std::vector<std::string> levels_;
  std::unordered_map<std::string, int> index_;
};

enum class VertexKind { circle, square };

// Raw, possibly-invalid description of a profile undirected graph, as read
// from files or assembled by hand. Compiled into a ProfileGraph only after
// validation.
struct GraphSpec {
  struct Edge {
    std::string a, b;
    std::vector<std::string> label;  // Z; empty vector = full edge
  };
  std::vector<std::string> levels;
  std::vector<std::string> vertices;
  std::unordered_map<std::string, std::string> kinds;  // "circle" | "square"
  std::vector<Edge> edges;  // absent pair = missing edge (Z = X)
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Report-style check of every structural invariant: distinct identifiers,
// labels contained in the state space, pairs mentioned at most once, and the
// square-vertex rule (a square vertex may not be an endpoint of a dotted
// edge, the syntactic necessary condition for a unique compatible chain
// graph).
ValidationReport validate(const GraphSpec& spec);

class ProfileGraph {
 public:
  // Compiles a validated description; throws InputError carrying the
  // validation report when it is invalid.
  static ProfileGraph from_spec(const GraphSpec& spec);

  // Direct construction for programmatic use (enumeration, extraction).
  // labels are indexed by pair_index(i, j); all-circle kinds by default.
  ProfileGraph(StateSpace space, std::vector<std::string> vertices,
               std::vector<LevelSet> labels, std::vector<VertexKind> kinds = {});

  int p() const { return static_cast<int>(vertices_.size()); }
  int q() const { return space_.q(); }
  const StateSpace& space() const { return space_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::string& vertex_name(int v) const { return vertices_.at(v); }
  int vertex_index(const std::string& name) const;  // throws InputError
  VertexKind kind(int v) const { return kinds_[v]; }
  const std::vector<VertexKind>& kinds() const { return kinds_; }

  int pair_index(int i, int j) const;
  LevelSet label(int i, int j) const { return labels_[pair_index(i, j)]; }
  const std::vector<LevelSet>& labels() const { return labels_; }

  bool is_missing(int i, int j) const { return label(i, j) == space_.full_mask(); }
  bool is_full(int i, int j) const { return label(i, j) == 0; }
  bool is_dotted(int i, int j) const { return !is_missing(i, j) && !is_full(i, j); }

  // Edge between i and j survives at level x iff x is not in the label.
  bool edge_at(int i, int j, int x) const {
    return ((label(i, j) >> x) & 1U) == 0;
  }

  GraphSpec to_spec() const;

 private:
  StateSpace space_;
  std::vector<std::string> vertices_;
  std::unordered_map<std::string, int> vertex_index_;
  std::vector<LevelSet> labels_;
  std::vector<VertexKind> kinds_;
};

// Per-level undirected adjacency over a common vertex set (the induced class
// U(x), and also the container for externally loaded multiple graphs).
class MultipleGraphs {
 public:
  MultipleGraphs(std::vector<std::string> vertices, std::vector<std::string> levels);

  int p() const { return static_cast<int>(vertices_.size()); }
  int q() const { return static_cast<int>(levels_.size()); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<std::string>& levels() const { return levels_; }
  bool edge(int x, int i, int j) const { return adj_[x][i * p() + j] != 0; }
  void set_edge(int x, int i, int j, bool present);

 private:
  std::vector<std::string> vertices_;
  std::vector<std::string> levels_;
  std::vector<std::vector<std::uint8_t>> adj_;
};

// --- label-indexed connectivity and separation queries ---------------------

// { b : x not in label(a, b) }, in vertex order.
std::vector<std::string> neighbours_x(const ProfileGraph& g, const std::string& a,
                                      const std::string& x);
std::vector<int> neighbours_x(const ProfileGraph& g, int a, int x);

bool x_path_exists(const ProfileGraph& g, const std::string& a,
                   const std::string& b, const std::string& x);

// Maximal x-connected classes of D, connectivity computed inside the subgraph
// induced on D. Classes and their members follow vertex order.
std::vector<std::vector<std::string>> x_connected_components(
    const ProfileGraph& g, const std::vector<std::string>& D, const std::string& x);
std::vector<std::vector<int>> x_connected_components_idx(const ProfileGraph& g,
                                                         const std::vector<int>& D,
                                                         int x);

// True iff every x-path from A to B intersects C (A, B, C pairwise disjoint,
// A and B nonempty; C may be empty).
bool x_separates(const ProfileGraph& g, const std::vector<std::string>& A,
                 const std::vector<std::string>& B, const std::vector<std::string>& C,
                 const std::string& x);
bool x_separates_idx(const ProfileGraph& g, const std::vector<int>& A,
                     const std::vector<int>& B, const std::vector<int>& C, int x);

// U(x) for every level: edge present iff x not in the pair's label.
MultipleGraphs induced_multiple_graphs(const ProfileGraph& g);

}  // namespace pugm

#endif
