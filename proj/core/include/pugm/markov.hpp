#ifndef PUGM_MARKOV_HPP
#define PUGM_MARKOV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pugm/profile_graph.hpp"
#include "pugm/statements.hpp"

namespace pugm {

// Two-block LWF chain graph: undirected edges within the response block plus
// arrows from the external factor into a subset of vertices.
class ChainGraph {
 public:
  explicit ChainGraph(std::vector<std::string> vertices);

  int p() const { return static_cast<int>(vertices_.size()); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  int vertex_index(const std::string& name) const;

  bool undirected(int i, int j) const { return und_[i * p() + j] != 0; }
  void set_undirected(int i, int j, bool present);
  bool arrow(int v) const { return arrows_[v] != 0; }
  void set_arrow(int v, bool present) { arrows_[v] = present ? 1 : 0; }
  std::vector<std::string> arrow_vertices() const;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::uint8_t> und_;
  std::vector<std::uint8_t> arrows_;
};

// Subset enumeration over 2^p (connected-set, LWF) and 4^p (global) explodes
// quickly; requests beyond max_p raise CapacityError unless overridden.
struct EnumerationLimits {
  int max_p = 12;
};

// One statement per pair with nonempty label:
// Y_a(x) ⟂ Y_b(x) | Y_{V\{a,b}}(x) for x in Z.
std::vector<IndependenceStatement> pairwise_statements(const ProfileGraph& g);

// Per vertex and level: Y_a(x) ⟂ Y_{V\({a} ∪ nb_x(a))}(x) | Y_{nb_x(a)}(x),
// omitting statements with an empty remainder block.
std::vector<IndependenceStatement> local_statements(const ProfileGraph& g);

// Mutual statements over the x-connected components of every x-disconnected
// subset D: Y_{K_1}(x) ⟂ ... ⟂ Y_{K_r}(x) | Y_{V\D}(x).
std::vector<IndependenceStatement> csmp_statements(const ProfileGraph& g,
                                                   const EnumerationLimits& lim = {});

// Every (A, B, C, x) with disjoint sets, A and B nonempty and C x-separating
// A from B; (A, B) unordered.
std::vector<IndependenceStatement> gmp_statements(const ProfileGraph& g,
                                                  const EnumerationLimits& lim = {});

struct EquivalenceResult {
  bool holds = true;
  std::string certificate;  // first counterexample, empty when holds
};

// Separation/component duality: (A,B,C,x) is a separation iff no
// x-connected component of V\C meets both A and B; checked for every
// assignment and level.
EquivalenceResult check_gmp_csmp_equivalence(const ProfileGraph& g,
                                             const EnumerationLimits& lim = {});

struct FamilyCheckResult {
  bool all_hold = true;
  std::uint64_t graphs_checked = 0;
  std::string certificate;
};

// Runs the equivalence check over every profile graph on p vertices and q
// levels ((2^q)^(p(p-1)/2) graphs).
FamilyCheckResult verify_thm1_family(int p, int q, const EnumerationLimits& lim = {});

// min: arrows only where forced (endpoints of dotted edges); max: all arrows;
// unique: the single compatible chain graph once circle/square kinds are read
// (arrows exactly at circle vertices).
struct ChainClass {
  ChainGraph min, max, unique;
};
ChainClass induced_chain_class(const ProfileGraph& g);

struct CompatibilityResult {
  bool compatible = true;
  std::string reason;
};

// Compatibility conditions: (i) undirected edge iff the label is a proper subset
// of X, and (ii) both endpoints of every dotted edge receive arrows.
CompatibilityResult is_markov_compatible(const ChainGraph& chain, const ProfileGraph& g);

// LWF global statements of a two-block chain graph: mutual independence over
// the connected components of every disconnected D given the rest and X, plus
// Y_A ⟂ X | Y_{V\A} for every nonempty A inside the unarrowed set.
std::vector<IndependenceStatement> lwf_gmp_statements(const ChainGraph& chain,
                                                      const EnumerationLimits& lim = {});

}  // namespace pugm

#endif
