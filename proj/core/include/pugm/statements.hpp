#ifndef PUGM_STATEMENTS_HPP
#define PUGM_STATEMENTS_HPP

#include <string>
#include <vector>

#include "pugm/profile_graph.hpp"

namespace pugm {

// Three statement shapes cover everything the engine emits:
//   profile_levels : Y_B1 ⟂ ... ⟂ Y_Br | Y_C at every level in `profiles`
//   given_x        : Y_B1 ⟂ ... ⟂ Y_Br | { Y_C, X }      (chain graph, within-block)
//   versus_x       : Y_B1 ⟂ X | Y_C                       (chain graph, missing arrows)
enum class StatementScope { profile_levels, given_x, versus_x };

struct IndependenceStatement {
  StatementScope scope = StatementScope::profile_levels;
  std::vector<std::vector<std::string>> blocks;  // >= 2, except versus_x (exactly 1)
  std::vector<std::string> given;
  std::vector<std::string> profiles;  // level names, profile_levels only

  // Sorts block members, blocks, conditioning set and profiles so that equal
  // statements compare equal ((A,B) is unordered).
  void canonicalize();

  // Mutual statement over r blocks into its pairwise consequences
  // (K_i, K_j | everything else merged into the conditioning set).
  std::vector<IndependenceStatement> pairwise_consequences() const;

  std::string to_text() const;

  friend bool operator==(const IndependenceStatement&, const IndependenceStatement&) = default;
  friend auto operator<=>(const IndependenceStatement&, const IndependenceStatement&) = default;
};

void sort_statements(std::vector<IndependenceStatement>& stmts);

}  // namespace pugm

#endif
