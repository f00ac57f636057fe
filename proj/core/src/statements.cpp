#include "pugm/statements.hpp"

#include <algorithm>
#include <sstream>

namespace pugm {

void IndependenceStatement::canonicalize() {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  std::sort(given.begin(), given.end());
  std::sort(profiles.begin(), profiles.end());
}

std::vector<IndependenceStatement> IndependenceStatement::pairwise_consequences() const {
  std::vector<IndependenceStatement> out;
  if (scope == StatementScope::versus_x || blocks.size() < 2) {
    out.push_back(*this);
    out.back().canonicalize();
    return out;
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    for (size_t j = i + 1; j < blocks.size(); ++j) {
      IndependenceStatement s;
      s.scope = scope;
      s.profiles = profiles;
      s.blocks = {blocks[i], blocks[j]};
      s.given = given;
      for (size_t k = 0; k < blocks.size(); ++k)
        if (k != i && k != j)
          s.given.insert(s.given.end(), blocks[k].begin(), blocks[k].end());
      s.canonicalize();
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

void print_set(std::ostringstream& os, const std::vector<std::string>& s) {
  os << "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i];
  }
  os << "]";
}

}  // namespace

std::string IndependenceStatement::to_text() const {
  std::ostringstream os;
  if (scope == StatementScope::versus_x) {
    print_set(os, blocks.at(0));
    os << " _||_ X";
    if (!given.empty()) {
      os << " | ";
      print_set(os, given);
    }
    return os.str();
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) os << " _||_ ";
    print_set(os, blocks[i]);
  }
  if (!given.empty() || scope == StatementScope::given_x) {
    os << " | ";
    if (!given.empty()) print_set(os, given);
    if (scope == StatementScope::given_x) os << (given.empty() ? "X" : ",X");
  }
  if (scope == StatementScope::profile_levels) {
    os << " @ ";
    print_set(os, profiles);
  }
  return os.str();
}

void sort_statements(std::vector<IndependenceStatement>& stmts) {
  for (auto& s : stmts) s.canonicalize();
  std::sort(stmts.begin(), stmts.end());
  stmts.erase(std::unique(stmts.begin(), stmts.end()), stmts.end());
}

}  // namespace pugm
