#include "pugm/profile_graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace pugm {

StateSpace::StateSpace(std::vector<std::string> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InputError("state space needs at least one level");
  if (static_cast<int>(levels_.size()) > kMaxLevels)
    throw CapacityError("state space limited to 64 levels");
  for (int i = 0; i < q(); ++i) {
    if (!index_.emplace(levels_[i], i).second)
      throw InputError("duplicate level '" + levels_[i] + "'");
  }
}

int StateSpace::index(const std::string& level) const {
  auto it = index_.find(level);
  if (it == index_.end()) throw InputError("unknown level '" + level + "'");
  return it->second;
}

int StateSpace::find(const std::string& level) const {
  auto it = index_.find(level);
  return it == index_.end() ? -1 : it->second;
}

LevelSet StateSpace::mask_of(const std::vector<std::string>& subset) const {
  LevelSet m = 0;
  for (const auto& s : subset) m |= LevelSet{1} << index(s);
  return m;
}

std::vector<std::string> StateSpace::unmask(LevelSet set) const {
  std::vector<std::string> out;
  for (int x = 0; x < q(); ++x)
    if ((set >> x) & 1U) out.push_back(levels_[x]);
  return out;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i];
  }
  return os.str();
}

namespace {

std::string pair_key(const std::string& a, const std::string& b) {
  return a < b ? a + "\x1f" + b : b + "\x1f" + a;
}

}  // namespace

ValidationReport validate(const GraphSpec& spec) {
  ValidationReport rep;
  std::unordered_set<std::string> levels(spec.levels.begin(), spec.levels.end());
  if (levels.size() != spec.levels.size()) rep.issues.push_back("duplicate levels");
  if (spec.levels.empty()) rep.issues.push_back("empty state space");
  if (static_cast<int>(spec.levels.size()) > kMaxLevels)
    rep.issues.push_back("more than 64 levels");

  std::unordered_set<std::string> verts(spec.vertices.begin(), spec.vertices.end());
  if (verts.size() != spec.vertices.size()) rep.issues.push_back("duplicate vertices");
  if (spec.vertices.empty()) rep.issues.push_back("empty vertex set");

  std::unordered_set<std::string> squares;
  for (const auto& [v, kind] : spec.kinds) {
    if (!verts.count(v)) rep.issues.push_back("kind given for unknown vertex '" + v + "'");
    if (kind != "circle" && kind != "square")
      rep.issues.push_back("vertex '" + v + "' has unknown kind '" + kind + "'");
    if (kind == "square") squares.insert(v);
  }

  std::unordered_set<std::string> seen_pairs;
  for (const auto& e : spec.edges) {
    if (!verts.count(e.a)) rep.issues.push_back("edge endpoint '" + e.a + "' not a vertex");
    if (!verts.count(e.b)) rep.issues.push_back("edge endpoint '" + e.b + "' not a vertex");
    if (e.a == e.b) rep.issues.push_back("self loop on '" + e.a + "'");
    if (!seen_pairs.insert(pair_key(e.a, e.b)).second)
      rep.issues.push_back("pair {" + e.a + "," + e.b + "} labelled twice");
    std::unordered_set<std::string> lab;
    for (const auto& z : e.label) {
      if (!levels.count(z)) {
        rep.issues.push_back("label not subset of state space on {" + e.a + "," + e.b +
                             "}: level '" + z + "'");
      }
      if (!lab.insert(z).second)
        rep.issues.push_back("duplicate level '" + z + "' in label of {" + e.a + "," + e.b + "}");
    }
    const bool dotted = !e.label.empty() && lab.size() < spec.levels.size();
    if (dotted && (squares.count(e.a) || squares.count(e.b))) {
      rep.issues.push_back("square vertex incident to dotted edge {" + e.a + "," + e.b + "}");
    }
  }
  return rep;
}

ProfileGraph ProfileGraph::from_spec(const GraphSpec& spec) {
  ValidationReport rep = validate(spec);
  if (!rep.ok()) throw InputError("invalid profile graph: " + rep.to_string());
  StateSpace space(spec.levels);
  const int p = static_cast<int>(spec.vertices.size());
  std::vector<LevelSet> labels(static_cast<size_t>(p) * (p - 1) / 2, space.full_mask());
  std::vector<VertexKind> kinds(p, VertexKind::circle);
  ProfileGraph g(space, spec.vertices, std::move(labels), std::move(kinds));
  for (const auto& [v, kind] : spec.kinds)
    g.kinds_[g.vertex_index(v)] = kind == "square" ? VertexKind::square : VertexKind::circle;
  for (const auto& e : spec.edges) {
    const int i = g.vertex_index(e.a), j = g.vertex_index(e.b);
    g.labels_[g.pair_index(i, j)] = space.mask_of(e.label);
  }
  return g;
}

ProfileGraph::ProfileGraph(StateSpace space, std::vector<std::string> vertices,
                           std::vector<LevelSet> labels, std::vector<VertexKind> kinds)
    : space_(std::move(space)), vertices_(std::move(vertices)), labels_(std::move(labels)),
      kinds_(std::move(kinds)) {
  const int p = static_cast<int>(vertices_.size());
  if (p == 0) throw InputError("empty vertex set");
  if (labels_.size() != static_cast<size_t>(p) * (p - 1) / 2)
    throw InputError("label vector has wrong size");
  if (kinds_.empty()) kinds_.assign(p, VertexKind::circle);
  if (kinds_.size() != static_cast<size_t>(p)) throw InputError("kind vector has wrong size");
  for (int i = 0; i < p; ++i) {
    if (!vertex_index_.emplace(vertices_[i], i).second)
      throw InputError("duplicate vertex '" + vertices_[i] + "'");
  }
  for (LevelSet z : labels_) {
    if (z & ~space_.full_mask()) throw InputError("label not subset of state space");
  }
}

int ProfileGraph::vertex_index(const std::string& name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) throw InputError("unknown vertex '" + name + "'");
  return it->second;
}

int ProfileGraph::pair_index(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= p() || j >= p())
    throw InputError("bad vertex pair index");
  if (i > j) std::swap(i, j);
  return i * (2 * p() - i - 1) / 2 + (j - i - 1);
}

GraphSpec ProfileGraph::to_spec() const {
  GraphSpec spec;
  spec.levels = space_.levels();
  spec.vertices = vertices_;
  for (int v = 0; v < p(); ++v)
    spec.kinds[vertices_[v]] = kinds_[v] == VertexKind::square ? "square" : "circle";
  for (int i = 0; i < p(); ++i)
    for (int j = i + 1; j < p(); ++j)
      if (!is_missing(i, j))
        spec.edges.push_back({vertices_[i], vertices_[j], space_.unmask(label(i, j))});
  return spec;
}

MultipleGraphs::MultipleGraphs(std::vector<std::string> vertices,
                               std::vector<std::string> levels)
    : vertices_(std::move(vertices)), levels_(std::move(levels)) {
  adj_.assign(levels_.size(), std::vector<std::uint8_t>(vertices_.size() * vertices_.size(), 0));
}

void MultipleGraphs::set_edge(int x, int i, int j, bool present) {
  if (i == j) throw InputError("no self loops");
  adj_[x][i * p() + j] = adj_[x][j * p() + i] = present ? 1 : 0;
}

std::vector<int> neighbours_x(const ProfileGraph& g, int a, int x) {
  if (a < 0 || a >= g.p()) throw InputError("unknown vertex index");
  if (x < 0 || x >= g.q()) throw InputError("unknown level index");
  std::vector<int> out;
  for (int b = 0; b < g.p(); ++b)
    if (b != a && g.edge_at(a, b, x)) out.push_back(b);
  return out;
}

std::vector<std::string> neighbours_x(const ProfileGraph& g, const std::string& a,
                                      const std::string& x) {
  std::vector<std::string> out;
  for (int b : neighbours_x(g, g.vertex_index(a), g.space().index(x)))
    out.push_back(g.vertex_name(b));
  return out;
}

namespace {

// BFS over the level-x subgraph restricted to `allowed`; returns reach set.
std::vector<char> reach_x(const ProfileGraph& g, const std::vector<int>& sources,
                          const std::vector<char>& allowed, int x) {
  std::vector<char> seen(g.p(), 0);
  std::queue<int> bfs;
  for (int s : sources) {
    if (allowed[s] && !seen[s]) {
      seen[s] = 1;
      bfs.push(s);
    }
  }
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    for (int w = 0; w < g.p(); ++w) {
      if (w != v && allowed[w] && !seen[w] && g.edge_at(v, w, x)) {
        seen[w] = 1;
        bfs.push(w);
      }
    }
  }
  return seen;
}

std::vector<int> to_indices(const ProfileGraph& g, const std::vector<std::string>& names) {
  std::vector<int> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(g.vertex_index(n));
  return out;
}

}  // namespace

bool x_path_exists(const ProfileGraph& g, const std::string& a, const std::string& b,
                   const std::string& x) {
  const int ia = g.vertex_index(a), ib = g.vertex_index(b);
  if (ia == ib) throw InputError("x-path endpoints must differ");
  std::vector<char> allowed(g.p(), 1);
  return reach_x(g, {ia}, allowed, g.space().index(x))[ib] != 0;
}

std::vector<std::vector<int>> x_connected_components_idx(const ProfileGraph& g,
                                                         const std::vector<int>& D, int x) {
  if (D.empty()) throw InputError("component query needs a nonempty vertex set");
  if (x < 0 || x >= g.q()) throw InputError("unknown level index");
  std::vector<char> in_d(g.p(), 0);
  for (int v : D) {
    if (v < 0 || v >= g.p()) throw InputError("unknown vertex index");
    in_d[v] = 1;
  }
  std::vector<char> done(g.p(), 0);
  std::vector<std::vector<int>> classes;
  for (int v = 0; v < g.p(); ++v) {
    if (!in_d[v] || done[v]) continue;
    std::vector<char> seen = reach_x(g, {v}, in_d, x);
    std::vector<int> cls;
    for (int w = 0; w < g.p(); ++w)
      if (seen[w]) {
        cls.push_back(w);
        done[w] = 1;
      }
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<std::vector<std::string>> x_connected_components(
    const ProfileGraph& g, const std::vector<std::string>& D, const std::string& x) {
  std::vector<std::vector<std::string>> out;
  for (const auto& cls : x_connected_components_idx(g, to_indices(g, D), g.space().index(x))) {
    std::vector<std::string> names;
    for (int v : cls) names.push_back(g.vertex_name(v));
    out.push_back(std::move(names));
  }
  return out;
}

bool x_separates_idx(const ProfileGraph& g, const std::vector<int>& A,
                     const std::vector<int>& B, const std::vector<int>& C, int x) {
  if (A.empty() || B.empty()) throw InputError("separation needs nonempty A and B");
  if (x < 0 || x >= g.q()) throw InputError("unknown level index");
  std::vector<char> role(g.p(), 0);
  for (int v : A) role.at(v) |= 1;
  for (int v : B) role.at(v) |= 2;
  for (int v : C) role.at(v) |= 4;
  for (char r : role)
    if (r != 0 && r != 1 && r != 2 && r != 4)
      throw InputError("A, B, C must be pairwise disjoint");
  std::vector<char> allowed(g.p(), 1);
  for (int v : C) allowed[v] = 0;
  std::vector<char> seen = reach_x(g, A, allowed, x);
  for (int v : B)
    if (seen[v]) return false;
  return true;
}

bool x_separates(const ProfileGraph& g, const std::vector<std::string>& A,
                 const std::vector<std::string>& B, const std::vector<std::string>& C,
                 const std::string& x) {
  return x_separates_idx(g, to_indices(g, A), to_indices(g, B), to_indices(g, C),
                         g.space().index(x));
}

MultipleGraphs induced_multiple_graphs(const ProfileGraph& g) {
  MultipleGraphs mg(g.vertices(), g.space().levels());
  for (int x = 0; x < g.q(); ++x)
    for (int i = 0; i < g.p(); ++i)
      for (int j = i + 1; j < g.p(); ++j)
        mg.set_edge(x, i, j, g.edge_at(i, j, x));
  return mg;
}

}  // namespace pugm
