#include "pugm/markov.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_set>

namespace pugm {

namespace {

using Mask = std::uint32_t;

void require_enumerable(int p, const EnumerationLimits& lim, const char* what) {
  if (p > lim.max_p) {
    std::ostringstream os;
    os << what << " enumerates subsets of " << p
       << " vertices, beyond the cap of " << lim.max_p
       << " (raise the cap explicitly to override)";
    throw CapacityError(os.str());
  }
}

// adj[x][v] = mask of x-neighbours of v.
std::vector<std::vector<Mask>> adjacency_masks(const ProfileGraph& g) {
  std::vector<std::vector<Mask>> adj(g.q(), std::vector<Mask>(g.p(), 0));
  for (int x = 0; x < g.q(); ++x)
    for (int i = 0; i < g.p(); ++i)
      for (int j = i + 1; j < g.p(); ++j)
        if (g.edge_at(i, j, x)) {
          adj[x][i] |= Mask{1} << j;
          adj[x][j] |= Mask{1} << i;
        }
  return adj;
}

Mask spread(Mask frontier, Mask allowed, const std::vector<Mask>& adj) {
  Mask seen = frontier & allowed;
  Mask grow = seen;
  while (grow) {
    Mask next = 0;
    Mask m = grow;
    while (m) {
      const int v = std::countr_zero(m);
      m &= m - 1;
      next |= adj[v];
    }
    grow = next & allowed & ~seen;
    seen |= grow;
  }
  return seen;
}

std::vector<Mask> components_of(Mask d, const std::vector<Mask>& adj) {
  std::vector<Mask> classes;
  Mask rest = d;
  while (rest) {
    const int v = std::countr_zero(rest);
    const Mask cls = spread(Mask{1} << v, d, adj);
    classes.push_back(cls);
    rest &= ~cls;
  }
  return classes;
}

bool separated(Mask a, Mask b, Mask c, Mask all, const std::vector<Mask>& adj) {
  return (spread(a, all & ~c, adj) & b) == 0;
}

std::vector<std::string> names_of(const ProfileGraph& g, Mask m) {
  std::vector<std::string> out;
  while (m) {
    const int v = std::countr_zero(m);
    m &= m - 1;
    out.push_back(g.vertex_name(v));
  }
  return out;
}

IndependenceStatement level_statement(const ProfileGraph& g,
                                      const std::vector<Mask>& blocks, Mask given,
                                      LevelSet profiles) {
  IndependenceStatement s;
  s.scope = StatementScope::profile_levels;
  for (Mask b : blocks) s.blocks.push_back(names_of(g, b));
  s.given = names_of(g, given);
  s.profiles = g.space().unmask(profiles);
  s.canonicalize();
  return s;
}

}  // namespace

ChainGraph::ChainGraph(std::vector<std::string> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InputError("chain graph needs vertices");
  std::unordered_set<std::string> seen;
  for (const auto& v : vertices_)
    if (!seen.insert(v).second) throw InputError("duplicate vertex '" + v + "'");
  und_.assign(static_cast<size_t>(p()) * p(), 0);
  arrows_.assign(p(), 0);
}

int ChainGraph::vertex_index(const std::string& name) const {
  for (int i = 0; i < p(); ++i)
    if (vertices_[i] == name) return i;
  throw InputError("unknown vertex '" + name + "'");
}

void ChainGraph::set_undirected(int i, int j, bool present) {
  if (i == j) throw InputError("no self loops in chain graph");
  und_[i * p() + j] = und_[j * p() + i] = present ? 1 : 0;
}

std::vector<std::string> ChainGraph::arrow_vertices() const {
  std::vector<std::string> out;
  for (int v = 0; v < p(); ++v)
    if (arrow(v)) out.push_back(vertices_[v]);
  return out;
}

std::vector<IndependenceStatement> pairwise_statements(const ProfileGraph& g) {
  std::vector<IndependenceStatement> out;
  const Mask all = g.p() >= 32 ? ~Mask{0} : (Mask{1} << g.p()) - 1;
  if (g.p() > 31) throw CapacityError("pairwise statements limited to 31 vertices");
  for (int i = 0; i < g.p(); ++i) {
    for (int j = i + 1; j < g.p(); ++j) {
      const LevelSet z = g.label(i, j);
      if (z == 0) continue;
      const Mask pair = (Mask{1} << i) | (Mask{1} << j);
      out.push_back(level_statement(g, {Mask{1} << i, Mask{1} << j}, all & ~pair, z));
    }
  }
  sort_statements(out);
  return out;
}

std::vector<IndependenceStatement> local_statements(const ProfileGraph& g) {
  std::vector<IndependenceStatement> out;
  if (g.p() > 31) throw CapacityError("local statements limited to 31 vertices");
  const Mask all = (Mask{1} << g.p()) - 1;
  const auto adj = adjacency_masks(g);
  for (int a = 0; a < g.p(); ++a) {
    for (int x = 0; x < g.q(); ++x) {
      const Mask nb = adj[x][a];
      const Mask rest = all & ~nb & ~(Mask{1} << a);
      if (!rest) continue;
      out.push_back(level_statement(g, {Mask{1} << a, rest}, nb, LevelSet{1} << x));
    }
  }
  sort_statements(out);
  return out;
}

std::vector<IndependenceStatement> csmp_statements(const ProfileGraph& g,
                                                   const EnumerationLimits& lim) {
  require_enumerable(g.p(), lim, "CSMP");
  const Mask all = (Mask{1} << g.p()) - 1;
  const auto adj = adjacency_masks(g);
  std::vector<IndependenceStatement> out;
  for (int x = 0; x < g.q(); ++x) {
    for (Mask d = 1; d <= all; ++d) {
      if (std::popcount(d) < 2) continue;
      const auto classes = components_of(d, adj[x]);
      if (classes.size() < 2) continue;
      out.push_back(level_statement(g, classes, all & ~d, LevelSet{1} << x));
    }
  }
  sort_statements(out);
  return out;
}

std::vector<IndependenceStatement> gmp_statements(const ProfileGraph& g,
                                                  const EnumerationLimits& lim) {
  require_enumerable(g.p(), lim, "GMP");
  const Mask all = (Mask{1} << g.p()) - 1;
  const auto adj = adjacency_masks(g);
  std::vector<IndependenceStatement> out;
  for (int x = 0; x < g.q(); ++x) {
    for (Mask a = 1; a <= all; ++a) {
      const Mask rest_a = all & ~a;
      for (Mask b = rest_a; b; b = (b - 1) & rest_a) {
        if (b < a) continue;  // (A, B) unordered, emit once
        const Mask rest_ab = rest_a & ~b;
        Mask c = rest_ab;
        while (true) {
          if (separated(a, b, c, all, adj[x]))
            out.push_back(level_statement(g, {a, b}, c, LevelSet{1} << x));
          if (c == 0) break;
          c = (c - 1) & rest_ab;
        }
      }
    }
  }
  sort_statements(out);
  return out;
}

EquivalenceResult check_gmp_csmp_equivalence(const ProfileGraph& g,
                                             const EnumerationLimits& lim) {
  require_enumerable(g.p(), lim, "equivalence check");
  const Mask all = (Mask{1} << g.p()) - 1;
  const auto adj = adjacency_masks(g);
  for (int x = 0; x < g.q(); ++x) {
    for (Mask a = 1; a <= all; ++a) {
      const Mask rest_a = all & ~a;
      for (Mask b = rest_a; b; b = (b - 1) & rest_a) {
        if (b < a) continue;  // unordered
        const Mask rest_ab = rest_a & ~b;
        Mask c = rest_ab;
        while (true) {
          const bool sep = separated(a, b, c, all, adj[x]);
          bool comp_sep = true;
          for (const Mask cls : components_of(all & ~c, adj[x])) {
            if ((cls & a) && (cls & b)) {
              comp_sep = false;
              break;
            }
          }
          if (sep != comp_sep) {
            EquivalenceResult r;
            r.holds = false;
            std::ostringstream os;
            os << "level " << g.space().name(x) << ": A=" << a << " B=" << b << " C=" << c
               << " separation=" << sep << " component-criterion=" << comp_sep;
            r.certificate = os.str();
            return r;
          }
          if (c == 0) break;
          c = (c - 1) & rest_ab;
        }
      }
    }
  }
  return {};
}

FamilyCheckResult verify_thm1_family(int p, int q, const EnumerationLimits& lim) {
  require_enumerable(p, lim, "family check");
  if (q > 16) throw CapacityError("family check limited to 16 levels");
  FamilyCheckResult res;
  std::vector<std::string> vertices, levels;
  for (int v = 0; v < p; ++v) vertices.push_back(std::string(1, static_cast<char>('a' + v % 26)) +
                                                 (v >= 26 ? std::to_string(v / 26) : ""));
  for (int x = 0; x < q; ++x) levels.push_back(std::to_string(x));
  StateSpace space(levels);
  const int npairs = p * (p - 1) / 2;
  const LevelSet label_count = LevelSet{1} << q;
  std::vector<LevelSet> labels(npairs, 0);
  while (true) {
    ProfileGraph g(space, vertices, labels);
    ++res.graphs_checked;
    EquivalenceResult eq = check_gmp_csmp_equivalence(g, lim);
    if (!eq.holds) {
      res.all_hold = false;
      std::ostringstream os;
      os << "graph #" << res.graphs_checked << ": " << eq.certificate;
      res.certificate = os.str();
      return res;
    }
    int k = 0;
    while (k < npairs && labels[k] + 1 == label_count) labels[k++] = 0;
    if (k == npairs) break;
    ++labels[k];
  }
  return res;
}

ChainClass induced_chain_class(const ProfileGraph& g) {
  ChainGraph skeleton(g.vertices());
  for (int i = 0; i < g.p(); ++i)
    for (int j = i + 1; j < g.p(); ++j)
      skeleton.set_undirected(i, j, !g.is_missing(i, j));
  ChainClass cls{skeleton, skeleton, skeleton};
  for (int v = 0; v < g.p(); ++v) {
    bool dotted_end = false;
    for (int w = 0; w < g.p() && !dotted_end; ++w)
      if (w != v && g.is_dotted(v, w)) dotted_end = true;
    cls.min.set_arrow(v, dotted_end);
    cls.max.set_arrow(v, true);
    cls.unique.set_arrow(v, g.kind(v) == VertexKind::circle);
  }
  return cls;
}

CompatibilityResult is_markov_compatible(const ChainGraph& chain, const ProfileGraph& g) {
  if (chain.p() != g.p())
    throw InputError("chain graph and profile graph have different vertex sets");
  std::vector<int> to_chain(g.p());
  for (int v = 0; v < g.p(); ++v) to_chain[v] = chain.vertex_index(g.vertex_name(v));

  for (int i = 0; i < g.p(); ++i) {
    for (int j = i + 1; j < g.p(); ++j) {
      const bool should = !g.is_missing(i, j);
      const bool has = chain.undirected(to_chain[i], to_chain[j]);
      if (should != has) {
        CompatibilityResult r;
        r.compatible = false;
        r.reason = "condition (i) fails on {" + g.vertex_name(i) + "," + g.vertex_name(j) +
                   "}: " + (should ? "edge required by label" : "edge not licensed by label");
        return r;
      }
      if (g.is_dotted(i, j) && !(chain.arrow(to_chain[i]) && chain.arrow(to_chain[j]))) {
        CompatibilityResult r;
        r.compatible = false;
        r.reason = "condition (ii) fails on dotted pair {" + g.vertex_name(i) + "," +
                   g.vertex_name(j) + "}: both endpoints need arrows";
        return r;
      }
    }
  }
  return {};
}

std::vector<IndependenceStatement> lwf_gmp_statements(const ChainGraph& chain,
                                                      const EnumerationLimits& lim) {
  require_enumerable(chain.p(), lim, "LWF statements");
  const int p = chain.p();
  const Mask all = (Mask{1} << p) - 1;
  std::vector<Mask> adj(p, 0);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && chain.undirected(i, j)) adj[i] |= Mask{1} << j;

  auto names_of_mask = [&](Mask m) {
    std::vector<std::string> out;
    while (m) {
      const int v = std::countr_zero(m);
      m &= m - 1;
      out.push_back(chain.vertices()[v]);
    }
    return out;
  };

  std::vector<IndependenceStatement> out;
  for (Mask d = 1; d <= all; ++d) {
    if (std::popcount(d) < 2) continue;
    const auto classes = components_of(d, adj);
    if (classes.size() < 2) continue;
    IndependenceStatement s;
    s.scope = StatementScope::given_x;
    for (Mask cls : classes) s.blocks.push_back(names_of_mask(cls));
    s.given = names_of_mask(all & ~d);
    s.canonicalize();
    out.push_back(std::move(s));
  }
  Mask unarrowed = 0;
  for (int v = 0; v < p; ++v)
    if (!chain.arrow(v)) unarrowed |= Mask{1} << v;
  for (Mask a = unarrowed; a; a = (a - 1) & unarrowed) {
    IndependenceStatement s;
    s.scope = StatementScope::versus_x;
    s.blocks.push_back(names_of_mask(a));
    s.given = names_of_mask(all & ~a);
    s.canonicalize();
    out.push_back(std::move(s));
  }
  sort_statements(out);
  return out;
}

}  // namespace pugm
