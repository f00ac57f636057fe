#include "pugm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pugm {
namespace io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << body;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InputError(std::string(what) + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Eigen::VectorXd vector_field(const json& j, const char* what, int expect = -1) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + " must hold numbers");
    v(i) = j[i].get<double>();
  }
  if (expect >= 0 && v.size() != expect)
    throw InputError(std::string(what) + " has wrong length");
  return v;
}

Eigen::MatrixXd matrix_field(const json& j, const char* what, int expect = -1) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a matrix");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InputError(std::string(what) + " has ragged rows");
    for (size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  if (expect >= 0 && (m.rows() != expect || m.cols() != expect))
    throw InputError(std::string(what) + " has wrong shape");
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json graph_json(const ProfileGraph& g) {
  json j;
  j["levels"] = g.space().levels();
  j["vertices"] = g.vertices();
  json kinds = json::object();
  for (int v = 0; v < g.p(); ++v)
    kinds[g.vertex_name(v)] = g.kind(v) == VertexKind::square ? "square" : "circle";
  j["kinds"] = std::move(kinds);
  json edges = json::array();
  for (int i = 0; i < g.p(); ++i) {
    for (int k = i + 1; k < g.p(); ++k) {
      if (g.is_missing(i, k)) continue;
      json e;
      e["a"] = g.vertex_name(i);
      e["b"] = g.vertex_name(k);
      e["label"] = g.space().unmask(g.label(i, k));
      edges.push_back(std::move(e));
    }
  }
  j["edges"] = std::move(edges);
  return j;
}

json params_json(const GaussianProfileParams& p) {
  json j;
  j["vertices"] = p.vertices;
  j["levels"] = p.levels;
  j["alpha"] = vector_to_json(p.alpha);
  json beta = json::object(), omega = json::object();
  for (int x = 0; x < p.q(); ++x) {
    beta[p.levels[x]] = vector_to_json(p.beta[x]);
    omega[p.levels[x]] = matrix_to_json(p.omega[x]);
  }
  j["beta"] = std::move(beta);
  j["omega"] = std::move(omega);
  if (!p.zeta_explicit.empty()) {
    json zeta = json::object();
    for (int x = 0; x < p.q(); ++x) zeta[p.levels[x]] = vector_to_json(p.zeta_explicit[x]);
    j["zeta"] = std::move(zeta);
  }
  return j;
}

GaussianProfileParams params_from_json(const json& j) {
  GaussianProfileParams p;
  p.levels = string_list(j.at("levels"), "levels");
  if (j.contains("vertices")) p.vertices = string_list(j.at("vertices"), "vertices");
  p.alpha = vector_field(j.at("alpha"), "alpha");
  const int dim = static_cast<int>(p.alpha.size());
  if (p.vertices.empty())
    for (int i = 0; i < dim; ++i) p.vertices.push_back("y" + std::to_string(i + 1));
  for (const auto& level : p.levels) {
    if (!j.at("beta").contains(level)) throw InputError("beta missing level '" + level + "'");
    if (!j.at("omega").contains(level)) throw InputError("omega missing level '" + level + "'");
    p.beta.push_back(vector_field(j.at("beta").at(level), "beta", dim));
    p.omega.push_back(matrix_field(j.at("omega").at(level), "omega", dim));
    if (j.contains("zeta"))
      p.zeta_explicit.push_back(vector_field(j.at("zeta").at(level), "zeta", dim));
  }
  p.validate();
  return p;
}

json summaries_json(const PosteriorSummaries& s) {
  json j;
  j["vertices"] = s.vertices;
  j["levels"] = s.levels;
  j["theta_star"] = vector_to_json(s.theta_star);
  j["gamma_star"] = matrix_to_json(s.gamma_star);
  json r = json::object();
  for (int x = 0; x < s.q(); ++x) r[s.levels[x]] = matrix_to_json(s.r_star[x]);
  j["r_star"] = std::move(r);
  return j;
}

PosteriorSummaries summaries_from_json(const json& j) {
  PosteriorSummaries s;
  s.vertices = string_list(j.at("vertices"), "vertices");
  s.levels = string_list(j.at("levels"), "levels");
  const int dim = static_cast<int>(s.vertices.size());
  s.theta_star = vector_field(j.at("theta_star"), "theta_star", dim);
  s.gamma_star = matrix_field(j.at("gamma_star"), "gamma_star", dim);
  for (const auto& level : s.levels) {
    if (!j.at("r_star").contains(level)) throw InputError("r_star missing level '" + level + "'");
    s.r_star.push_back(matrix_field(j.at("r_star").at(level), "r_star", dim));
  }
  return s;
}

}  // namespace

GraphSpec load_graph_spec(const std::string& path) {
  const json j = parse_file(path);
  GraphSpec spec;
  spec.levels = string_list(j.at("levels"), "levels");
  spec.vertices = string_list(j.at("vertices"), "vertices");
  if (j.contains("kinds")) {
    if (!j.at("kinds").is_object()) throw InputError("kinds must be an object");
    for (const auto& [v, kind] : j.at("kinds").items()) {
      if (!kind.is_string()) throw InputError("kind of '" + v + "' must be a string");
      spec.kinds[v] = kind.get<std::string>();
    }
  }
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) throw InputError("edges must be an array");
    for (const auto& e : j.at("edges")) {
      GraphSpec::Edge edge;
      edge.a = e.at("a").get<std::string>();
      edge.b = e.at("b").get<std::string>();
      edge.label = string_list(e.at("label"), "edge label");
      spec.edges.push_back(std::move(edge));
    }
  }
  return spec;
}

ProfileGraph load_graph(const std::string& path) {
  return ProfileGraph::from_spec(load_graph_spec(path));
}

std::string graph_to_json(const ProfileGraph& g) { return graph_json(g).dump(2) + "\n"; }

void save_graph(const ProfileGraph& g, const std::string& path) {
  write_file(path, graph_to_json(g));
}

ChainGraph load_chain(const std::string& path) {
  const json j = parse_file(path);
  ChainGraph c(string_list(j.at("vertices"), "vertices"));
  if (j.contains("undirected")) {
    for (const auto& e : j.at("undirected")) {
      if (!e.is_array() || e.size() != 2) throw InputError("undirected entries must be pairs");
      c.set_undirected(c.vertex_index(e[0].get<std::string>()),
                       c.vertex_index(e[1].get<std::string>()), true);
    }
  }
  if (j.contains("arrows")) {
    for (const auto& v : string_list(j.at("arrows"), "arrows"))
      c.set_arrow(c.vertex_index(v), true);
  }
  return c;
}

std::string chain_to_json(const ChainGraph& c) {
  json j;
  j["vertices"] = c.vertices();
  json und = json::array();
  for (int i = 0; i < c.p(); ++i)
    for (int k = i + 1; k < c.p(); ++k)
      if (c.undirected(i, k)) und.push_back(json::array({c.vertices()[i], c.vertices()[k]}));
  j["undirected"] = std::move(und);
  j["arrows"] = c.arrow_vertices();
  return j.dump(2) + "\n";
}

void save_chain(const ChainGraph& c, const std::string& path) {
  write_file(path, chain_to_json(c));
}

GaussianProfileParams load_params(const std::string& path) {
  const json j = parse_file(path);
  return params_from_json(j.contains("params") ? j.at("params") : j);
}

void save_params(const GaussianProfileParams& p, const std::string& path) {
  write_file(path, params_json(p).dump(2) + "\n");
}

void save_model(const EmState& state, const std::string& path) {
  json j;
  j["params"] = params_json(state.params);
  j["summaries"] = summaries_json(state.summaries);
  j["iterations"] = state.iterations;
  j["converged"] = state.converged;
  write_file(path, j.dump(2) + "\n");
}

PosteriorSummaries load_model_summaries(const std::string& path) {
  const json j = parse_file(path);
  return summaries_from_json(j.contains("summaries") ? j.at("summaries") : j);
}

GaussianProfileParams load_model_params(const std::string& path) {
  const json j = parse_file(path);
  return params_from_json(j.contains("params") ? j.at("params") : j);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad number '" + s + "' " + context);
  }
}

Eigen::MatrixXd load_level_csv(const std::string& path, int* cols_out) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
  const auto header = split_csv_line(line);
  const int p = static_cast<int>(header.size());
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != p)
      throw InputError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                       std::to_string(p) + " columns, found " + std::to_string(cells.size()));
    std::vector<double> row;
    for (int c = 0; c < p; ++c)
      row.push_back(parse_double(cells[c], "at '" + path + "' line " + std::to_string(lineno)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("'" + path + "' has no data rows");
  Eigen::MatrixXd m(rows.size(), p);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < p; ++c) m(i, c) = rows[i][c];
  *cols_out = p;
  return m;
}

ProfileDataset load_dataset_single_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
  const auto header = split_csv_line(line);
  if (header.empty() || header.front() != "level")
    throw InputError("'" + path + "': single-file datasets need a leading 'level' column");
  const int p = static_cast<int>(header.size()) - 1;
  if (p < 1) throw InputError("'" + path + "': no response columns");
  std::vector<std::string> levels;
  std::vector<std::vector<std::vector<double>>> rows_per_level;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != p + 1)
      throw InputError("'" + path + "' line " + std::to_string(lineno) +
                       ": inconsistent column count");
    const std::string& level = cells.front();
    size_t li = 0;
    for (; li < levels.size(); ++li)
      if (levels[li] == level) break;
    if (li == levels.size()) {
      levels.push_back(level);
      rows_per_level.emplace_back();
    }
    std::vector<double> row;
    for (int c = 1; c <= p; ++c)
      row.push_back(parse_double(cells[c], "at '" + path + "' line " + std::to_string(lineno)));
    rows_per_level[li].push_back(std::move(row));
  }
  ProfileDataset d;
  d.levels = levels;
  for (const auto& rows : rows_per_level) {
    Eigen::MatrixXd m(rows.size(), p);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int c = 0; c < p; ++c) m(i, c) = rows[i][c];
    d.data.push_back(std::move(m));
  }
  d.validate();
  return d;
}

}  // namespace

ProfileDataset load_dataset(const std::string& path) {
  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string name = entry.path().filename().string();
      if (name.starts_with("level_") && name.ends_with(".csv")) files.push_back(name);
    }
    if (files.empty()) throw InputError("no level_<x>.csv files in '" + path + "'");
    std::sort(files.begin(), files.end());
    ProfileDataset d;
    int p = -1;
    for (const auto& name : files) {
      const std::string level = name.substr(6, name.size() - 10);
      int cols = 0;
      Eigen::MatrixXd m = load_level_csv((fs::path(path) / name).string(), &cols);
      if (p >= 0 && cols != p)
        throw InputError("level files disagree on column count in '" + path + "'");
      p = cols;
      d.levels.push_back(level);
      d.data.push_back(std::move(m));
    }
    d.validate();
    return d;
  }
  return load_dataset_single_file(path);
}

void save_dataset(const ProfileDataset& d, const std::string& dir) {
  d.validate();
  fs::create_directories(dir);
  for (int x = 0; x < d.q(); ++x) {
    std::ostringstream body;
    for (int c = 0; c < d.p(); ++c) body << (c ? "," : "") << "y" << c + 1;
    body << "\n";
    for (int r = 0; r < d.n(x); ++r) {
      for (int c = 0; c < d.p(); ++c) body << (c ? "," : "") << fmt_double(d.data[x](r, c));
      body << "\n";
    }
    write_file((fs::path(dir) / ("level_" + d.levels[x] + ".csv")).string(), body.str());
  }
}

EdgeListData load_edge_list(const std::string& path, const std::vector<std::string>& vertices,
                            const std::vector<std::string>& levels) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
  const auto header = split_csv_line(line);
  const bool scored = header.size() == 4;
  if (!(header.size() == 3 || scored) || header[0] != "level")
    throw InputError("'" + path + "': expected header level,a,b[,score]");

  EdgeListData out{MultipleGraphs(vertices, levels), {}, scored};
  const int p = static_cast<int>(vertices.size());
  if (scored)
    out.scores.assign(levels.size(), Eigen::MatrixXd::Zero(p, p));
  auto vertex_at = [&](const std::string& name, int lineno) {
    for (int i = 0; i < p; ++i)
      if (vertices[i] == name) return i;
    throw InputError("'" + path + "' line " + std::to_string(lineno) + ": unknown vertex '" +
                     name + "'");
  };
  auto level_at = [&](const std::string& name, int lineno) {
    for (size_t i = 0; i < levels.size(); ++i)
      if (levels[i] == name) return static_cast<int>(i);
    throw InputError("'" + path + "' line " + std::to_string(lineno) + ": unknown level '" +
                     name + "'");
  };
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw InputError("'" + path + "' line " + std::to_string(lineno) +
                       ": inconsistent column count");
    const int x = level_at(cells[0], lineno);
    const int i = vertex_at(cells[1], lineno);
    const int j = vertex_at(cells[2], lineno);
    out.graphs.set_edge(x, i, j, true);
    if (scored) {
      const double v = parse_double(cells[3], "at line " + std::to_string(lineno));
      out.scores[x](i, j) = out.scores[x](j, i) = v;
    }
  }
  return out;
}

std::string dot_export(const ProfileGraph& g) {
  std::ostringstream os;
  os << "graph profile {\n";
  for (int v = 0; v < g.p(); ++v) {
    os << "  \"" << g.vertex_name(v) << "\"";
    if (g.kind(v) == VertexKind::square)
      os << " [shape=box]";
    else
      os << " [shape=circle]";
    os << ";\n";
  }
  for (int i = 0; i < g.p(); ++i) {
    for (int j = i + 1; j < g.p(); ++j) {
      if (g.is_missing(i, j)) continue;
      os << "  \"" << g.vertex_name(i) << "\" -- \"" << g.vertex_name(j) << "\"";
      if (g.is_dotted(i, j)) {
        os << " [style=dashed, label=\"";
        const auto z = g.space().unmask(g.label(i, j));
        for (size_t k = 0; k < z.size(); ++k) os << (k ? "," : "") << z[k];
        os << "\"]";
      }
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string statements_to_json(const std::vector<IndependenceStatement>& stmts) {
  json arr = json::array();
  for (const auto& s : stmts) {
    json j;
    switch (s.scope) {
      case StatementScope::profile_levels: j["kind"] = "profile"; break;
      case StatementScope::given_x: j["kind"] = "given-x"; break;
      case StatementScope::versus_x: j["kind"] = "versus-x"; break;
    }
    j["blocks"] = s.blocks;
    j["given"] = s.given;
    if (s.scope == StatementScope::profile_levels) j["profiles"] = s.profiles;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string statements_to_text(const std::vector<IndependenceStatement>& stmts) {
  std::ostringstream os;
  for (const auto& s : stmts) os << s.to_text() << "\n";
  return os.str();
}

void write_trace_csv(const EmState& state, const std::string& path) {
  std::ostringstream os;
  os << "iteration,Q,max_delta_omega,max_delta_beta\n";
  for (size_t i = 0; i < state.q_trace.size(); ++i) {
    os << i + 1 << "," << fmt_double(state.q_trace[i]) << ","
       << fmt_double(state.max_delta_omega[i]) << "," << fmt_double(state.max_delta_beta[i])
       << "\n";
  }
  write_file(path, os.str());
}

namespace {

std::string opt_fmt(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

}  // namespace

std::string robustness_to_table(const RobustnessSummary& s) {
  std::ostringstream os;
  os << "Graph\tMean\tSE\n";
  for (size_t x = 0; x < s.levels.size(); ++x)
    os << "U(" << s.levels[x] << ")\t" << opt_fmt(s.mean_per_level[x]) << "\t"
       << opt_fmt(s.se_per_level[x]) << "\n";
  os << "Overall\t" << opt_fmt(s.mean_overall) << "\t" << opt_fmt(s.se_overall) << "\n";
  return os.str();
}

std::string robustness_to_json(const RobustnessSummary& s) {
  json j;
  j["fraction"] = s.fraction;
  j["reps"] = s.reps;
  json lv = json::object();
  for (size_t x = 0; x < s.levels.size(); ++x) {
    json e;
    if (s.mean_per_level[x]) e["mean"] = *s.mean_per_level[x];
    if (s.se_per_level[x]) e["se"] = *s.se_per_level[x];
    lv["U(" + s.levels[x] + ")"] = std::move(e);
  }
  j["per_level"] = std::move(lv);
  json ov;
  if (s.mean_overall) ov["mean"] = *s.mean_overall;
  if (s.se_overall) ov["se"] = *s.se_overall;
  j["overall"] = std::move(ov);
  return j.dump(2) + "\n";
}

}  // namespace io
}  // namespace pugm
