#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "pugm/io.hpp"
#include "support/figures.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return PUGM_CLI_PATH; }

int run_cli(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = std::string(cli_path()) + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate-fit-extract pipeline produces a valid graph") {
  TempDir tmp("pugm_cli_pipeline");
  CHECK(run_cli("simulate --scenario 1 --p 8 --q 2 --n 40 --seed 1 --out " + tmp.sub("d")) == 0);
  CHECK(fs::exists(tmp.sub("d") + "/level_0.csv"));
  CHECK(fs::exists(tmp.sub("d") + "/truth_params.json"));
  CHECK(fs::exists(tmp.sub("d") + "/truth_graph.json"));

  CHECK(run_cli("fit --data " + tmp.sub("d") + " --out " + tmp.sub("m.json") + " --trace " +
                tmp.sub("t.csv") + " --max-iter 60",
                tmp.sub("fit.out")) == 0);
  CHECK(fs::exists(tmp.sub("m.json")));
  CHECK(slurp(tmp.sub("t.csv")).starts_with("iteration,Q"));

  CHECK(run_cli("extract-graph --model " + tmp.sub("m.json") + " --out " + tmp.sub("g.json"),
                tmp.sub("ex.out")) == 0);
  CHECK_NOTHROW(pugm::io::load_graph(tmp.sub("g.json")));

  CHECK(run_cli("evaluate --truth " + tmp.sub("d") + " --estimate " + tmp.sub("g.json") +
                " --model " + tmp.sub("m.json") + " --format table",
                tmp.sub("ev.out")) == 0);
  CHECK(slurp(tmp.sub("ev.out")).find("pooled") != std::string::npos);
}

TEST_CASE("deterministic output bytes for identical seeds") {
  TempDir tmp("pugm_cli_determinism");
  CHECK(run_cli("simulate --scenario 2 --p 6 --q 4 --n 10 --seed 42 --out " + tmp.sub("a")) == 0);
  CHECK(run_cli("simulate --scenario 2 --p 6 --q 4 --n 10 --seed 42 --out " + tmp.sub("b")) == 0);
  for (const char* name : {"level_0.csv", "level_3.csv", "truth_params.json", "truth_graph.json"})
    CHECK(slurp(tmp.sub("a") + "/" + name) == slurp(tmp.sub("b") + "/" + name));
}

TEST_CASE("export-dot on the reference figure") {
  TempDir tmp("pugm_cli_dot");
  pugm::io::save_graph(pugm::testing::g1(), tmp.sub("g1.json"));
  CHECK(run_cli("export-dot --graph " + tmp.sub("g1.json"), tmp.sub("g1.dot")) == 0);
  const std::string dot = slurp(tmp.sub("g1.dot"));
  CHECK(std::count(dot.begin(), dot.end(), '[') >= 4);
  // three dashed labelled edges and one plain edge
  size_t dashed = 0, pos = 0;
  while ((pos = dot.find("style=dashed", pos)) != std::string::npos) {
    ++dashed;
    pos += 1;
  }
  CHECK(dashed == 3);
  CHECK(dot.find("\"b\" -- \"d\";") != std::string::npos);
}

TEST_CASE("markov subcommands answer on the reference graphs") {
  TempDir tmp("pugm_cli_markov");
  pugm::io::save_graph(pugm::testing::three_vertex_example(), tmp.sub("g.json"));
  CHECK(run_cli("chain-class --graph " + tmp.sub("g.json"), tmp.sub("cc.json")) == 0);
  CHECK(slurp(tmp.sub("cc.json")).find("\"min\"") != std::string::npos);

  std::ofstream(tmp.sub("chain.json")) << R"({
    "vertices": ["a", "b", "c"],
    "undirected": [["a","b"], ["a","c"]],
    "arrows": ["a", "b"]
  })";
  CHECK(run_cli("check-compat --graph " + tmp.sub("g.json") + " --chain " + tmp.sub("chain.json"),
                tmp.sub("compat.out")) == 0);
  CHECK(slurp(tmp.sub("compat.out")).starts_with("compatible"));

  CHECK(run_cli("enumerate-independencies --property csmp --graph " + tmp.sub("g.json") +
                " --format json",
                tmp.sub("stmts.json")) == 0);
  CHECK(slurp(tmp.sub("stmts.json")).find("\"blocks\"") != std::string::npos);
}

TEST_CASE("bad inputs exit with code 1") {
  TempDir tmp("pugm_cli_errors");
  CHECK(run_cli("fit --data " + tmp.sub("missing_dir")) == 1);
  CHECK(run_cli("no-such-command") == 1);
  std::ofstream(tmp.sub("bad.json")) << "{ not json";
  CHECK(run_cli("export-dot --graph " + tmp.sub("bad.json")) == 1);
  CHECK(run_cli("simulate --scenario 9 --p 8 --q 2 --n 5 --seed 1 --out " + tmp.sub("x")) == 1);
}
