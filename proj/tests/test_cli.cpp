#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>
#include <whisk/cli.hpp>
#include <whisk/error.hpp>

using namespace whisk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSeed = fs::path(WHISK_DATA_DIR) / "seed4.edges";

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("whisk_cli_" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

int run_exe(const std::string& args) {
  const std::string cmd = std::string(WHISKGROW_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

cli::ExperimentConfig grow_config(const fs::path& out) {
  cli::ExperimentConfig c;
  c.seed_graph_path = kSeed;
  c.method = "all";
  c.cluster = "leaf";
  c.iterations = 9;
  c.rng_seed = 1;
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("grow writes a 27-row trajectory for all methods") {
  TempDir tmp;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_grow(grow_config(tmp.path / "run"), out, err) == cli::kOk);
  const std::string csv = slurp(tmp.path / "run" / "trajectory.csv");
  CHECK(csv.rfind("iteration,method,cluster,chosen_node,lambda2,relaxed_value,two_trace_P,bound,slack\n", 0) == 0);
  CHECK(count_lines(csv) == 28);

  const json report = json::parse(slurp(tmp.path / "run" / "report.json"));
  CHECK(report.at("config").at("iterations") == 9);
  CHECK(report.at("seed_graph").at("n") == 4);
  REQUIRE(report.at("trajectories").size() == 3);
  for (const auto& t : report.at("trajectories")) {
    CHECK(t.at("steps").size() == 9);
    CHECK(t.at("final_graph").at("n") == 13);
    const fs::path dir = tmp.path / "run" / t.at("method").get<std::string>();
    for (int k = 0; k <= 9; ++k) CHECK(fs::exists(dir / ("step_" + std::to_string(k) + ".dot")));
  }
  CHECK(report["trajectories"][1]["steps"][0]["relaxed_value"].is_number());
  CHECK(report["trajectories"][0]["steps"][0]["relaxed_value"].is_null());
}

TEST_CASE("grow is deterministic") {
  TempDir tmp;
  std::ostringstream out, err;
  auto a = grow_config(tmp.path / "a");
  auto b = grow_config(tmp.path / "b");
  a.cluster = b.cluster = "path2";
  REQUIRE(cli::cmd_grow(a, out, err) == cli::kOk);
  REQUIRE(cli::cmd_grow(b, out, err) == cli::kOk);
  CHECK(slurp(tmp.path / "a" / "trajectory.csv") == slurp(tmp.path / "b" / "trajectory.csv"));
  CHECK(slurp(tmp.path / "a" / "heuristic" / "step_9.dot") == slurp(tmp.path / "b" / "heuristic" / "step_9.dot"));
}

TEST_CASE("grow with a single method writes DOT files at the top level") {
  TempDir tmp;
  std::ostringstream out, err;
  auto c = grow_config(tmp.path / "one");
  c.method = "heuristic";
  c.iterations = 2;
  REQUIRE(cli::cmd_grow(c, out, err) == cli::kOk);
  CHECK(count_lines(slurp(tmp.path / "one" / "trajectory.csv")) == 3);
  CHECK(fs::exists(tmp.path / "one" / "step_2.dot"));
}

TEST_CASE("grow error exits leave no output") {
  TempDir tmp;
  std::ostringstream out, err;
  auto c = grow_config(tmp.path / "out");

  c.seed_graph_path = tmp.write("split.edges", "1 2\n3 4\n");
  CHECK(cli::cmd_grow(c, out, err) == cli::kDisconnected);
  CHECK_FALSE(fs::exists(tmp.path / "out"));

  c.seed_graph_path = tmp.write("bad.edges", "1 2\n2 x\n");
  CHECK(cli::cmd_grow(c, out, err) == cli::kParseError);
  CHECK_FALSE(fs::exists(tmp.path / "out"));

  c.seed_graph_path = kSeed;
  c.method = "greedy";
  CHECK(cli::cmd_grow(c, out, err) == cli::kUsage);
  c.method = "all";
  c.iterations = 0;
  CHECK(cli::cmd_grow(c, out, err) == cli::kUsage);
  c.iterations = 1;
  c.ground = 9;
  CHECK(cli::cmd_grow(c, out, err) == cli::kUsage);
  CHECK_FALSE(fs::exists(tmp.path / "out"));
}

TEST_CASE("analyze: triangle with a single actuated node") {
  TempDir tmp;
  cli::AnalyzeConfig c;
  c.graph_path = tmp.write("k3.edges", "1 2\n2 3\n1 3\n");
  c.input = "e1";
  c.out_path = tmp.path / "analysis.json";
  std::ostringstream out, err;
  REQUIRE(cli::cmd_analyze(c, out, err) == cli::kOk);
  const json doc = json::parse(out.str());
  CHECK(json::parse(slurp(*c.out_path)) == doc);

  for (const char* key : {"graph", "connected", "lambda2", "spectrum", "tol", "pbh", "verdicts_agree", "gramian",
                          "bounds", "supermodularity"})
    CHECK(doc.contains(key));
  CHECK(doc["lambda2"].get<double>() == doctest::Approx(3.0));
  REQUIRE(doc["pbh"].size() == 11);
  for (const auto& p : doc["pbh"]) {
    CHECK_FALSE(p["controllable"].get<bool>());
    CHECK(p["witness"]["vector"].is_array());
  }
  CHECK(doc["verdicts_agree"].get<bool>());
  CHECK(doc["gramian"]["residual"].get<double>() <= 1e-8);
  CHECK(doc["bounds"]["w1"]["slack"].get<double>() >= -1e-9);
  CHECK(doc["bounds"]["w2"]["slack"].get<double>() >= -1e-9);
  for (const auto& s : doc["supermodularity"]) CHECK(s["holds"].get<bool>());
}

TEST_CASE("analyze: single edge with a single actuated node") {
  TempDir tmp;
  cli::AnalyzeConfig c;
  c.graph_path = tmp.write("p2.edges", "1 2\n");
  std::ostringstream out, err;
  REQUIRE(cli::cmd_analyze(c, out, err) == cli::kOk);
  const json doc = json::parse(out.str());
  std::map<std::string, bool> verdict;
  for (const auto& p : doc["pbh"])
    verdict[p["system"].get<std::string>() + p["input"].get<std::string>()] = p["controllable"].get<bool>();
  CHECK(verdict.at("Lb"));
  CHECK(verdict.at("W1(L)[b;0]"));
  CHECK(verdict.at("W2(L)[b;0;0;0]"));
  CHECK(verdict.at("W2(L)[b;b;b;0]"));
  // duplicated leaf input always loses controllability
  CHECK_FALSE(verdict.at("W1(L)[b;b]"));
  CHECK_FALSE(verdict.at("W2(L)[b;b;b;b]"));
  CHECK_FALSE(doc["verdicts_agree"].get<bool>());
}

TEST_CASE("analyze inputs") {
  TempDir tmp;
  std::ostringstream out, err;
  cli::AnalyzeConfig c;
  c.graph_path = tmp.write("p3.edges", "1 2\n2 3\n");
  c.input = "1,0.5,-2";
  CHECK(cli::cmd_analyze(c, out, err) == cli::kOk);
  c.input = "1,2";
  CHECK(cli::cmd_analyze(c, out, err) == cli::kParseError);
  c.input = "e4";
  CHECK(cli::cmd_analyze(c, out, err) == cli::kParseError);
  c.input = "e1";
  c.graph_path = tmp.write("bad.edges", "1 1\n");
  CHECK(cli::cmd_analyze(c, out, err) == cli::kParseError);

  // a disconnected graph still gets the controllability part
  std::ostringstream dis;
  c.graph_path = tmp.write("split.edges", "1 2\n3 4\n");
  REQUIRE(cli::cmd_analyze(c, dis, err) == cli::kOk);
  const json doc = json::parse(dis.str());
  CHECK(doc["gramian"].is_null());
  CHECK_FALSE(doc["connected"].get<bool>());

  CHECK(cli::parse_input_spec("e2", 3).matrix().col(0) == Vector{{0.0, 1.0, 0.0}});
  CHECK_THROWS_AS(cli::parse_input_spec("e", 3), Error);
  CHECK_THROWS_AS(cli::parse_input_spec("1,nan,2", 3), Error);
  CHECK_THROWS_AS(cli::parse_input_spec("1,2x,3", 3), Error);
}

TEST_CASE("check-bounds") {
  std::ostringstream out, err;
  cli::CheckBoundsConfig c;
  c.graph_path = kSeed;
  c.trials = 200;
  c.rng_seed = 3;
  CHECK(cli::cmd_check_bounds(c, out, err) == cli::kOk);
  CHECK(out.str().find("violations: 0\n") != std::string::npos);

  std::ostringstream out0, err0;
  c.trials = 0;
  CHECK(cli::cmd_check_bounds(c, out0, err0) == cli::kOk);
  CHECK(err0.str().find("warning") != std::string::npos);
}

TEST_CASE("check-bounds reports a corrupted matrix") {
  std::ostringstream out, err;
  cli::CheckBoundsConfig c;
  c.graph_path = kSeed;
  c.trials = 20;
  c.corrupt_grounded = [](Matrix& a) { a(0, 1) = a(1, 0) = 0.75; };
  CHECK(cli::cmd_check_bounds(c, out, err) == cli::kViolations);
  const std::string text = out.str();
  const auto at = text.find("offending instance:\n");
  REQUIRE(at != std::string::npos);
  const json witness = json::parse(text.substr(at + 20));
  CHECK(witness["kind"] == "supermodularity");
  CHECK(witness["matrix"][0][1].get<double>() == 0.75);
  CHECK(witness.contains("error"));
}

TEST_CASE("command line wiring and exit codes") {
  TempDir tmp;
  const std::string seed = kSeed.string();
  CHECK(run_exe("grow --seed " + seed + " --method all --cluster leaf --iterations 2 --out " +
                (tmp.path / "g").string()) == 0);
  CHECK(count_lines(slurp(tmp.path / "g" / "trajectory.csv")) == 7);
  const fs::path split = tmp.write("split.edges", "1 2\n3 4\n");
  CHECK(run_exe("grow --seed " + split.string() + " --method all --cluster leaf --iterations 2 --out " +
                (tmp.path / "h").string()) == 3);
  CHECK_FALSE(fs::exists(tmp.path / "h"));
  CHECK(run_exe("analyze --graph " + seed + " --input e2 --out " + (tmp.path / "a.json").string()) == 0);
  CHECK(fs::exists(tmp.path / "a.json"));
  CHECK(run_exe("analyze --graph " + tmp.write("bad.edges", "1 2 3\n").string() + " --input e1") == 2);
  CHECK(run_exe("check-bounds --graph " + seed + " --trials 50 --rng-seed 4") == 0);
  CHECK(run_exe("check-bounds --graph " + seed + " --trials 0") == 0);
  CHECK(run_exe("grow --seed " + seed) == 1);
  CHECK(run_exe("frobnicate") == 1);
}
