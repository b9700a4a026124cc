#include "whisk/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "whisk/bounds.hpp"
#include "whisk/error.hpp"
#include "whisk/io.hpp"
#include "whisk/spectral.hpp"

namespace whisk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kBoundSlack = -1e-9;
constexpr double kSupermodularSlack = 1e-9;
constexpr double kExponents[] = {-1.0, -0.5, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

json bound_json(const BoundReport& r) {
  json j = {{"trace_P", r.trace_P},   {"two_trace_P", r.two_trace_P}, {"bound", r.bound},
            {"constant_C", r.constant_C}, {"slack", r.slack}};
  if (!r.per_node_constants.empty()) {
    j["attachment_node"] = r.attachment_node;
    j["per_node_constants"] = r.per_node_constants;
  }
  return j;
}

json pbh_json(std::string_view system, std::string_view input, const PBHReport& r) {
  json j = {{"system", system}, {"input", input}, {"controllable", r.controllable}, {"witness", nullptr}};
  if (r.witness) j["witness"] = {{"eigenvalue", r.witness->eigenvalue}, {"vector", vector_json(r.witness->vector)}};
  return j;
}

std::string_view shape_name(SetFunctionShape s) {
  switch (s) {
    case SetFunctionShape::Submodular: return "submodular";
    case SetFunctionShape::Supermodular: return "supermodular";
    case SetFunctionShape::Modular: return "modular";
  }
  return "unknown";
}

json step_json(const GrowthStep& s) {
  return {{"iteration", s.iteration},
          {"chosen_node", s.node},
          {"lambda2", s.lambda2},
          {"relaxed_value", s.relaxed_value ? json(*s.relaxed_value) : json(nullptr)},
          {"relaxation_converged", s.relaxation_converged},
          {"two_trace_P", s.two_trace_P},
          {"bound", s.bound},
          {"slack", s.slack},
          {"test_input_controllable", s.test_input_controllable},
          {"whiskering_mismatches", s.whiskering_mismatches},
          {"graph_size", s.graph.size()}};
}

bool write_text(const fs::path& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

std::optional<Laplacian> load_graph(const fs::path& path, std::ostream& err) {
  try {
    return read_graph_file(path);
  } catch (const Error& e) {
    err << "error: " << path.string() << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

NodeIndexSet random_subset(std::mt19937_64& rng, int m) {
  std::vector<int> idx;
  for (int i = 1; i <= m; ++i) {
    if (rng() & 1u) idx.push_back(i);
  }
  return NodeIndexSet(std::move(idx));
}

}  // namespace

InputMatrix parse_input_spec(std::string_view spec, int n) {
  if (!spec.empty() && spec.front() == 'e') {
    int i = 0;
    const auto [ptr, ec] = std::from_chars(spec.data() + 1, spec.data() + spec.size(), i);
    if (ec != std::errc() || ptr != spec.data() + spec.size()) {
      throw Error(Errc::ParseError, "bad basis input '" + std::string(spec) + "'");
    }
    if (i < 1 || i > n) throw Error(Errc::ParseError, "basis index outside [1," + std::to_string(n) + "]");
    return InputMatrix::basis(n, i);
  }
  std::vector<double> values;
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad input entry '" + item + "'");
    }
  }
  if (static_cast<int>(values.size()) != n) {
    throw Error(Errc::ParseError, "input has " + std::to_string(values.size()) + " entries, graph has " +
                                      std::to_string(n) + " nodes");
  }
  Vector b = Eigen::Map<Vector>(values.data(), n);
  if (!b.allFinite()) throw Error(Errc::ParseError, "input entries must be finite");
  return InputMatrix(b);
}

void write_trajectory_csv(std::ostream& out, const std::vector<GrowthTrajectory>& trajectories) {
  out << "iteration,method,cluster,chosen_node,lambda2,relaxed_value,two_trace_P,bound,slack\n";
  for (const GrowthTrajectory& t : trajectories) {
    for (const GrowthStep& s : t.steps) {
      out << s.iteration << ',' << to_string(t.method) << ',' << to_string(t.cluster) << ',' << s.node << ','
          << format_double(s.lambda2) << ',' << (s.relaxed_value ? format_double(*s.relaxed_value) : "") << ','
          << format_double(s.two_trace_P) << ',' << format_double(s.bound) << ',' << format_double(s.slack)
          << '\n';
    }
  }
}

int cmd_grow(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<Method> methods;
  if (config.method == "all") {
    methods = {Method::Exhaustive, Method::Relaxation, Method::Heuristic};
  } else if (auto m = parse_method(config.method)) {
    methods = {*m};
  } else {
    err << "error: unknown method '" << config.method << "'\n";
    return kUsage;
  }
  const auto cluster = parse_cluster(config.cluster);
  if (!cluster) {
    err << "error: unknown cluster '" << config.cluster << "'\n";
    return kUsage;
  }
  if (config.iterations < 1 || !(config.tol > 0.0) || config.seed_graph_path.empty() || config.out_dir.empty()) {
    err << "error: need iterations >= 1, tol > 0, a seed graph and an output directory\n";
    return kUsage;
  }

  const auto seed = load_graph(config.seed_graph_path, err);
  if (!seed) return kParseError;
  if (!seed->connected()) {
    err << "error: seed graph is disconnected\n";
    return kDisconnected;
  }
  if (config.ground < 1 || config.ground > seed->size()) {
    err << "error: ground node must be a seed node\n";
    return kUsage;
  }

  GrowthOptions opts;
  opts.iterations = config.iterations;
  opts.rng_seed = config.rng_seed;
  opts.ground = config.ground;
  opts.tol = config.tol;

  std::vector<GrowthTrajectory> trajectories;
  for (Method m : methods) trajectories.push_back(grow(*seed, m, *cluster, opts));
  for (const GrowthTrajectory& t : trajectories) {
    if (!t.converged()) {
      err << "error: relaxation did not converge within " << opts.relaxation.max_iterations << " iterations\n";
      return kConvergence;
    }
  }

  std::ostringstream csv;
  write_trajectory_csv(csv, trajectories);

  json report;
  report["config"] = {{"seed", config.seed_graph_path.string()},
                      {"method", config.method},
                      {"cluster", config.cluster},
                      {"iterations", config.iterations},
                      {"ground", config.ground},
                      {"tol", config.tol},
                      {"rng_seed", config.rng_seed}};
  report["seed_graph"] = to_json(*seed);
  report["trajectories"] = json::array();
  for (const GrowthTrajectory& t : trajectories) {
    json steps = json::array();
    for (const GrowthStep& s : t.steps) steps.push_back(step_json(s));
    report["trajectories"].push_back({{"method", to_string(t.method)},
                                      {"cluster", to_string(t.cluster)},
                                      {"seed_size", t.seed_size},
                                      {"steps", steps},
                                      {"final_graph", to_json(t.steps.back().graph)}});
  }

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    err << "error: cannot create " << config.out_dir.string() << ": " << ec.message() << "\n";
    return kUsage;
  }
  bool ok = write_text(config.out_dir / "trajectory.csv", csv.str(), err) &&
            write_text(config.out_dir / "report.json", report.dump(2) + "\n", err);
  for (const GrowthTrajectory& t : trajectories) {
    const fs::path dir = methods.size() > 1 ? config.out_dir / std::string(to_string(t.method)) : config.out_dir;
    fs::create_directories(dir, ec);
    std::ostringstream dot0;
    write_dot(dot0, *seed, t.seed_size, "step_0");
    ok = ok && write_text(dir / "step_0.dot", dot0.str(), err);
    for (const GrowthStep& s : t.steps) {
      std::ostringstream dot;
      const std::string name = "step_" + std::to_string(s.iteration);
      write_dot(dot, s.graph, t.seed_size, name);
      ok = ok && write_text(dir / (name + ".dot"), dot.str(), err);
    }
  }
  if (!ok) return kUsage;

  for (const GrowthTrajectory& t : trajectories) {
    const GrowthStep& last = t.steps.back();
    out << to_string(t.method) << '/' << to_string(t.cluster) << ": " << t.steps.size() << " steps, final n="
        << last.graph.size() << ", lambda2=" << format_double(last.lambda2) << "\n";
  }
  return kOk;
}

int cmd_analyze(const AnalyzeConfig& config, std::ostream& out, std::ostream& err) {
  const auto L = load_graph(config.graph_path, err);
  if (!L) return kParseError;
  std::optional<InputMatrix> b;
  try {
    b = parse_input_spec(config.input, L->size());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  if (config.ground < 1 || config.ground > L->size() || !(config.tol > 0.0)) {
    err << "error: ground must be a node and tol must be positive\n";
    return kUsage;
  }

  const EigenSystem eig = eig_sym(L->matrix());
  const bool connected = L->connected();
  json doc;
  doc["graph"] = to_json(*L);
  doc["connected"] = connected;
  doc["lambda2"] = L->size() >= 2 ? json(eig.values(1)) : json(nullptr);
  doc["spectrum"] = vector_json(eig.values);
  doc["tol"] = config.tol;

  json pbh = json::array();
  const PBHReport seed_report = pbh_controllable(*L, eig, *b, config.tol);
  pbh.push_back(pbh_json("L", "b", seed_report));
  bool consistent = true;
  for (GrowthOperator op : {GrowthOperator::W1, GrowthOperator::W2}) {
    const Laplacian grown = apply_operator(*L, op);
    const EigenSystem grown_eig = eig_sym(grown.matrix());
    for (const InputPattern& p : all_input_patterns(op)) {
      const PBHReport r = pbh_controllable(grown, grown_eig, stack_input(*b, p), config.tol);
      consistent = consistent && r.controllable == seed_report.controllable;
      pbh.push_back(pbh_json(op == GrowthOperator::W1 ? "W1(L)" : "W2(L)", p.label(), r));
    }
  }
  doc["pbh"] = pbh;
  doc["verdicts_agree"] = consistent;

  doc["gramian"] = nullptr;
  doc["bounds"] = nullptr;
  doc["supermodularity"] = json::array();
  if (connected) {
    const GramianResult g = gramian(*L, config.ground);
    doc["gramian"] = {{"ground", config.ground}, {"trace", g.trace}, {"residual", g.residual}};
    doc["bounds"] = {{"w1", bound_json(bound_w1(*L, config.ground))}, {"w2", bound_json(bound_w2(*L, config.ground))}};
    const Matrix A = grounded_laplacian(*L, config.ground);
    const int m = static_cast<int>(A.rows());
    if (m >= 1) {
      const NodeIndexSet J = NodeIndexSet::range(1, (2 * m + 2) / 3);
      const NodeIndexSet K = NodeIndexSet::range(m / 3 + 1, m);
      for (double p : {-1.0, 0.5, 1.0, 1.5}) {
        const SupermodularityCheck c = check_trace_power_supermodularity(A, J, K, p);
        doc["supermodularity"].push_back({{"J", J.indices()},
                                          {"K", K.indices()},
                                          {"p", p},
                                          {"lhs", c.lhs},
                                          {"rhs", c.rhs},
                                          {"shape", shape_name(c.shape)},
                                          {"holds", c.holds}});
      }
    }
  }

  const std::string text = doc.dump(2) + "\n";
  out << text;
  if (config.out_path && !write_text(*config.out_path, text, err)) return kUsage;
  return kOk;
}

int cmd_check_bounds(const CheckBoundsConfig& config, std::ostream& out, std::ostream& err) {
  const auto L = load_graph(config.graph_path, err);
  if (!L) return kParseError;
  if (!L->connected()) {
    err << "error: graph is disconnected\n";
    return kDisconnected;
  }
  if (config.trials < 0) {
    err << "error: trials must be nonnegative\n";
    return kUsage;
  }
  if (config.trials == 0) {
    err << "warning: zero trials requested; nothing was checked\n";
    out << "trials: 0\nviolations: 0\n";
    return kOk;
  }

  Matrix A = grounded_laplacian(*L, 1);
  if (config.corrupt_grounded) config.corrupt_grounded(A);
  std::mt19937_64 rng(config.rng_seed);
  const int m = static_cast<int>(A.rows());

  int supermodular_violations = 0;
  std::optional<json> witness;
  for (int t = 0; t < config.trials; ++t) {
    const NodeIndexSet J = random_subset(rng, m);
    const NodeIndexSet K = random_subset(rng, m);
    const double p = kExponents[rng() % std::size(kExponents)];
    json instance = {{"kind", "supermodularity"}, {"trial", t}, {"matrix", matrix_json(A)}, {"J", J.indices()},
                     {"K", K.indices()},          {"p", p}};
    try {
      const SupermodularityCheck c = check_trace_power_supermodularity(A, J, K, p, kSupermodularSlack);
      if (c.holds) continue;
      instance["lhs"] = c.lhs;
      instance["rhs"] = c.rhs;
      instance["shape"] = shape_name(c.shape);
    } catch (const Error& e) {
      instance["error"] = e.what();
    }
    ++supermodular_violations;
    if (!witness) witness = instance;
  }

  int bound_checks = 0;
  int bound_violations = 0;
  auto record = [&](std::string_view kind, const BoundReport& r) {
    ++bound_checks;
    if (r.slack >= kBoundSlack) return;
    ++bound_violations;
    if (!witness) {
      json w = {{"kind", kind}, {"graph", to_json(*L)}, {"report", bound_json(r)}};
      witness = w;
    }
  };
  record("bound_w1", bound_w1(*L));
  record("bound_w2", bound_w2(*L));
  for (int i = 1; i <= L->size(); ++i) {
    record("bound_single_leaf", bound_single_leaf(*L, i));
    record("bound_single_cluster", bound_single_cluster(*L, i));
  }

  out << "trials: " << config.trials << "\n"
      << "supermodularity violations: " << supermodular_violations << "\n"
      << "bound checks: " << bound_checks << "\n"
      << "bound violations: " << bound_violations << "\n"
      << "violations: " << supermodular_violations + bound_violations << "\n";
  if (witness) {
    out << "offending instance:\n" << witness->dump(2) << "\n";
    return kViolations;
  }
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Controllability-preserving graph growth experiments"};
  app.require_subcommand(1);

  ExperimentConfig grow_cfg;
  auto* grow = app.add_subcommand("grow", "Grow a seed graph and record the trajectory");
  grow->add_option("--seed", grow_cfg.seed_graph_path, "Seed graph (edge list or .json)")->required();
  grow->add_option("--method", grow_cfg.method, "exhaustive | relaxation | heuristic | all")->required();
  grow->add_option("--cluster", grow_cfg.cluster, "leaf | path2")->required();
  grow->add_option("--iterations", grow_cfg.iterations, "Growth steps")->required();
  grow->add_option("--ground", grow_cfg.ground, "Ground node for Gramian logging (1-based)");
  grow->add_option("--tol", grow_cfg.tol, "PBH tolerance");
  grow->add_option("--rng-seed", grow_cfg.rng_seed, "Seed for the per-step test inputs");
  grow->add_option("--out", grow_cfg.out_dir, "Output directory")->required();

  AnalyzeConfig analyze_cfg;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Controllability, spectrum and bound report for one graph");
  analyze->add_option("--graph", analyze_cfg.graph_path, "Graph file")->required();
  analyze->add_option("--input", analyze_cfg.input, "e<i> or comma-separated input vector")->required();
  analyze->add_option("--tol", analyze_cfg.tol, "PBH tolerance");
  analyze->add_option("--ground", analyze_cfg.ground, "Ground node (1-based)");
  analyze->add_option("--out", analyze_out, "Also write the JSON document here");

  CheckBoundsConfig bounds_cfg;
  auto* bounds = app.add_subcommand("check-bounds", "Randomized supermodularity and Gramian bound checks");
  bounds->add_option("--graph", bounds_cfg.graph_path, "Graph file")->required();
  bounds->add_option("--trials", bounds_cfg.trials, "Supermodularity trials")->required();
  bounds->add_option("--rng-seed", bounds_cfg.rng_seed, "Trial seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (grow->parsed()) return cmd_grow(grow_cfg, std::cout, std::cerr);
    if (analyze->parsed()) {
      if (!analyze_out.empty()) analyze_cfg.out_path = analyze_out;
      return cmd_analyze(analyze_cfg, std::cout, std::cerr);
    }
    return cmd_check_bounds(bounds_cfg, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace whisk::cli
