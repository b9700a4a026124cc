#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whisk/controllability.hpp"
#include "whisk/optimizer.hpp"

namespace whisk::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kDisconnected = 3,
  kConvergence = 4,
  kViolations = 5,
};

struct ExperimentConfig {
  std::filesystem::path seed_graph_path;
  std::string method = "all";  // exhaustive | relaxation | heuristic | all
  std::string cluster = "leaf";
  int iterations = 9;
  int ground = 1;
  double tol = kDefaultTol;
  std::uint64_t rng_seed = 0;
  std::filesystem::path out_dir;
};

/// Writes trajectory.csv, report.json and step_<k>.dot files (under
/// <out>/<method>/ when method is "all"). Nothing is written on failure.
int cmd_grow(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

struct AnalyzeConfig {
  std::filesystem::path graph_path;
  std::string input = "e1";
  double tol = kDefaultTol;
  int ground = 1;
  std::optional<std::filesystem::path> out_path;
};

/// Prints the analysis document as JSON and optionally writes it to out_path.
int cmd_analyze(const AnalyzeConfig& config, std::ostream& out, std::ostream& err);

struct CheckBoundsConfig {
  std::filesystem::path graph_path;
  int trials = 200;
  std::uint64_t rng_seed = 0;
  /// Test hook applied to the grounded Laplacian before the supermodularity
  /// trials.
  std::function<void(Matrix&)> corrupt_grounded;
};

int cmd_check_bounds(const CheckBoundsConfig& config, std::ostream& out, std::ostream& err);

/// "e<i>" (1-based basis vector) or a comma-separated list of n numbers.
InputMatrix parse_input_spec(std::string_view spec, int n);

/// CSV header and one row per step of each trajectory, in order.
void write_trajectory_csv(std::ostream& out, const std::vector<GrowthTrajectory>& trajectories);

int run(int argc, char** argv);

}  // namespace whisk::cli
