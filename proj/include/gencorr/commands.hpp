#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gencorr/config.hpp"

namespace gencorr {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct LandmarksCommand {
  std::filesystem::path mesh;
  std::filesystem::path out_dir;
  RunConfig config;
};

struct MatchCommand {
  RunConfig config;  // mesh_a, mesh_b and seed live here
  std::filesystem::path out_dir;
  bool log_full_population = false;  // otherwise only the first and last generations keep their population
};

struct EvalCommand {
  std::filesystem::path vertex_map;
  std::filesystem::path ground_truth;
  std::optional<std::filesystem::path> symmetric_ground_truth;
  std::filesystem::path mesh_b;
  std::filesystem::path out;
  int samples = 100;
  double max_threshold = 0.5;
};

struct DiversityCommand {
  std::filesystem::path run_log;
  std::filesystem::path mesh_b;
  std::optional<std::filesystem::path> landmarks_b;  // detected from mesh_b when absent
  std::filesystem::path out_dir;
  std::vector<int> generations;  // empty: first and last logged generation with a population
  RunConfig config;
};

/// Each command reports errors on `err` and returns an ExitCode.
int cmd_landmarks(const LandmarksCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_match(const MatchCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_diversity(const DiversityCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace gencorr
