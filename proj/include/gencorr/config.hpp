#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gencorr/fitness.hpp"
#include "gencorr/genetic.hpp"
#include "gencorr/landmarks.hpp"
#include "gencorr/wks.hpp"

namespace gencorr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string mesh_a;
  std::string mesh_b;
  std::uint64_t seed = 1;

  int k_s = 30;
  int k_t = 60;
  int wks_energies = 100;

  double min_separation = 0.08;
  double separation_growth = 1.1;
  int max_landmarks = 35;
  double adjacency_radius = 0.3;
  int centers_eigenfunctions = 30;

  double wks_threshold = 0.2;
  int prominent_max_genes = 4;

  double alpha = 1.0;
  double beta = 100.0;
  double membrane_weight = 1.0;
  double bending_weight = 1e-3;
  double log_threshold = 1e-6;
  double gamma = 5e-4;

  double admission_threshold = 0.06;
  int population_size = 400;
  int max_init_attempts = 8000;
  double crossover_rate = 0.75;
  double growth_rate = 0.05;
  double shrink_rate = 0.1;
  int shrink_count = 6;
  double guidance_rate = 0.05;
  int patience = 70;
  int max_generations = 300;
  double convergence_threshold = 0.06;
  int threads = 0;

  LandmarkParams landmark_params() const;
  WksParams wks_params() const;
  FitnessParams fitness_params() const;
  GeneticParams genetic_params() const;
};

/// Keys in file order (snake_case). The CLI exposes each as --kebab-case.
const std::vector<std::string>& config_keys();

/// Assigns one key from its text form; throws ConfigError on unknown keys or
/// unparsable values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);

/// Flat `key = value` lines; `#` starts a comment.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig read_config(const std::filesystem::path& path, RunConfig base = {});
void write_config(std::ostream& out, const RunConfig& config);
void write_config(const std::filesystem::path& path, const RunConfig& config);

/// Ranges and probabilities; with vertex counts, also k_s <= k_t <= n.
void validate(const RunConfig& config);
void validate(const RunConfig& config, int vertices_a, int vertices_b);

}  // namespace gencorr
