#include "gencorr/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <variant>

namespace gencorr {
namespace {

using Field = std::variant<std::string RunConfig::*, std::uint64_t RunConfig::*, int RunConfig::*, double RunConfig::*>;

struct Entry {
  const char* key;
  Field field;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"mesh_a", &RunConfig::mesh_a},
      {"mesh_b", &RunConfig::mesh_b},
      {"seed", &RunConfig::seed},
      {"k_s", &RunConfig::k_s},
      {"k_t", &RunConfig::k_t},
      {"wks_energies", &RunConfig::wks_energies},
      {"min_separation", &RunConfig::min_separation},
      {"separation_growth", &RunConfig::separation_growth},
      {"max_landmarks", &RunConfig::max_landmarks},
      {"adjacency_radius", &RunConfig::adjacency_radius},
      {"centers_eigenfunctions", &RunConfig::centers_eigenfunctions},
      {"wks_threshold", &RunConfig::wks_threshold},
      {"prominent_max_genes", &RunConfig::prominent_max_genes},
      {"alpha", &RunConfig::alpha},
      {"beta", &RunConfig::beta},
      {"membrane_weight", &RunConfig::membrane_weight},
      {"bending_weight", &RunConfig::bending_weight},
      {"log_threshold", &RunConfig::log_threshold},
      {"gamma", &RunConfig::gamma},
      {"admission_threshold", &RunConfig::admission_threshold},
      {"population_size", &RunConfig::population_size},
      {"max_init_attempts", &RunConfig::max_init_attempts},
      {"crossover_rate", &RunConfig::crossover_rate},
      {"growth_rate", &RunConfig::growth_rate},
      {"shrink_rate", &RunConfig::shrink_rate},
      {"shrink_count", &RunConfig::shrink_count},
      {"guidance_rate", &RunConfig::guidance_rate},
      {"patience", &RunConfig::patience},
      {"max_generations", &RunConfig::max_generations},
      {"convergence_threshold", &RunConfig::convergence_threshold},
      {"threads", &RunConfig::threads},
  };
  return table;
}

const Entry& find_entry(std::string_view key) {
  for (const Entry& e : entries()) {
    if (key == e.key) return e;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Entry& e : entries()) k.emplace_back(e.key);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  const Entry& e = find_entry(key);
  value = trim(value);
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          config.*member = std::string(value);
        } else {
          config.*member = parse_number<T>(key, value);
        }
      },
      e.field);
}

std::string get_config_value(const RunConfig& config, std::string_view key) {
  const Entry& e = find_entry(key);
  return std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return config.*member;
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os << std::setprecision(17) << config.*member;
          return os.str();
        } else {
          return std::to_string(config.*member);
        }
      },
      e.field);
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(base, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return base;
}

RunConfig read_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const RunConfig& config) {
  for (const Entry& e : entries()) out << e.key << " = " << get_config_value(config, e.key) << "\n";
}

void write_config(const std::filesystem::path& path, const RunConfig& config) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path.string());
  write_config(out, config);
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  for (auto [name, p] : {std::pair{"crossover_rate", c.crossover_rate}, std::pair{"growth_rate", c.growth_rate},
                         std::pair{"shrink_rate", c.shrink_rate}, std::pair{"guidance_rate", c.guidance_rate}}) {
    require(p >= 0.0 && p <= 1.0, std::string(name) + " must be a probability");
  }
  require(c.k_s >= 2 && c.k_s <= c.k_t, "need 2 <= k_s <= k_t");
  require(c.centers_eigenfunctions >= 1 && c.centers_eigenfunctions < c.k_t, "centers_eigenfunctions must be below k_t");
  require(c.wks_energies >= 2, "wks_energies must be at least 2");
  require(c.min_separation > 0.0 && c.separation_growth > 1.0, "separation must be positive and grow");
  require(c.max_landmarks >= 3, "max_landmarks must be at least 3");
  require(c.adjacency_radius >= 0.0, "adjacency_radius must be nonnegative");
  require(c.prominent_max_genes >= 1, "prominent_max_genes must be positive");
  require(c.alpha >= 0.0 && c.beta > 0.0, "need alpha >= 0 and beta > 0");
  require(c.gamma >= 0.0 && c.gamma <= 1.0, "gamma must lie in [0, 1]");
  require(c.log_threshold > 0.0, "log_threshold must be positive");
  require(c.population_size >= 2, "population_size must be at least 2");
  require(c.max_init_attempts >= 1, "max_init_attempts must be positive");
  require(c.shrink_count >= 1, "shrink_count must be positive");
  require(c.patience >= 1 && c.max_generations >= 0, "patience must be positive");
  require(c.threads >= 0, "threads must be nonnegative");
}

void validate(const RunConfig& c, int vertices_a, int vertices_b) {
  validate(c);
  if (c.k_t > std::min(vertices_a, vertices_b)) {
    throw ConfigError("invalid config: k_t = " + std::to_string(c.k_t) + " exceeds the vertex count");
  }
}

LandmarkParams RunConfig::landmark_params() const {
  LandmarkParams p;
  p.min_separation = min_separation;
  p.separation_growth = separation_growth;
  p.max_landmarks = max_landmarks;
  p.adjacency_radius = adjacency_radius;
  p.centers_eigenfunctions = centers_eigenfunctions;
  return p;
}

WksParams RunConfig::wks_params() const {
  WksParams p;
  p.num_energies = wks_energies;
  return p;
}

FitnessParams RunConfig::fitness_params() const {
  FitnessParams p;
  p.fmap.sizes = {k_t, k_s};
  p.fmap.alpha = alpha;
  p.fmap.beta = beta;
  p.elastic.membrane_weight = membrane_weight;
  p.elastic.bending_weight = bending_weight;
  p.elastic.log_threshold = log_threshold;
  p.gamma = gamma;
  return p;
}

GeneticParams RunConfig::genetic_params() const {
  GeneticParams p;
  p.wks_threshold = wks_threshold;
  p.prominent_max_genes = prominent_max_genes;
  p.population_size = population_size;
  p.admission_threshold = admission_threshold;
  p.max_init_attempts = max_init_attempts;
  p.crossover_rate = crossover_rate;
  p.growth_rate = growth_rate;
  p.shrink_rate = shrink_rate;
  p.shrink_count = shrink_count;
  p.guidance_rate = guidance_rate;
  p.patience = patience;
  p.max_generations = max_generations;
  p.convergence_threshold = convergence_threshold;
  p.threads = static_cast<unsigned>(threads);
  return p;
}

}  // namespace gencorr
