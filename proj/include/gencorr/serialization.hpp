#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gencorr/fitness.hpp"
#include "gencorr/genetic.hpp"
#include "gencorr/landmarks.hpp"

namespace gencorr {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"landmarks": [{"vertex", "category"}...], "adjacency": [[a, b]...], "min_separation"}
std::string landmarks_to_json(const LandmarkSet& set);
std::vector<Landmark> landmarks_from_json(const std::string& text);
void write_landmarks(const std::filesystem::path& path, const LandmarkSet& set);
std::vector<Landmark> read_landmarks(const std::filesystem::path& path);

struct MatchRecord {
  std::vector<int> genes;
  std::vector<VertexPair> pairs;
  std::vector<Category> source_categories;
  std::vector<Category> target_categories;
  FitnessReport report;
  int generations = 0;
  bool converged = false;
};

MatchRecord make_match_record(const MatchProblem& problem, const EvolutionResult& result);
std::string match_to_json(const MatchRecord& record);
MatchRecord match_from_json(const std::string& text);
void write_match(const std::filesystem::path& path, const MatchRecord& record);
MatchRecord read_match(const std::filesystem::path& path);

/// Header "rows cols", then one row per line.
void write_fmap(std::ostream& out, const Eigen::MatrixXd& c);
Eigen::MatrixXd read_fmap(std::istream& in);
void write_fmap(const std::filesystem::path& path, const Eigen::MatrixXd& c);
Eigen::MatrixXd read_fmap(const std::filesystem::path& path);

/// One target vertex per line.
void write_vertex_map(std::ostream& out, const VertexMap& map);
VertexMap read_vertex_map(std::istream& in);
void write_vertex_map(const std::filesystem::path& path, const VertexMap& map);
VertexMap read_vertex_map(const std::filesystem::path& path);

/// Whitespace-separated "source target" lines; `#` comments allowed.
std::vector<VertexPair> read_vertex_pairs(const std::filesystem::path& path);

/// One JSON object per generation.
std::string generation_to_json(const GenerationRecord& record);
GenerationRecord generation_from_json(const std::string& line);
void write_run_log(const std::filesystem::path& path, const std::vector<GenerationRecord>& log);
std::vector<GenerationRecord> read_run_log(const std::filesystem::path& path);

}  // namespace gencorr
