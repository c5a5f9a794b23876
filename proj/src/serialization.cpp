#include "gencorr/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace gencorr {

using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed ") + what + ": " + e.what());
  }
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed ") + what + ": " + e.what());
  } catch (const LandmarkError& e) {
    throw FormatError(std::string("malformed ") + what + ": " + e.what());
  }
}

json report_to_json(const FitnessReport& r) {
  return {{"membrane_12", r.membrane_12}, {"bending_12", r.bending_12},   {"membrane_21", r.membrane_21},
          {"bending_21", r.bending_21},   {"elastic_12", r.elastic_12},   {"elastic_21", r.elastic_21},
          {"reversibility", r.reversibility}, {"fitness", r.fitness}};
}

FitnessReport report_from_json(const json& j) {
  FitnessReport r;
  r.membrane_12 = j.at("membrane_12").get<double>();
  r.bending_12 = j.at("bending_12").get<double>();
  r.membrane_21 = j.at("membrane_21").get<double>();
  r.bending_21 = j.at("bending_21").get<double>();
  r.elastic_12 = j.at("elastic_12").get<double>();
  r.elastic_21 = j.at("elastic_21").get<double>();
  r.reversibility = j.at("reversibility").get<double>();
  r.fitness = j.at("fitness").get<double>();
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Landmarks

std::string landmarks_to_json(const LandmarkSet& set) {
  json lm = json::array();
  for (const Landmark& l : set.landmarks) {
    lm.push_back({{"vertex", l.vertex}, {"category", std::string(to_string(l.category))}});
  }
  json adj = json::array();
  for (int a = 0; a < set.size(); ++a) {
    for (int b : set.adjacency[a]) {
      if (a < b) adj.push_back({a, b});
    }
  }
  return json{{"landmarks", lm}, {"adjacency", adj}, {"min_separation", set.min_separation}}.dump(2) + "\n";
}

std::vector<Landmark> landmarks_from_json(const std::string& text) {
  const json j = parse(text, "landmark file");
  return guarded("landmark file", [&] {
    std::vector<Landmark> out;
    int rank = 0;
    for (const json& l : j.at("landmarks")) {
      Landmark lm;
      lm.vertex = l.at("vertex").get<int>();
      lm.category = category_from_string(l.at("category").get<std::string>());
      lm.salience_rank = rank++;
      out.push_back(lm);
    }
    return out;
  });
}

void write_landmarks(const std::filesystem::path& path, const LandmarkSet& set) { spit(path, landmarks_to_json(set)); }

std::vector<Landmark> read_landmarks(const std::filesystem::path& path) { return landmarks_from_json(slurp(path)); }

// ---------------------------------------------------------------------------
// Match

MatchRecord make_match_record(const MatchProblem& problem, const EvolutionResult& result) {
  MatchRecord r;
  r.genes = result.best.genes;
  for (int l1 = 0; l1 < static_cast<int>(r.genes.size()); ++l1) {
    const int l2 = r.genes[l1];
    if (l2 == kEmptyGene) continue;
    r.pairs.emplace_back(problem.source.landmarks[l1].vertex, problem.target.landmarks[l2].vertex);
    r.source_categories.push_back(problem.source.landmarks[l1].category);
    r.target_categories.push_back(problem.target.landmarks[l2].category);
  }
  r.report = result.maps.report;
  r.generations = result.generations;
  r.converged = result.converged;
  return r;
}

std::string match_to_json(const MatchRecord& r) {
  json pairs = json::array();
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    pairs.push_back({{"source", r.pairs[i].first},
                     {"target", r.pairs[i].second},
                     {"source_category", std::string(to_string(r.source_categories[i]))},
                     {"target_category", std::string(to_string(r.target_categories[i]))}});
  }
  const json j = {{"genes", r.genes},
                  {"pairs", pairs},
                  {"fitness", report_to_json(r.report)},
                  {"generations", r.generations},
                  {"converged", r.converged}};
  return j.dump(2) + "\n";
}

MatchRecord match_from_json(const std::string& text) {
  const json j = parse(text, "match file");
  return guarded("match file", [&] {
    MatchRecord r;
    r.genes = j.at("genes").get<std::vector<int>>();
    for (const json& p : j.at("pairs")) {
      r.pairs.emplace_back(p.at("source").get<int>(), p.at("target").get<int>());
      r.source_categories.push_back(category_from_string(p.at("source_category").get<std::string>()));
      r.target_categories.push_back(category_from_string(p.at("target_category").get<std::string>()));
    }
    r.report = report_from_json(j.at("fitness"));
    r.generations = j.at("generations").get<int>();
    r.converged = j.at("converged").get<bool>();
    return r;
  });
}

void write_match(const std::filesystem::path& path, const MatchRecord& record) { spit(path, match_to_json(record)); }

MatchRecord read_match(const std::filesystem::path& path) { return match_from_json(slurp(path)); }

// ---------------------------------------------------------------------------
// Functional and vertex maps

void write_fmap(std::ostream& out, const Eigen::MatrixXd& c) {
  out << c.rows() << " " << c.cols() << "\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) out << (j ? " " : "") << c(i, j);
    out << "\n";
  }
}

Eigen::MatrixXd read_fmap(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) throw FormatError("functional map: bad header");
  Eigen::MatrixXd c(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> c(i, j))) throw FormatError("functional map: truncated data");
    }
  }
  return c;
}

void write_fmap(const std::filesystem::path& path, const Eigen::MatrixXd& c) {
  std::ostringstream os;
  write_fmap(os, c);
  spit(path, os.str());
}

Eigen::MatrixXd read_fmap(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  return read_fmap(in);
}

void write_vertex_map(std::ostream& out, const VertexMap& map) {
  for (int v : map) out << v << "\n";
}

VertexMap read_vertex_map(std::istream& in) {
  VertexMap map;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      map.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw FormatError("vertex map: invalid entry '" + token + "'");
    }
  }
  return map;
}

void write_vertex_map(const std::filesystem::path& path, const VertexMap& map) {
  std::ostringstream os;
  write_vertex_map(os, map);
  spit(path, os.str());
}

VertexMap read_vertex_map(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  return read_vertex_map(in);
}

std::vector<VertexPair> read_vertex_pairs(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::vector<VertexPair> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int a, b;
    if (!(ls >> a)) continue;
    std::string rest;
    if (!(ls >> b) || (ls >> rest)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'source target'");
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Run log

std::string generation_to_json(const GenerationRecord& r) {
  json j = {{"generation", r.generation},
            {"best_fitness", r.best_fitness},
            {"mean_fitness", r.mean_fitness},
            {"population_size", r.population_size},
            {"best", r.best.genes}};
  if (!r.population.empty()) {
    json pop = json::array();
    for (const Chromosome& c : r.population) pop.push_back(c.genes);
    j["population"] = std::move(pop);
  }
  return j.dump();
}

GenerationRecord generation_from_json(const std::string& line) {
  const json j = parse(line, "run log");
  return guarded("run log", [&] {
    GenerationRecord r;
    r.generation = j.at("generation").get<int>();
    r.best_fitness = j.at("best_fitness").get<double>();
    r.mean_fitness = j.at("mean_fitness").get<double>();
    r.population_size = j.at("population_size").get<int>();
    r.best.genes = j.at("best").get<std::vector<int>>();
    if (j.contains("population")) {
      for (const json& c : j.at("population")) r.population.push_back(Chromosome{c.get<std::vector<int>>()});
    }
    return r;
  });
}

void write_run_log(const std::filesystem::path& path, const std::vector<GenerationRecord>& log) {
  std::ostringstream os;
  for (const GenerationRecord& r : log) os << generation_to_json(r) << "\n";
  spit(path, os.str());
}

std::vector<GenerationRecord> read_run_log(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::vector<GenerationRecord> log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    log.push_back(generation_from_json(line));
  }
  if (log.empty()) throw FormatError("run log " + path.string() + " has no generations");
  return log;
}

}  // namespace gencorr
