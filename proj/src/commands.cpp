#include "gencorr/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "gencorr/evaluation.hpp"
#include "gencorr/geodesic.hpp"
#include "gencorr/mesh_io.hpp"
#include "gencorr/pipeline.hpp"
#include "gencorr/serialization.hpp"

namespace gencorr {
namespace {

/// Bad input files or arguments; maps to kExitUsage.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

TriMesh load(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw IoError("mesh file not found: " + path.string());
  try {
    return load_mesh(path);
  } catch (const MeshError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

Eigen::RowVector3d category_color(Category c) {
  switch (c) {
    case Category::Max:
      return {0.0, 0.0, 1.0};
    case Category::Min:
      return {1.0, 0.0, 0.0};
    case Category::Center:
      return {0.0, 0.8, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

void write_landmark_ply(const std::filesystem::path& path, const TriMesh& mesh, const LandmarkSet& set) {
  Eigen::MatrixX3d colors = Eigen::MatrixX3d::Constant(mesh.num_vertices(), 3, 0.8);
  for (const Landmark& l : set.landmarks) {
    colors.row(l.vertex) = category_color(l.category);
    for (int v : mesh.neighbors()[l.vertex]) colors.row(v) = category_color(l.category);
  }
  write_ply(path, mesh, colors);
}

Eigen::MatrixX3d function_colors(const Eigen::VectorXd& f, double lo, double hi) {
  Eigen::MatrixX3d colors(f.size(), 3);
  const double span = hi > lo ? hi - lo : 1.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) colors.row(i) = diverging_color(std::clamp((f[i] - lo) / span, 0.0, 1.0));
  return colors;
}

/// Writes into a staging directory and moves the files into place only when
/// everything succeeded.
class Staging {
 public:
  explicit Staging(const std::filesystem::path& out_dir) : out_dir_(out_dir), dir_(out_dir / ".partial") {
    make_dir(out_dir_);
    std::filesystem::remove_all(dir_);
    make_dir(dir_);
  }
  ~Staging() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }

  std::filesystem::path operator/(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }

  void commit() {
    for (const std::string& name : names_) std::filesystem::rename(dir_ / name, out_dir_ / name);
  }

 private:
  std::filesystem::path out_dir_;
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

}  // namespace

int cmd_landmarks(const LandmarksCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cmd.config);
    const TriMesh mesh = load(cmd.mesh);
    validate(cmd.config, mesh.num_vertices(), mesh.num_vertices());
    const auto shape = prepare_shape(mesh, cmd.config, cache_dir_from_env());
    Staging stage(cmd.out_dir);
    write_landmarks(stage / "landmarks.json", shape->landmarks);
    write_landmark_ply(stage / "landmarks.ply", shape->data.mesh(), shape->landmarks);
    stage.commit();
    out << shape->landmarks.size() << " landmarks written to " << cmd.out_dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_match(const MatchCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig& config = cmd.config;
    validate(config);
    if (config.mesh_a.empty() || config.mesh_b.empty()) throw IoError("both meshes are required");
    const TriMesh mesh_a = load(config.mesh_a);
    const TriMesh mesh_b = load(config.mesh_b);
    validate(config, mesh_a.num_vertices(), mesh_b.num_vertices());

    const auto cache = cache_dir_from_env();
    const auto shape_a = prepare_shape(mesh_a, config, cache);
    const auto shape_b = prepare_shape(mesh_b, config, cache);
    const MatchSession session(*shape_a, *shape_b, config);
    EvolutionResult result = session.run(config.seed, true);

    if (!cmd.log_full_population) {
      for (std::size_t g = 1; g + 1 < result.log.size(); ++g) result.log[g].population.clear();
    }

    Staging stage(cmd.out_dir);
    write_config(stage / "config.txt", config);
    write_landmarks(stage / "landmarks_a.json", shape_a->landmarks);
    write_landmarks(stage / "landmarks_b.json", shape_b->landmarks);
    write_match(stage / "match.json", make_match_record(session.problem(), result));
    write_fmap(stage / "C12.txt", result.maps.c12);
    write_fmap(stage / "C21.txt", result.maps.c21);
    write_vertex_map(stage / "P12.txt", result.maps.p12);
    write_vertex_map(stage / "P21.txt", result.maps.p21);
    write_run_log(stage / "run_log.jsonl", result.log);

    // Height on the target, pulled back to the source through C12.
    const SpectralBasis& ba = shape_a->data.basis();
    const SpectralBasis& bb = shape_b->data.basis();
    const Eigen::VectorXd f_b = shape_b->data.mesh().vertices().col(2);
    const Eigen::VectorXd f_a = ba.phi(config.k_t) * (result.maps.c12 * (bb.phi_pinv(config.k_s) * f_b));
    const double lo = f_b.minCoeff();
    const double hi = f_b.maxCoeff();
    write_ply(stage / "transfer_target.ply", shape_b->data.mesh(), function_colors(f_b, lo, hi));
    write_ply(stage / "transfer_source.ply", shape_a->data.mesh(), function_colors(f_a, lo, hi));
    stage.commit();

    out << "matched " << result.maps.p12.size() << " vertices; " << std::count_if(result.best.genes.begin(),
                                                                                 result.best.genes.end(),
                                                                                 [](int g) { return g != kEmptyGene; })
        << " landmark pairs; fitness " << result.maps.report.fitness << " after " << result.generations
        << " generations" << (result.converged ? " (converged)" : "") << "\n";
    return kExitOk;
  });
}

int cmd_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cmd.samples < 2 || !(cmd.max_threshold > 0.0)) throw IoError("need at least 2 samples and a positive range");
    const TriMesh mesh_b = normalize_area(load(cmd.mesh_b));
    const VertexMap map = read_vertex_map(cmd.vertex_map);
    const auto gt = read_vertex_pairs(cmd.ground_truth);
    std::optional<std::vector<VertexPair>> sym;
    if (cmd.symmetric_ground_truth) sym = read_vertex_pairs(*cmd.symmetric_ground_truth);
    std::vector<double> errors;
    try {
      errors = correspondence_errors(map, gt, sym, mesh_b);
    } catch (const EvaluationError& e) {
      throw IoError(e.what());
    }
    const ErrorCurve curve = error_curve(errors, cmd.samples, cmd.max_threshold);

    std::ostringstream csv;
    csv << "threshold,fraction\n" << std::setprecision(10);
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
      csv << curve.thresholds[i] << "," << curve.fractions[i] << "\n";
    }
    if (cmd.out.has_parent_path()) make_dir(cmd.out.parent_path());
    std::ofstream file(cmd.out);
    if (!(file << csv.str())) throw IoError("cannot write " + cmd.out.string());

    double mean = 0.0;
    for (double e : errors) mean += e;
    if (!errors.empty()) mean /= static_cast<double>(errors.size());
    out << errors.size() << " correspondences, mean geodesic error " << mean << "\n";
    return kExitOk;
  });
}

int cmd_diversity(const DiversityCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto log = read_run_log(cmd.run_log);
    const TriMesh mesh_b = load(cmd.mesh_b);
    std::optional<std::vector<Landmark>> landmarks;
    if (cmd.landmarks_b) landmarks = read_landmarks(*cmd.landmarks_b);
    const auto shape = prepare_shape(mesh_b, cmd.config, cache_dir_from_env(), landmarks);
    const Eigen::MatrixXd& geodesics = shape->landmarks.geodesics;

    std::vector<const GenerationRecord*> selected;
    if (cmd.generations.empty()) {
      std::vector<const GenerationRecord*> with_population;
      for (const auto& r : log) {
        if (!r.population.empty()) with_population.push_back(&r);
      }
      if (with_population.empty()) throw FormatError("run log has no recorded populations");
      selected.push_back(with_population.front());
      if (with_population.size() > 1) selected.push_back(with_population.back());
    } else {
      for (int g : cmd.generations) {
        auto it = std::find_if(log.begin(), log.end(), [g](const GenerationRecord& r) { return r.generation == g; });
        if (it == log.end() || it->population.empty()) {
          throw FormatError("run log has no population for generation " + std::to_string(g));
        }
        selected.push_back(&*it);
      }
    }

    Staging stage(cmd.out_dir);
    std::ostringstream summary;
    summary << "generation,population_size,mean_distance\n" << std::setprecision(10);
    for (const GenerationRecord* r : selected) {
      for (const Chromosome& c : r->population) {
        if (c.genes.size() != r->best.genes.size()) throw FormatError("chromosome lengths differ in the run log");
        for (int g : c.genes) {
          if (g != kEmptyGene && (g < 0 || g >= geodesics.rows())) {
            throw FormatError("chromosome gene " + std::to_string(g) + " exceeds the target landmark count");
          }
        }
      }
      const Eigen::MatrixXd d = chromosome_distance_matrix(r->population, geodesics);
      const std::string name = "diversity_gen" + std::to_string(r->generation) + ".csv";
      std::ofstream file(stage / name);
      file << std::setprecision(10);
      for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.cols(); ++j) file << (j ? "," : "") << d(i, j);
        file << "\n";
      }
      if (!file) throw IoError("cannot write " + name);
      const double mean = mean_pairwise_distance(d);
      summary << r->generation << "," << d.rows() << "," << mean << "\n";
      out << "generation " << r->generation << ": " << d.rows() << " chromosomes, mean distance " << mean << "\n";
    }
    std::ofstream(stage / "diversity_summary.csv") << summary.str();
    stage.commit();
    return kExitOk;
  });
}

}  // namespace gencorr
