#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gencorr/commands.hpp"
#include "gencorr/config.hpp"

namespace {

std::string kebab(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

/// --config FILE plus one --kebab-key flag per RunConfig field.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key = value config file; flags override it")->check(CLI::ExistingFile);
    for (const std::string& key : gencorr::config_keys()) {
      if (key == "mesh_a" || key == "mesh_b") continue;  // positional arguments of `match`
      app->add_option("--" + kebab(key), values[key], "override " + key);
    }
  }

  gencorr::RunConfig resolve(CLI::App* app) const {
    gencorr::RunConfig config;
    if (!file.empty()) config = gencorr::read_config(file);
    for (const auto& [key, value] : values) {
      if (app->count("--" + kebab(key)) > 0) gencorr::set_config_value(config, key, value);
    }
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landmark correspondence and functional maps between two triangle meshes"};
  app.require_subcommand(1);

  gencorr::LandmarksCommand landmarks;
  ConfigFlags landmarks_flags;
  auto* lm = app.add_subcommand("landmarks", "detect landmarks and export JSON plus a colored PLY");
  lm->add_option("mesh", landmarks.mesh, "input mesh (.obj, .off, .ply)")->required();
  lm->add_option("-o,--out", landmarks.out_dir, "output directory")->required();
  landmarks_flags.attach(lm);

  gencorr::MatchCommand match;
  ConfigFlags match_flags;
  std::string mesh_a, mesh_b;
  auto* mt = app.add_subcommand("match", "run the genetic matching between two meshes");
  mt->add_option("mesh_a", mesh_a, "source mesh")->required();
  mt->add_option("mesh_b", mesh_b, "target mesh")->required();
  mt->add_option("-o,--out", match.out_dir, "output directory")->required();
  mt->add_flag("--log-full-population", match.log_full_population,
               "keep every generation's population in the run log (default: first and last only)");
  match_flags.attach(mt);

  gencorr::EvalCommand eval;
  std::string symmetric;
  auto* ev = app.add_subcommand("eval", "geodesic error curve of a vertex map against ground truth");
  ev->add_option("vertex_map", eval.vertex_map, "vertex map file (one target index per line)")->required();
  ev->add_option("ground_truth", eval.ground_truth, "ground truth 'source target' pairs")->required();
  ev->add_option("mesh_b", eval.mesh_b, "target mesh")->required();
  ev->add_option("--symmetric", symmetric, "symmetric ground truth; the smaller error is used per pair");
  ev->add_option("-o,--out", eval.out, "output CSV")->required();
  ev->add_option("--samples", eval.samples, "number of thresholds")->capture_default_str();
  ev->add_option("--max-threshold", eval.max_threshold, "largest threshold")->capture_default_str();

  gencorr::DiversityCommand diversity;
  ConfigFlags diversity_flags;
  std::string landmarks_b;
  auto* dv = app.add_subcommand("diversity", "pairwise chromosome distances of logged generations");
  dv->add_option("run_log", diversity.run_log, "run_log.jsonl written by match")->required();
  dv->add_option("mesh_b", diversity.mesh_b, "target mesh of the run")->required();
  dv->add_option("--landmarks", landmarks_b, "target landmark JSON (landmarks_b.json from match)");
  dv->add_option("--generation", diversity.generations, "generation to export (repeatable)");
  dv->add_option("-o,--out", diversity.out_dir, "output directory")->required();
  diversity_flags.attach(dv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? gencorr::kExitOk : gencorr::kExitUsage;
  }

  try {
    if (lm->parsed()) {
      landmarks.config = landmarks_flags.resolve(lm);
      return gencorr::cmd_landmarks(landmarks, std::cout, std::cerr);
    }
    if (mt->parsed()) {
      match.config = match_flags.resolve(mt);
      match.config.mesh_a = mesh_a;
      match.config.mesh_b = mesh_b;
      return gencorr::cmd_match(match, std::cout, std::cerr);
    }
    if (ev->parsed()) {
      if (!symmetric.empty()) eval.symmetric_ground_truth = symmetric;
      return gencorr::cmd_eval(eval, std::cout, std::cerr);
    }
    if (dv->parsed()) {
      diversity.config = diversity_flags.resolve(dv);
      if (!landmarks_b.empty()) diversity.landmarks_b = landmarks_b;
      return gencorr::cmd_diversity(diversity, std::cout, std::cerr);
    }
  } catch (const gencorr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gencorr::kExitUsage;
  }
  return gencorr::kExitUsage;
}
