#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>

#include "gencorr/config.hpp"
#include "gencorr/fitness.hpp"
#include "gencorr/genetic.hpp"
#include "gencorr/landmarks.hpp"
#include "gencorr/mesh.hpp"
#include "gencorr/wks.hpp"

namespace gencorr {

/// An area-normalized mesh with its basis, landmarks and WKS.
struct PreparedShape {
  ShapeData data;
  LandmarkSet landmarks;
  WksTable wks;

  PreparedShape(TriMesh mesh, SpectralBasis basis, LandmarkSet landmarks, WksTable wks)
      : data(std::move(mesh), std::move(basis)), landmarks(std::move(landmarks)), wks(std::move(wks)) {}
};

/// Normalizes `mesh` to unit area, then computes the k_t basis, landmarks and
/// WKS. `landmarks`, when given, replaces detection.
std::unique_ptr<PreparedShape> prepare_shape(const TriMesh& mesh, const RunConfig& config,
                                             const std::optional<std::filesystem::path>& cache_dir = std::nullopt,
                                             const std::optional<std::vector<Landmark>>& landmarks = std::nullopt);

/// Fitness evaluator and GA problem for one ordered shape pair.
class MatchSession {
 public:
  MatchSession(const PreparedShape& source, const PreparedShape& target, const RunConfig& config);
  MatchSession(const MatchSession&) = delete;
  MatchSession& operator=(const MatchSession&) = delete;

  const FitnessEvaluator& fitness() const { return fitness_; }
  const MatchProblem& problem() const { return problem_; }

  EvolutionResult run(std::uint64_t seed, bool record_population = false,
                      const GenerationObserver& observer = {}) const;

 private:
  FitnessEvaluator fitness_;
  MatchProblem problem_;
};

/// Cache directory from GENCORR_CACHE_DIR, if set and non-empty.
std::optional<std::filesystem::path> cache_dir_from_env();

}  // namespace gencorr
