#include "gencorr/pipeline.hpp"

#include <cstdlib>

#include "gencorr/geodesic.hpp"
#include "gencorr/spectral.hpp"

namespace gencorr {

std::unique_ptr<PreparedShape> prepare_shape(const TriMesh& mesh, const RunConfig& config,
                                             const std::optional<std::filesystem::path>& cache_dir,
                                             const std::optional<std::vector<Landmark>>& landmarks) {
  TriMesh normalized = normalize_area(mesh);
  SpectralBasis basis = eigenbasis_cached(normalized, config.k_t, cache_dir);
  LandmarkSet set = landmarks ? make_landmark_set(normalized, GeodesicGraph(normalized), *landmarks,
                                                  config.adjacency_radius)
                              : detect_landmarks(normalized, basis, config.landmark_params());
  WksTable table = wks(basis, config.wks_params());
  return std::make_unique<PreparedShape>(std::move(normalized), std::move(basis), std::move(set), std::move(table));
}

MatchSession::MatchSession(const PreparedShape& source, const PreparedShape& target, const RunConfig& config)
    : fitness_(source.data, target.data, config.fitness_params()),
      problem_(source.landmarks, target.landmarks,
               build_gene_bank(source.landmarks, target.landmarks, source.wks, target.wks, config.wks_threshold,
                               config.prominent_max_genes),
               fitness_, config.genetic_params()) {}

EvolutionResult MatchSession::run(std::uint64_t seed, bool record_population,
                                  const GenerationObserver& observer) const {
  Rng rng(seed);
  Population population = init_population(problem_, rng);
  return evolve(problem_, std::move(population), rng, record_population, observer);
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv("GENCORR_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

}  // namespace gencorr
