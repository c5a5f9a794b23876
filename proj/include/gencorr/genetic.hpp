#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gencorr/fitness.hpp"
#include "gencorr/landmarks.hpp"
#include "gencorr/random.hpp"
#include "gencorr/wks.hpp"

namespace gencorr {

class GeneticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kEmptyGene = -1;

/// One target landmark index (or kEmptyGene) per source landmark.
struct Chromosome {
  std::vector<int> genes;

  int match_size() const;
  /// Injective on the non-empty genes, and every target below `target_count`.
  bool is_valid(int target_count) const;
  bool uses_target(int target) const;

  auto operator<=>(const Chromosome&) const = default;
};

struct GeneticParams {
  double wks_threshold = 0.2;  // eps_wks
  int prominent_max_genes = 4;
  int population_size = 400;
  double admission_threshold = 0.06;  // E_max
  int max_init_attempts = 8000;
  double crossover_rate = 0.75;
  double growth_rate = 0.05;
  double shrink_rate = 0.1;
  int shrink_count = 6;  // n_sh
  double guidance_rate = 0.05;
  int patience = 70;
  int max_generations = 300;
  double convergence_threshold = 0.06;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Per-source-landmark candidate targets, plus the prominent landmarks (banks
/// with between 1 and `prominent_max_genes` entries).
struct GeneBank {
  std::vector<std::vector<int>> candidates;
  std::vector<int> prominent;
};

/// G(l1) = { l2 in O(l1) : W(l1, l2) < eps and W(l2, l1) < eps }. `w12` is
/// m1 x m2 (row-normalized from the source side), `w21` is m2 x m1. Throws
/// GeneticError("cannot seed chromosomes") when no landmark is prominent.
GeneBank build_gene_bank(const LandmarkSet& source, const LandmarkSet& target, const Eigen::MatrixXd& w12,
                         const Eigen::MatrixXd& w21, double threshold, int prominent_max_genes);

GeneBank build_gene_bank(const LandmarkSet& source, const LandmarkSet& target, const WksTable& wks_1,
                         const WksTable& wks_2, double threshold, int prominent_max_genes);

/// Two non-empty genes (l1, l2), (r1, r2) preserve adjacency iff l1 ~ r1 on
/// M_1 and l2 ~ r2 on M_2. Landmarks are never adjacent to themselves.
bool adjacency_preserving(int l1, int l2, int r1, int r2, const LandmarkSet& source, const LandmarkSet& target);

/// Everything the operators need. The referenced objects must outlive it.
struct MatchProblem {
  const LandmarkSet& source;
  const LandmarkSet& target;
  GeneBank bank;
  std::vector<std::vector<int>> origins;
  const FitnessEvaluator& fitness;
  GeneticParams params;

  MatchProblem(const LandmarkSet& source, const LandmarkSet& target, GeneBank bank,
               const FitnessEvaluator& fitness, GeneticParams params);

  int source_count() const { return source.size(); }
  int target_count() const { return target.size(); }
  /// min(m1, m2).
  int max_match() const;
  /// ceil(2/3 max_match).
  int min_match() const;
  bool within_size_bounds(const Chromosome& c) const;

  std::vector<VertexPair> match(const Chromosome& c) const;
  FitnessReport fitness_of(const Chromosome& c) const;
  /// Target landmark nearest to the image of each source landmark under the
  /// unrefined map of `c`'s match; kEmptyGene for unmatched-by-map cases.
  std::vector<int> guided_targets(const Chromosome& c) const;
};

/// Random chromosome grown from a prominent seed through adjacency-preserving
/// genes, then trimmed to a random size in [m_min, m_max] by dropping random
/// center genes. std::nullopt when fewer than m_min genes could be matched.
std::optional<Chromosome> create_random_chromosome(const MatchProblem& problem, Rng& rng);

struct Member {
  Chromosome chromosome;
  FitnessReport report;
};

class Population {
 public:
  explicit Population(int capacity) : capacity_(capacity) {}

  /// Adds `m` unless it duplicates a member or exceeds `max_fitness`.
  bool insert(Member m, double max_fitness);
  /// Keeps the `capacity` fittest; ties go to the larger match, then the
  /// smaller gene array.
  void truncate();

  const std::vector<Member>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(const Chromosome& c) const { return index_.contains(c); }
  const Member& fittest() const;
  double mean_fitness() const;
  int capacity() const { return capacity_; }

 private:
  int capacity_;
  std::vector<Member> members_;
  std::set<Chromosome> index_;
};

/// Repeated create_random_chromosome until the population is full or the
/// attempt budget is spent. Throws GeneticError("no admissible chromosomes")
/// if nothing was admitted.
Population init_population(const MatchProblem& problem, Rng& rng);

/// Roulette selection without replacement, weights 1 / max(E, 1e-12), of
/// floor(|pop| / 2) members, paired consecutively. Returns member indices.
std::vector<std::pair<int, int>> select_parents(const Population& population, Rng& rng);

/// Geometric crossover of two parents; a child that ends up below m_min is
/// replaced by a copy of its parent. Falls back to copies when the parents
/// share no matched source landmark.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, const MatchProblem& problem,
                                            Rng& rng);

Chromosome mutate_growth(const Chromosome& c, const MatchProblem& problem, Rng& rng);
Chromosome mutate_shrinkage(const Chromosome& c, const MatchProblem& problem, Rng& rng);
Chromosome mutate_fmap_guidance(const Chromosome& c, const MatchProblem& problem, Rng& rng);

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int population_size = 0;
  Chromosome best;
  std::vector<Chromosome> population;  // filled only when requested
};

struct EvolutionResult {
  Chromosome best;
  MapPair maps;
  int generations = 0;
  bool converged = false;
  std::vector<GenerationRecord> log;
};

using GenerationObserver = std::function<void(const GenerationRecord&, const Population&)>;

/// Genetic loop: select, cross over, mutate, evaluate, insert, truncate. Stops
/// once the fittest chromosome has been unchanged for `patience` generations
/// with fitness at most `convergence_threshold`, or after `max_generations`.
EvolutionResult evolve(const MatchProblem& problem, Population population, Rng& rng, bool record_population = false,
                       const GenerationObserver& observer = {});

/// Fitness of every chromosome, evaluated on up to `threads` workers.
std::vector<FitnessReport> evaluate_all(const MatchProblem& problem, const std::vector<Chromosome>& chromosomes);

}  // namespace gencorr
