#include "gencorr/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

namespace gencorr {

// ---------------------------------------------------------------------------
// Chromosome

int Chromosome::match_size() const {
  return static_cast<int>(std::count_if(genes.begin(), genes.end(), [](int g) { return g != kEmptyGene; }));
}

bool Chromosome::is_valid(int target_count) const {
  std::vector<char> seen(static_cast<std::size_t>(std::max(target_count, 0)), 0);
  for (int g : genes) {
    if (g == kEmptyGene) continue;
    if (g < 0 || g >= target_count || seen[g]) return false;
    seen[g] = 1;
  }
  return true;
}

bool Chromosome::uses_target(int target) const { return std::find(genes.begin(), genes.end(), target) != genes.end(); }

// ---------------------------------------------------------------------------
// Gene bank

GeneBank build_gene_bank(const LandmarkSet& source, const LandmarkSet& target, const Eigen::MatrixXd& w12,
                         const Eigen::MatrixXd& w21, double threshold, int prominent_max_genes) {
  const int m1 = source.size();
  const int m2 = target.size();
  if (w12.rows() != m1 || w12.cols() != m2 || w21.rows() != m2 || w21.cols() != m1) {
    throw GeneticError("build_gene_bank: WKS distance matrices have wrong shape");
  }
  GeneBank bank;
  bank.candidates.resize(m1);
  for (int l1 = 0; l1 < m1; ++l1) {
    for (int l2 = 0; l2 < m2; ++l2) {
      if (source.landmarks[l1].category != target.landmarks[l2].category) continue;
      if (w12(l1, l2) < threshold && w21(l2, l1) < threshold) bank.candidates[l1].push_back(l2);
    }
    const auto size = static_cast<int>(bank.candidates[l1].size());
    if (size >= 1 && size <= prominent_max_genes) bank.prominent.push_back(l1);
  }
  if (bank.prominent.empty()) {
    throw GeneticError("cannot seed chromosomes: no source landmark has a gene bank of 1.." +
                       std::to_string(prominent_max_genes) + " genes");
  }
  return bank;
}

GeneBank build_gene_bank(const LandmarkSet& source, const LandmarkSet& target, const WksTable& wks_1,
                         const WksTable& wks_2, double threshold, int prominent_max_genes) {
  std::vector<int> v1, v2;
  for (const auto& l : source.landmarks) v1.push_back(l.vertex);
  for (const auto& l : target.landmarks) v2.push_back(l.vertex);
  return build_gene_bank(source, target, wks_distance_matrix(wks_1, v1, wks_2, v2),
                         wks_distance_matrix(wks_2, v2, wks_1, v1), threshold, prominent_max_genes);
}

bool adjacency_preserving(int l1, int l2, int r1, int r2, const LandmarkSet& source, const LandmarkSet& target) {
  if (l2 == kEmptyGene || r2 == kEmptyGene) return false;
  return source.adjacent(l1, r1) && target.adjacent(l2, r2);
}

// ---------------------------------------------------------------------------
// MatchProblem

MatchProblem::MatchProblem(const LandmarkSet& source_set, const LandmarkSet& target_set, GeneBank gene_bank,
                           const FitnessEvaluator& evaluator, GeneticParams genetic_params)
    : source(source_set),
      target(target_set),
      bank(std::move(gene_bank)),
      origins(landmark_origins(source_set, target_set)),
      fitness(evaluator),
      params(genetic_params) {}

int MatchProblem::max_match() const { return std::min(source_count(), target_count()); }

int MatchProblem::min_match() const { return (2 * max_match() + 2) / 3; }

bool MatchProblem::within_size_bounds(const Chromosome& c) const {
  const int size = c.match_size();
  return size >= min_match() && size <= max_match();
}

std::vector<VertexPair> MatchProblem::match(const Chromosome& c) const {
  std::vector<VertexPair> pairs;
  for (int l1 = 0; l1 < static_cast<int>(c.genes.size()); ++l1) {
    const int l2 = c.genes[l1];
    if (l2 != kEmptyGene) pairs.emplace_back(source.landmarks[l1].vertex, target.landmarks[l2].vertex);
  }
  return pairs;
}

FitnessReport MatchProblem::fitness_of(const Chromosome& c) const { return fitness.evaluate(match(c)); }

std::vector<int> MatchProblem::guided_targets(const Chromosome& c) const {
  const VertexMap p12 = fitness.guidance_map(match(c));
  std::vector<int> out(static_cast<std::size_t>(source_count()));
  for (int l1 = 0; l1 < source_count(); ++l1) {
    out[l1] = target.nearest_landmark(p12[source.landmarks[l1].vertex]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chromosome construction helpers

namespace {

/// Closest adjacent pair (l in matched, r unprocessed, r in A(l)); ties go to
/// the lexicographically smallest (l, r). Returns {-1, -1} when none exists.
std::pair<int, int> closest_matched_unmatched(const LandmarkSet& source, const std::vector<int>& matched,
                                              const std::vector<char>& unprocessed) {
  std::pair<int, int> best{-1, -1};
  double best_d = std::numeric_limits<double>::infinity();
  for (int l : matched) {
    for (int r : source.adjacency[l]) {
      if (!unprocessed[r]) continue;
      const double d = source.geodesics(l, r);
      if (d < best_d || (d == best_d && std::make_pair(l, r) < best)) {
        best_d = d;
        best = {l, r};
      }
    }
  }
  return best;
}

/// First candidate target for `r` that is adjacency preserving with the gene
/// at `anchor` and keeps `c` injective.
int pick_gene(const Chromosome& c, const std::vector<char>& used, int anchor, int r,
              const std::vector<int>& candidates, const MatchProblem& problem) {
  const int anchor_target = c.genes[anchor];
  for (int l2 : candidates) {
    if (l2 == kEmptyGene || used[l2]) continue;
    if (adjacency_preserving(anchor, anchor_target, r, l2, problem.source, problem.target)) return l2;
  }
  return kEmptyGene;
}

std::vector<int> shuffled(std::vector<int> v, Rng& rng) {
  rng.shuffle(v);
  return v;
}

struct Builder {
  Chromosome c;
  std::vector<char> used;         // target landmarks taken
  std::vector<char> unprocessed;  // source landmarks not yet assigned
  std::vector<int> matched;

  Builder(int m1, int m2) : used(m2, 0), unprocessed(m1, 1) { c.genes.assign(m1, kEmptyGene); }

  void assign(int l1, int l2) {
    c.genes[l1] = l2;
    unprocessed[l1] = 0;
    if (l2 != kEmptyGene) {
      used[l2] = 1;
      matched.push_back(l1);
    }
  }
};

}  // namespace

std::optional<Chromosome> create_random_chromosome(const MatchProblem& problem, Rng& rng) {
  const int m1 = problem.source_count();
  const int m2 = problem.target_count();
  const GeneBank& bank = problem.bank;
  if (bank.prominent.empty()) throw GeneticError("cannot seed chromosomes: no prominent landmark");

  Builder b(m1, m2);
  const int seed = bank.prominent[rng.index(bank.prominent.size())];
  const auto& seed_bank = bank.candidates[seed];
  b.assign(seed, seed_bank[rng.index(seed_bank.size())]);

  while (true) {
    const auto [anchor, r] = closest_matched_unmatched(problem.source, b.matched, b.unprocessed);
    if (r < 0) break;
    int g = pick_gene(b.c, b.used, anchor, r, shuffled(bank.candidates[r], rng), problem);
    if (g == kEmptyGene) g = pick_gene(b.c, b.used, anchor, r, shuffled(problem.origins[r], rng), problem);
    b.assign(r, g);
  }

  int size = b.c.match_size();
  if (size < problem.min_match()) return std::nullopt;

  const int lo = problem.min_match();
  const int hi = problem.max_match();
  const int wanted = lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
  while (size > wanted) {
    std::vector<int> centers;
    for (int l1 = 0; l1 < m1; ++l1) {
      if (b.c.genes[l1] != kEmptyGene && problem.source.landmarks[l1].category == Category::Center) {
        centers.push_back(l1);
      }
    }
    if (centers.empty()) break;
    b.c.genes[centers[rng.index(centers.size())]] = kEmptyGene;
    --size;
  }
  return b.c;
}

// ---------------------------------------------------------------------------
// Population

namespace {

/// Lower fitness first. Different matches often refine to the same map and tie
/// exactly; the larger match then wins, then the smaller gene array.
bool fitter(const Member& a, const Member& b) {
  if (a.report.fitness != b.report.fitness) return a.report.fitness < b.report.fitness;
  const int sa = a.chromosome.match_size();
  const int sb = b.chromosome.match_size();
  if (sa != sb) return sa > sb;
  return a.chromosome < b.chromosome;
}

}  // namespace

bool Population::insert(Member m, double max_fitness) {
  if (!(m.report.fitness <= max_fitness) || index_.contains(m.chromosome)) return false;
  index_.insert(m.chromosome);
  members_.push_back(std::move(m));
  return true;
}

void Population::truncate() {
  std::stable_sort(members_.begin(), members_.end(), fitter);
  while (static_cast<int>(members_.size()) > capacity_) {
    index_.erase(members_.back().chromosome);
    members_.pop_back();
  }
}

const Member& Population::fittest() const {
  if (members_.empty()) throw GeneticError("empty population has no fittest member");
  return *std::min_element(members_.begin(), members_.end(), fitter);
}

double Population::mean_fitness() const {
  if (members_.empty()) return 0.0;
  double sum = 0.0;
  for (const Member& m : members_) sum += m.report.fitness;
  return sum / static_cast<double>(members_.size());
}

std::vector<FitnessReport> evaluate_all(const MatchProblem& problem, const std::vector<Chromosome>& chromosomes) {
  std::vector<FitnessReport> out(chromosomes.size());
  unsigned threads = problem.params.threads ? problem.params.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chromosomes.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < chromosomes.size(); ++i) out[i] = problem.fitness_of(chromosomes[i]);
    return out;
  }
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < chromosomes.size(); i += threads) out[i] = problem.fitness_of(chromosomes[i]);
    }));
  }
  for (auto& w : workers) w.get();
  return out;
}

Population init_population(const MatchProblem& problem, Rng& rng) {
  const GeneticParams& p = problem.params;
  Population pop(p.population_size);
  for (int attempt = 0; attempt < p.max_init_attempts && pop.size() < p.population_size; ++attempt) {
    std::optional<Chromosome> c = create_random_chromosome(problem, rng);
    if (!c || pop.contains(*c)) continue;
    pop.insert(Member{*c, problem.fitness_of(*c)}, p.admission_threshold);
  }
  if (pop.empty()) {
    throw GeneticError("no admissible chromosomes after " + std::to_string(p.max_init_attempts) + " attempts");
  }
  return pop;
}

// ---------------------------------------------------------------------------
// Selection and crossover

std::vector<std::pair<int, int>> select_parents(const Population& population, Rng& rng) {
  const auto& members = population.members();
  const int count = population.size() / 2;
  std::vector<int> pool(members.size());
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<double> weight(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    weight[i] = 1.0 / std::max(members[i].report.fitness, 1e-12);
  }

  std::vector<int> drawn;
  drawn.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    double total = 0.0;
    for (int i : pool) total += weight[i];
    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = pool.size() - 1;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      acc += weight[pool[j]];
      if (u < acc) {
        pick = j;
        break;
      }
    }
    drawn.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t k = 0; k + 1 < drawn.size(); k += 2) pairs.emplace_back(drawn[k], drawn[k + 1]);
  return pairs;
}

namespace {

Chromosome grow_child(const Chromosome& parent, const Chromosome& a, const Chromosome& b, int seed,
                      const MatchProblem& problem, Rng& rng) {
  const int m1 = problem.source_count();
  Builder child(m1, problem.target_count());
  child.assign(seed, parent.genes[seed]);
  int remaining = m1 - 1;

  while (remaining > 0) {
    const auto [anchor, r] = closest_matched_unmatched(problem.source, child.matched, child.unprocessed);
    int l1 = r;
    int g = kEmptyGene;
    if (r >= 0) {
      std::vector<int> from_parents;
      for (int cand : {a.genes[r], b.genes[r]}) {
        if (cand != kEmptyGene && std::find(from_parents.begin(), from_parents.end(), cand) == from_parents.end()) {
          from_parents.push_back(cand);
        }
      }
      g = pick_gene(child.c, child.used, anchor, r, from_parents, problem);
      if (g == kEmptyGene) g = pick_gene(child.c, child.used, anchor, r, shuffled(problem.bank.candidates[r], rng), problem);
    } else {
      // No adjacent landmark left: take any parent gene that keeps the child valid.
      std::vector<int> options;
      for (int l = 0; l < m1; ++l) {
        const int t = parent.genes[l];
        if (t != kEmptyGene && child.unprocessed[l] && !child.used[t]) options.push_back(l);
      }
      if (options.empty()) break;
      l1 = options[rng.index(options.size())];
      g = parent.genes[l1];
    }
    child.assign(l1, g);
    --remaining;
  }
  return child.c;
}

}  // namespace

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, const MatchProblem& problem,
                                            Rng& rng) {
  std::vector<int> shared;
  for (int l = 0; l < problem.source_count(); ++l) {
    if (a.genes[l] != kEmptyGene && b.genes[l] != kEmptyGene) shared.push_back(l);
  }
  if (shared.empty()) return {a, b};
  const int seed = shared[rng.index(shared.size())];

  Chromosome child_a = grow_child(a, a, b, seed, problem, rng);
  Chromosome child_b = grow_child(b, a, b, seed, problem, rng);
  if (!problem.within_size_bounds(child_a)) child_a = a;
  if (!problem.within_size_bounds(child_b)) child_b = b;
  return {std::move(child_a), std::move(child_b)};
}

// ---------------------------------------------------------------------------
// Mutations

Chromosome mutate_growth(const Chromosome& c, const MatchProblem& problem, Rng& rng) {
  std::vector<int> empties;
  for (int l = 0; l < problem.source_count(); ++l) {
    if (c.genes[l] == kEmptyGene) empties.push_back(l);
  }
  if (empties.empty()) return c;
  rng.shuffle(empties);

  const std::vector<int> guided = problem.guided_targets(c);
  Chromosome out = c;
  std::vector<char> used(problem.target_count(), 0);
  for (int g : out.genes) {
    if (g != kEmptyGene) used[g] = 1;
  }
  for (int l1 : empties) {
    int l2 = guided[l1];
    if (used[l2]) {
      const auto& bank = problem.bank.candidates[l1];
      l2 = bank.empty() ? kEmptyGene : bank[rng.index(bank.size())];
      if (l2 != kEmptyGene && used[l2]) l2 = kEmptyGene;
    }
    if (l2 == kEmptyGene) continue;
    out.genes[l1] = l2;
    used[l2] = 1;
  }
  return out;
}

Chromosome mutate_shrinkage(const Chromosome& c, const MatchProblem& problem, Rng& rng) {
  std::vector<int> centers;
  for (int l = 0; l < problem.source_count(); ++l) {
    if (c.genes[l] != kEmptyGene && problem.source.landmarks[l].category == Category::Center) centers.push_back(l);
  }
  if (centers.empty()) return c;
  rng.shuffle(centers);
  centers.resize(std::min<std::size_t>(centers.size(), static_cast<std::size_t>(problem.params.shrink_count)));

  std::vector<Chromosome> variants;
  for (int l : centers) {
    Chromosome v = c;
    v.genes[l] = kEmptyGene;
    if (v.match_size() >= problem.min_match()) variants.push_back(std::move(v));
  }
  if (variants.empty()) return c;

  Chromosome best = c;
  double best_fit = problem.fitness_of(c).fitness;
  const std::vector<FitnessReport> reports = evaluate_all(problem, variants);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (reports[i].fitness < best_fit) {
      best_fit = reports[i].fitness;
      best = variants[i];
    }
  }
  return best;
}

Chromosome mutate_fmap_guidance(const Chromosome& c, const MatchProblem& problem, Rng& rng) {
  if (c.match_size() == 0) return c;
  const std::vector<int> guided = problem.guided_targets(c);
  const auto is_center = [&](int l) { return problem.source.landmarks[l].category == Category::Center; };

  Chromosome out;
  out.genes.assign(c.genes.size(), kEmptyGene);
  std::vector<int> owner(static_cast<std::size_t>(problem.target_count()), -1);
  for (int l1 = 0; l1 < problem.source_count(); ++l1) {
    if (c.genes[l1] == kEmptyGene) continue;
    const int l2 = guided[l1];
    const int j = owner[l2];
    if (j < 0) {
      owner[l2] = l1;
      out.genes[l1] = l2;
      continue;
    }
    // Collision between the current owner j and l1: centers yield to extrema,
    // otherwise a coin flip decides.
    bool keep_new;
    if (is_center(l1) != is_center(j)) {
      keep_new = is_center(j);
    } else {
      keep_new = rng.bernoulli(0.5);
    }
    if (keep_new) {
      out.genes[j] = kEmptyGene;
      out.genes[l1] = l2;
      owner[l2] = l1;
    }
  }
  if (out.match_size() < problem.min_match()) return c;
  return out;
}

// ---------------------------------------------------------------------------
// Evolution

EvolutionResult evolve(const MatchProblem& problem, Population population, Rng& rng, bool record_population,
                       const GenerationObserver& observer) {
  const GeneticParams& p = problem.params;
  EvolutionResult result;

  auto record = [&](int generation) {
    GenerationRecord rec;
    rec.generation = generation;
    const Member& best = population.fittest();
    rec.best_fitness = best.report.fitness;
    rec.mean_fitness = population.mean_fitness();
    rec.population_size = population.size();
    rec.best = best.chromosome;
    if (record_population) {
      for (const Member& m : population.members()) rec.population.push_back(m.chromosome);
    }
    if (observer) observer(rec, population);
    result.log.push_back(std::move(rec));
  };

  population.truncate();
  record(0);
  Chromosome best = population.fittest().chromosome;
  int unchanged = 0;

  for (int generation = 1; generation <= p.max_generations; ++generation) {
    const auto pairs = select_parents(population, rng);
    std::vector<Chromosome> offspring;
    offspring.reserve(pairs.size() * 2);
    for (const auto& [ia, ib] : pairs) {
      const Chromosome& a = population.members()[ia].chromosome;
      const Chromosome& b = population.members()[ib].chromosome;
      auto children = rng.bernoulli(p.crossover_rate) ? crossover(a, b, problem, rng) : std::make_pair(a, b);
      for (Chromosome* child : {&children.first, &children.second}) {
        if (rng.bernoulli(p.growth_rate)) *child = mutate_growth(*child, problem, rng);
        if (rng.bernoulli(p.shrink_rate)) *child = mutate_shrinkage(*child, problem, rng);
        if (rng.bernoulli(p.guidance_rate)) *child = mutate_fmap_guidance(*child, problem, rng);
        offspring.push_back(std::move(*child));
      }
    }

    std::vector<Chromosome> fresh;
    for (Chromosome& c : offspring) {
      if (population.contains(c)) continue;
      if (std::find(fresh.begin(), fresh.end(), c) != fresh.end()) continue;
      fresh.push_back(std::move(c));
    }
    const std::vector<FitnessReport> reports = evaluate_all(problem, fresh);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      population.insert(Member{std::move(fresh[i]), reports[i]}, p.admission_threshold);
    }
    population.truncate();
    record(generation);
    result.generations = generation;

    const Member& fittest = population.fittest();
    if (fittest.chromosome == best) {
      ++unchanged;
    } else {
      best = fittest.chromosome;
      unchanged = 0;
    }
    if (unchanged >= p.patience && fittest.report.fitness <= p.convergence_threshold) {
      result.converged = true;
      break;
    }
  }

  result.best = best;
  result.maps = problem.fitness.compute(problem.match(best));
  return result;
}

}  // namespace gencorr
