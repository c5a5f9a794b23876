#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "gencorr/genetic.hpp"
#include "gencorr/pipeline.hpp"

using namespace gencorr;

namespace {

/// Blob matched to an identical copy, with a small population for speed.
struct SelfMatch {
  RunConfig config;
  MatchSession session;

  static RunConfig small_config() {
    RunConfig c;
    c.population_size = 40;
    c.max_init_attempts = 400;
    c.max_generations = 12;
    return c;
  }

  SelfMatch() : config(small_config()), session(fixtures::blob_shape(), fixtures::blob_shape_copy(), config) {}

  const MatchProblem& problem() const { return session.problem(); }

  Chromosome identity() const {
    Chromosome c;
    c.genes.resize(static_cast<std::size_t>(problem().source_count()));
    for (int i = 0; i < problem().source_count(); ++i) c.genes[i] = i;
    return c;
  }
};

const SelfMatch& self_match() {
  static const SelfMatch s;
  return s;
}

std::vector<Chromosome> random_chromosomes(const MatchProblem& problem, Rng& rng, int count) {
  std::vector<Chromosome> out;
  while (static_cast<int>(out.size()) < count) {
    if (auto c = create_random_chromosome(problem, rng)) out.push_back(*std::move(c));
  }
  return out;
}

/// Three landmarks along a strip: 0 ~ 1 ~ 2, 0 and 2 not adjacent.
LandmarkSet strip_set(Category last) {
  static const TriMesh m = fixtures::grid(30, 2, 0.05);
  static const GeodesicGraph g(m);
  return make_landmark_set(m, g, {{31, Category::Max, 0}, {46, Category::Max, 1}, {61, last, 2}}, 0.3);
}

Member fake_member(int gene, double fitness) {
  Member m;
  m.chromosome.genes = {gene};
  m.report.fitness = fitness;
  return m;
}

}  // namespace

TEST_CASE("chromosome validity") {
  Chromosome c{{0, kEmptyGene, 2, 1}};
  CHECK(c.match_size() == 3);
  CHECK(c.is_valid(3));
  CHECK_FALSE(c.is_valid(2));
  CHECK(c.uses_target(2));
  CHECK_FALSE(c.uses_target(3));
  c.genes[1] = 0;
  CHECK_FALSE(c.is_valid(3));
}

TEST_CASE("gene banks need both directions below the threshold and equal categories") {
  const LandmarkSet s = strip_set(Category::Center);
  Eigen::Matrix3d w12, w21;
  w12 << 0.0, 0.1, 0.1,  //
      0.1, 0.0, 0.1,     //
      0.1, 0.1, 0.0;
  w21 = w12;
  w21(1, 0) = 0.5;  // 0 -> 1 fails from the target side only
  const GeneBank bank = build_gene_bank(s, s, w12, w21, 0.2, 4);
  CHECK(bank.candidates[0] == std::vector<int>{0});
  CHECK(bank.candidates[1] == std::vector<int>{0, 1});
  // Landmark 2 is a center: the max landmarks are never candidates.
  CHECK(bank.candidates[2] == std::vector<int>{2});
  CHECK(bank.prominent == std::vector<int>{0, 1, 2});

  // A bank larger than the prominent limit is kept but cannot seed.
  const GeneBank tight = build_gene_bank(s, s, w12, w12, 0.2, 1);
  CHECK(tight.candidates[1].size() == 2);
  CHECK(tight.prominent == std::vector<int>{2});

  CHECK_THROWS_AS(build_gene_bank(s, s, Eigen::MatrixXd::Zero(2, 3), w21, 0.2, 4), GeneticError);
}

TEST_CASE("no prominent landmark is an error") {
  const LandmarkSet a = strip_set(Category::Center);
  const LandmarkSet b = strip_set(Category::Min);
  // Every WKS distance is large.
  const Eigen::Matrix3d w = Eigen::Matrix3d::Constant(0.9);
  CHECK_THROWS_WITH_AS(build_gene_bank(a, b, w, w, 0.2, 4), doctest::Contains("cannot seed chromosomes"),
                       GeneticError);
}

TEST_CASE("adjacency preservation") {
  const LandmarkSet s = strip_set(Category::Max);
  CHECK(adjacency_preserving(0, 0, 1, 1, s, s));
  CHECK(adjacency_preserving(0, 1, 1, 2, s, s));
  CHECK_FALSE(adjacency_preserving(0, 0, 2, 2, s, s));
  CHECK_FALSE(adjacency_preserving(0, 0, 1, 2, s, s));
  CHECK_FALSE(adjacency_preserving(0, 1, 1, 1, s, s));  // a landmark is not adjacent to itself
  CHECK_FALSE(adjacency_preserving(0, kEmptyGene, 1, 1, s, s));
  CHECK_FALSE(adjacency_preserving(0, 0, 1, kEmptyGene, s, s));
}

TEST_CASE("self-match gene bank contains the twin") {
  const MatchProblem& p = self_match().problem();
  for (int i = 0; i < p.source_count(); ++i) {
    const auto& cands = p.bank.candidates[i];
    CHECK(std::find(cands.begin(), cands.end(), i) != cands.end());
  }
  CHECK_FALSE(p.bank.prominent.empty());
  CHECK(p.min_match() == (2 * p.max_match() + 2) / 3);
  CHECK(3 * p.min_match() >= 2 * p.max_match());
  CHECK(3 * (p.min_match() - 1) < 2 * p.max_match());
}

TEST_CASE("random chromosomes are valid and within bounds") {
  const MatchProblem& p = self_match().problem();
  Rng rng(5);
  int created = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = create_random_chromosome(p, rng);
    if (!c) continue;
    ++created;
    CHECK(static_cast<int>(c->genes.size()) == p.source_count());
    CHECK(c->is_valid(p.target_count()));
    CHECK(p.within_size_bounds(*c));
    for (int i = 0; i < p.source_count(); ++i) {
      if (c->genes[i] != kEmptyGene) CHECK(p.source.landmarks[i].category == p.target.landmarks[c->genes[i]].category);
    }
  }
  CHECK(created > 500);
}

TEST_CASE("population bookkeeping") {
  Population pop(2);
  CHECK(pop.insert(fake_member(0, 0.3), 1.0));
  CHECK_FALSE(pop.insert(fake_member(0, 0.1), 1.0));  // duplicate chromosome
  CHECK(pop.size() == 1);
  CHECK_FALSE(pop.insert(fake_member(1, 2.0), 1.0));  // above the admission threshold
  CHECK(pop.insert(fake_member(2, 0.2), 1.0));
  CHECK(pop.insert(fake_member(3, 0.2), 1.0));
  CHECK(pop.mean_fitness() == doctest::Approx(0.7 / 3.0));
  pop.truncate();
  REQUIRE(pop.size() == 2);
  // Equal fitness: the smaller gene array ranks first.
  CHECK(pop.fittest().chromosome.genes == std::vector<int>{2});
  CHECK(pop.members()[1].chromosome.genes == std::vector<int>{3});
  CHECK_FALSE(pop.contains(Chromosome{{0}}));
  CHECK(pop.insert(fake_member(0, 0.3), 1.0));
}

TEST_CASE("equal fitness prefers the larger match") {
  Population pop(1);
  pop.insert(Member{Chromosome{{kEmptyGene, 0}}, FitnessReport{}}, 1.0);
  pop.insert(Member{Chromosome{{1, 0}}, FitnessReport{}}, 1.0);
  CHECK(pop.fittest().chromosome.genes == std::vector<int>{1, 0});
  pop.truncate();
  CHECK(pop.members()[0].chromosome.genes == std::vector<int>{1, 0});
}

TEST_CASE("initialization without admissible chromosomes fails") {
  const SelfMatch& s = self_match();
  GeneticParams params = s.problem().params;
  params.admission_threshold = 0.0;
  params.max_init_attempts = 20;
  const MatchProblem strict(s.problem().source, s.problem().target, s.problem().bank, s.problem().fitness, params);
  Rng rng(1);
  CHECK_THROWS_WITH_AS(init_population(strict, rng), doctest::Contains("no admissible chromosomes"), GeneticError);
}

TEST_CASE("initialization fills the population with admissible members") {
  const MatchProblem& p = self_match().problem();
  Rng rng(2);
  const Population pop = init_population(p, rng);
  CHECK(pop.size() == p.params.population_size);
  for (const Member& m : pop.members()) {
    CHECK(m.report.fitness <= p.params.admission_threshold);
    CHECK(m.chromosome.is_valid(p.target_count()));
  }
}

TEST_CASE("roulette selection follows inverse fitness") {
  // Half of four members are drawn: one pair. Members 2 and 3 are nearly never picked first.
  Population pop(4);
  pop.insert(fake_member(0, 1.0), 1e9);
  pop.insert(fake_member(1, 2.0), 1e9);
  pop.insert(fake_member(2, 1e8), 1e9);
  pop.insert(fake_member(3, 1e8), 1e9);
  Rng rng(3);
  const int draws = 30000;
  int first_is_fitter = 0;
  for (int t = 0; t < draws; ++t) {
    const auto pairs = select_parents(pop, rng);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first != pairs[0].second);
    first_is_fitter += pairs[0].first == 0;
  }
  // Weights 1 and 1/2: the fitter member is drawn first with probability 2/3.
  CHECK(static_cast<double>(first_is_fitter) / draws == doctest::Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("roulette selection is uniform over equal fitness") {
  Population pop(10);
  for (int i = 0; i < 10; ++i) pop.insert(fake_member(i, 0.5), 10.0);
  Rng rng(4);
  const int draws = 100000;
  std::vector<int> counts(10, 0);
  for (int t = 0; t < draws; ++t) {
    const auto pairs = select_parents(pop, rng);
    REQUIRE(pairs.size() == 2);  // five drawn, the odd one dropped
    std::vector<int> seen;
    for (auto [a, b] : pairs) {
      seen.push_back(a);
      seen.push_back(b);
    }
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    ++counts[pairs[0].first];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += std::pow(c - draws / 10.0, 2) / (draws / 10.0);
  // 9 degrees of freedom; 27.9 is the 0.999 quantile.
  CHECK(chi2 < 27.9);
}

TEST_CASE("roulette selection tolerates zero fitness") {
  Population pop(4);
  pop.insert(fake_member(0, 0.0), 1.0);
  for (int i = 1; i < 4; ++i) pop.insert(fake_member(i, 0.5), 1.0);
  Rng rng(6);
  for (int t = 0; t < 100; ++t) CHECK(select_parents(pop, rng)[0].first == 0);
}

TEST_CASE("crossover of equal parents reproduces them") {
  const SelfMatch& s = self_match();
  const Chromosome id = s.identity();
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto [x, y] = crossover(id, id, s.problem(), rng);
    CHECK(x == id);
    CHECK(y == id);
  }
}

TEST_CASE("crossover children draw genes from their parents or the bank") {
  const MatchProblem& p = self_match().problem();
  Rng rng(8);
  const auto parents = random_chromosomes(p, rng, 60);
  for (std::size_t k = 0; k + 1 < parents.size(); k += 2) {
    const Chromosome& a = parents[k];
    const Chromosome& b = parents[k + 1];
    const auto [x, y] = crossover(a, b, p, rng);
    for (const Chromosome* child : {&x, &y}) {
      CHECK(child->is_valid(p.target_count()));
      CHECK(p.within_size_bounds(*child));
      for (int i = 0; i < p.source_count(); ++i) {
        const int g = child->genes[i];
        if (g == kEmptyGene) continue;
        const auto& bank = p.bank.candidates[i];
        const bool from_parent = g == a.genes[i] || g == b.genes[i];
        const bool from_bank = std::find(bank.begin(), bank.end(), g) != bank.end();
        CHECK((from_parent || from_bank));
      }
    }
  }
}

TEST_CASE("growth refills an emptied identity gene") {
  const SelfMatch& s = self_match();
  Chromosome c = s.identity();
  c.genes[3] = kEmptyGene;
  c.genes[20] = kEmptyGene;
  Rng rng(9);
  CHECK(mutate_growth(c, s.problem(), rng) == s.identity());
}

TEST_CASE("shrinkage never worsens fitness and respects the lower bound") {
  const MatchProblem& p = self_match().problem();
  Rng rng(10);
  for (const Chromosome& c : random_chromosomes(p, rng, 15)) {
    const Chromosome shrunk = mutate_shrinkage(c, p, rng);
    CHECK(p.fitness_of(shrunk).fitness <= p.fitness_of(c).fitness);
    CHECK(shrunk.match_size() >= p.min_match());
    CHECK(shrunk.match_size() >= c.match_size() - 1);
    CHECK(shrunk.is_valid(p.target_count()));
  }
}

TEST_CASE("guidance keeps the identity and repairs a swap") {
  const SelfMatch& s = self_match();
  Rng rng(11);
  const Chromosome id = s.identity();
  CHECK(mutate_fmap_guidance(id, s.problem(), rng) == id);

  // Swap two center genes: the functional map of the rest points them back.
  const auto& lms = s.problem().source.landmarks;
  std::vector<int> centers;
  for (int i = 0; i < s.problem().source_count(); ++i) {
    if (lms[i].category == Category::Center) centers.push_back(i);
  }
  REQUIRE(centers.size() >= 2);
  Chromosome swapped = id;
  std::swap(swapped.genes[centers.front()], swapped.genes[centers.back()]);
  CHECK(mutate_fmap_guidance(swapped, s.problem(), rng) == id);
}

TEST_CASE("mutations keep chromosomes valid") {
  const MatchProblem& p = self_match().problem();
  Rng rng(12);
  for (const Chromosome& c : random_chromosomes(p, rng, 20)) {
    for (const Chromosome& m :
         {mutate_growth(c, p, rng), mutate_shrinkage(c, p, rng), mutate_fmap_guidance(c, p, rng)}) {
      CHECK(m.is_valid(p.target_count()));
      CHECK(m.match_size() >= p.min_match());
      CHECK(m.match_size() <= p.max_match());
    }
  }
}

TEST_CASE("parallel evaluation agrees with sequential evaluation") {
  const SelfMatch& s = self_match();
  Rng rng(13);
  const auto cs = random_chromosomes(s.problem(), rng, 8);
  GeneticParams params = s.problem().params;
  params.threads = 3;
  const MatchProblem threaded(s.problem().source, s.problem().target, s.problem().bank, s.problem().fitness, params);
  const auto reports = evaluate_all(threaded, cs);
  REQUIRE(reports.size() == cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) CHECK(reports[i].fitness == s.problem().fitness_of(cs[i]).fitness);
}

TEST_CASE("evolution is elitist and deterministic") {
  const SelfMatch& s = self_match();
  const EvolutionResult a = s.session.run(21, true);
  const EvolutionResult b = s.session.run(21, true);
  REQUIRE(a.log.size() == b.log.size());
  REQUIRE_FALSE(a.log.empty());
  CHECK(a.log.front().generation == 0);
  for (std::size_t g = 0; g < a.log.size(); ++g) {
    CHECK(a.log[g].best == b.log[g].best);
    CHECK(a.log[g].best_fitness == b.log[g].best_fitness);
    CHECK(a.log[g].mean_fitness == b.log[g].mean_fitness);
    CHECK(a.log[g].population == b.log[g].population);
    CHECK(a.log[g].population_size <= s.config.population_size);
    if (g > 0) CHECK(a.log[g].best_fitness <= a.log[g - 1].best_fitness);
  }
  CHECK(a.best == a.log.back().best);
  CHECK(a.generations == a.log.back().generation);
  CHECK(a.maps.report.fitness == doctest::Approx(a.log.back().best_fitness));
  CHECK(a.maps.p12.size() == static_cast<std::size_t>(fixtures::blob().num_vertices()));
}

TEST_CASE("mean fitness does not rise over 20 generations") {
  const SelfMatch& s = self_match();
  GeneticParams params = s.problem().params;
  params.max_generations = 20;
  params.patience = 1000;
  const MatchProblem p(s.problem().source, s.problem().target, s.problem().bank, s.problem().fitness, params);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const EvolutionResult r = evolve(p, init_population(p, rng), rng);
    REQUIRE(r.log.size() == 21);
    CHECK(r.log.back().mean_fitness <= r.log.front().mean_fitness);
  }
}
