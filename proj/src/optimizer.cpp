#include "mtdsim/optimizer.hpp"

#include <algorithm>
#include <map>

#include "mtdsim/error.hpp"
#include "mtdsim/parallel.hpp"

namespace mtdsim {

void GaParams::validate() const {
  if (population_size < 2) throw Error("GA population size must be >= 2");
  if (max_generations < 1) throw Error("GA generation count must be >= 1");
  if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
      mutation_rate > 1.0)
    throw Error("GA rates must lie in [0,1]");
}

Topology random_topology(const Topology& topo, double p_rewire, Rng& rng) {
  if (topo.candidate_edges.empty())
    throw Error("random_topology requires a non-empty candidate edge set");
  if (p_rewire < 0.0 || p_rewire > 1.0) throw Error("p_rewire must lie in [0,1]");
  Genome g = topo.genome();
  for (auto& bit : g)
    if (rng.bernoulli(p_rewire)) bit ^= 1;
  return apply_genome(topo, g);
}

namespace {

struct Scored {
  RawTriple raw;
  double fitness = 0.0;  // per-generation normalized scalarization
};

std::vector<double> scalarize_over(const std::vector<RawTriple>& raws,
                                   const FitnessWeights& weights) {
  std::vector<double> n(raws.size()), m(raws.size()), c(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i) {
    n[i] = raws[i].n_ap_dt;
    m[i] = raws[i].e_mttsf;
    c[i] = raws[i].cost_term;
  }
  const auto nn = normalize(n);
  const auto mm = normalize(m);
  const auto cc = normalize(c);
  std::vector<double> out(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i)
    out[i] = scalarized_fitness(nn[i], mm[i], cc[i], weights);
  return out;
}

class FitnessCache {
 public:
  explicit FitnessCache(const CandidateEvaluator& evaluator, Rng rng)
      : evaluator_(evaluator), rng_(rng) {}

  // Evaluates all genomes, reusing cached triples; distinct new genomes are
  // evaluated in parallel with deterministic per-slot streams.
  std::vector<RawTriple> evaluate(const std::vector<Genome>& genomes) {
    std::vector<const Genome*> fresh;
    for (const auto& g : genomes)
      if (!cache_.count(g)) {
        cache_.emplace(g, RawTriple{});  // reserve slot; fill below
        fresh.push_back(&g);
      }
    std::vector<RawTriple> results(fresh.size());
    const uint64_t batch = batch_++;
    parallel_for(static_cast<int>(fresh.size()), [&](int i) {
      Rng r = rng_.child(hash_combine(batch, static_cast<uint64_t>(i)));
      results[i] = evaluator_(*fresh[i], r);
    });
    for (std::size_t i = 0; i < fresh.size(); ++i) cache_[*fresh[i]] = results[i];
    std::vector<RawTriple> out(genomes.size());
    for (std::size_t i = 0; i < genomes.size(); ++i) out[i] = cache_.at(genomes[i]);
    return out;
  }

 private:
  const CandidateEvaluator& evaluator_;
  Rng rng_;
  uint64_t batch_ = 0;
  std::map<Genome, RawTriple> cache_;
};

}  // namespace

std::pair<Topology, CandidateScore> ga_optimize(
    const Topology& base, const GaParams& params, const FitnessWeights& weights,
    const CandidateEvaluator& evaluator, Rng rng, const GaProgressFn& progress,
    const std::vector<Genome>* seed_population, std::vector<Genome>* final_population) {
  params.validate();
  weights.validate();
  const std::size_t len = base.candidate_edges.size();
  const int pop_size = params.population_size;

  Rng init_rng = rng.child(1);
  Rng op_rng = rng.child(2);
  FitnessCache cache(evaluator, rng.child(3));

  std::vector<Genome> pop;
  pop.reserve(pop_size);
  if (seed_population) {
    for (const auto& g : *seed_population) {
      if (g.size() != len) throw Error("seed population genome length mismatch");
      if (static_cast<int>(pop.size()) < pop_size) pop.push_back(g);
    }
  }
  while (static_cast<int>(pop.size()) < pop_size) {
    Genome g(len, 0);
    for (auto& bit : g) bit = init_rng.bernoulli(0.5) ? 1 : 0;
    pop.push_back(std::move(g));
  }

  const double per_bit =
      len > 0 ? std::min(1.0, params.mutation_rate / static_cast<double>(len)) : 0.0;

  std::vector<RawTriple> raws;
  for (int gen = 0; gen < params.max_generations; ++gen) {
    raws = cache.evaluate(pop);
    const auto fitness = scalarize_over(raws, weights);

    if (progress) {
      double best = 0.0, sum = 0.0;
      for (double f : fitness) {
        best = std::max(best, f);
        sum += f;
      }
      progress({gen, best, sum / fitness.size()});
    }

    int elite = 0;
    for (std::size_t i = 1; i < fitness.size(); ++i)
      if (fitness[i] > fitness[elite]) elite = static_cast<int>(i);

    auto tournament = [&]() -> const Genome& {
      const int a = static_cast<int>(op_rng.uniform_int(pop.size()));
      const int b = static_cast<int>(op_rng.uniform_int(pop.size()));
      return fitness[b] > fitness[a] ? pop[b] : pop[a];
    };

    std::vector<Genome> next;
    next.reserve(pop_size);
    next.push_back(pop[elite]);
    while (static_cast<int>(next.size()) < pop_size) {
      Genome c1 = tournament();
      Genome c2 = tournament();
      if (len >= 2 && op_rng.bernoulli(params.crossover_rate)) {
        const std::size_t cut = 1 + op_rng.uniform_int(len - 1);
        for (std::size_t i = cut; i < len; ++i) std::swap(c1[i], c2[i]);
      }
      for (auto& bit : c1)
        if (op_rng.bernoulli(per_bit)) bit ^= 1;
      for (auto& bit : c2)
        if (op_rng.bernoulli(per_bit)) bit ^= 1;
      next.push_back(std::move(c1));
      if (static_cast<int>(next.size()) < pop_size) next.push_back(std::move(c2));
    }
    pop = std::move(next);
  }

  raws = cache.evaluate(pop);
  const auto final_fitness = scalarize_over(raws, weights);
  int winner = 0;
  for (std::size_t i = 1; i < final_fitness.size(); ++i)
    if (final_fitness[i] > final_fitness[winner]) winner = static_cast<int>(i);

  if (final_population) *final_population = pop;

  CandidateScore score;
  score.genome = pop[winner];
  score.raw = raws[winner];
  score.scalarized = final_fitness[winner];
  return {apply_genome(base, score.genome), std::move(score)};
}

RawTriple evaluate_candidate(const Genome& genome, const Topology& base,
                             const Catalog& catalog, const AttackerProfile& attacker,
                             const DefenderProfile& defender, int eval_runs,
                             double horizon_hours, Rng rng) {
  const Topology candidate = apply_genome(base, genome);
  const Harm harm = build_harm(candidate);
  const auto paths = enumerate_paths(harm, candidate);
  RawTriple t;
  t.n_ap_dt = static_cast<double>(count_decoy_target_paths(paths));
  t.e_mttsf = estimate_expected_mttsf(candidate, catalog, attacker, defender, eval_runs,
                                      rng.child(1), horizon_hours);
  t.cost_term = static_cast<double>(base.candidate_edges.size()) -
                static_cast<double>(edge_diff(base, candidate));
  return t;
}

}  // namespace mtdsim
