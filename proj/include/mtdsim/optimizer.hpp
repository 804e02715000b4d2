#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mtdsim/attacker.hpp"
#include "mtdsim/metrics.hpp"
#include "mtdsim/net.hpp"
#include "mtdsim/rng.hpp"

namespace mtdsim {

struct GaParams {
  int population_size = 100;
  int max_generations = 100;
  double crossover_rate = 0.8;  // r_c, per parent pair
  double mutation_rate = 0.2;   // r_m, expected flipped bits per genome

  void validate() const;
};

// Raw objective triple for one candidate topology. cost_term is the number
// of potential edge changes avoided (total candidates minus the diff from
// the currently deployed topology), so all three are maximized.
struct RawTriple {
  double n_ap_dt = 0.0;
  double e_mttsf = 0.0;
  double cost_term = 0.0;

  bool operator==(const RawTriple&) const = default;
};

struct CandidateScore {
  Genome genome;
  RawTriple raw;
  double scalarized = 0.0;  // after final-population normalization
};

using CandidateEvaluator = std::function<RawTriple(const Genome&, Rng&)>;

struct GaProgress {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
};
using GaProgressFn = std::function<void(const GaProgress&)>;

// Independently resamples each candidate edge: with probability p_rewire
// the presence bit flips, otherwise it is kept.
Topology random_topology(const Topology& topo, double p_rewire, Rng& rng);

// Genetic search over candidate-edge genomes. Tournament selection (size 2),
// single-point crossover at rate r_c, independent per-bit mutation with
// probability r_m / genome_length, elitism of one. Selection inside a
// generation normalizes each metric over that generation's population; the
// returned winner is the argmax of the scalarized fitness after normalizing
// over the final population (lowest index wins ties). Evaluations are
// cached by genome, so the stochastic evaluator is sampled once per
// distinct genome and comparisons stay stable within a run.
std::pair<Topology, CandidateScore> ga_optimize(
    const Topology& base, const GaParams& params, const FitnessWeights& weights,
    const CandidateEvaluator& evaluator, Rng rng,
    const GaProgressFn& progress = nullptr,
    const std::vector<Genome>* seed_population = nullptr,
    std::vector<Genome>* final_population = nullptr);

// Standard evaluator: applies the genome to the base topology, counts
// decoy-target attack paths, estimates expected MTTSF over `eval_runs`
// shuffle-free episodes, and scores avoided shuffle cost against the base.
RawTriple evaluate_candidate(const Genome& genome, const Topology& base,
                             const Catalog& catalog, const AttackerProfile& attacker,
                             const DefenderProfile& defender, int eval_runs,
                             double horizon_hours, Rng rng);

}  // namespace mtdsim
