#pragma once

#include <vector>

#include "mtdsim/state.hpp"

namespace mtdsim {

// Parameters of the system security vulnerability level. The two weighted
// terms track overall compromise (integrity) and compromise near critical
// nodes (confidentiality exposure) within k hops.
struct SsvParams {
  double w1 = 0.5;
  double w2 = 0.5;
  int k = 1;
  double beta = 0.01;  // minimum SSV increase that arms the adaptive trigger
  double rho = 0.1;    // SSV tolerance; no shuffle once at or above it

  void validate() const;
};

struct ShuffleEvent {
  double time = 0.0;       // hours, strictly increasing across a log
  int edges_changed = 0;   // candidate edges toggled by this shuffle
  int potential = 0;       // total shuffleable edge count at this event
};

struct ShuffleLog {
  std::vector<ShuffleEvent> events;
};

struct FitnessWeights {
  double w_n = 1.0 / 3.0;  // decoy-target path count
  double w_m = 1.0 / 3.0;  // expected mean time to security failure
  double w_c = 1.0 / 3.0;  // avoided shuffle cost

  void validate() const;
};

// System security vulnerability level in [0, 1]. Returns 1 when the state
// already meets a security failure condition. Otherwise
//   w1 * CN/N + w2 * CN_ck/N_ck
// where CN counts detected compromised real nodes, N is the initially
// deployed real-node count, N_ck the real nodes within k hops (over real
// links) of any critical node, and CN_ck the detected ones among those.
// The second term is 0 when no real node lies within k hops of a critical
// node. Throws if the topology has no critical node.
double compute_ssv(const SystemState& state, const Topology& topo,
                   const SsvParams& params);

// Real nodes within k hops of any critical node, critical nodes excluded.
std::vector<NodeId> critical_neighborhood(const Topology& topo, int k);

// Total shuffle cost: every toggled edge counts, each occurrence separately.
long defense_cost(const ShuffleLog& log);

double defense_cost_rate(long total_cost, double mttsf_hours);

// Divides each value by the list maximum (all values must be >= 0). An
// all-zero input yields all zeros and sets *degenerate when provided.
std::vector<double> normalize(const std::vector<double>& values,
                              bool* degenerate = nullptr);

// Weighted sum of the three normalized objectives; weights must sum to 1.
double scalarized_fitness(double n_ap_dt_norm, double e_mttsf_norm,
                          double cost_term_norm, const FitnessWeights& w);

}  // namespace mtdsim
