#include "mtdsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "mtdsim/error.hpp"

namespace mtdsim {

void SsvParams::validate() const {
  if (w1 < 0.0 || w2 < 0.0 || std::abs(w1 + w2 - 1.0) > 1e-9)
    throw Error("ssv weights must be non-negative and sum to 1");
  if (k < 1) throw Error("ssv hop count k must be >= 1");
  if (!(beta > 0.0) || !(beta < rho) || !(rho <= 1.0))
    throw Error("ssv thresholds must satisfy 0 < beta < rho <= 1");
}

void FitnessWeights::validate() const {
  if (w_n < 0.0 || w_m < 0.0 || w_c < 0.0 || std::abs(w_n + w_m + w_c - 1.0) > 1e-9)
    throw Error("fitness weights must be non-negative and sum to 1");
}

std::vector<NodeId> critical_neighborhood(const Topology& topo, int k) {
  std::set<NodeId> criticals;
  for (NodeId c : topo.critical_nodes()) criticals.insert(c);
  // BFS over real-real links, both directions, up to depth k.
  std::map<NodeId, int> dist;
  std::queue<NodeId> q;
  for (NodeId c : criticals) {
    dist[c] = 0;
    q.push(c);
  }
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    if (dist[v] >= k) continue;
    for (const auto& [a, b] : topo.edges) {
      if (a != v) continue;
      if (topo.node(a).attrs.is_decoy || topo.node(b).attrs.is_decoy) continue;
      if (!dist.count(b)) {
        dist[b] = dist[v] + 1;
        q.push(b);
      }
    }
  }
  std::vector<NodeId> out;
  for (const auto& [id, d] : dist)
    if (d > 0 && !criticals.count(id)) out.push_back(id);
  return out;
}

double compute_ssv(const SystemState& state, const Topology& topo,
                   const SsvParams& params) {
  params.validate();
  if (topo.critical_nodes().empty())
    throw Error("compute_ssv requires at least one critical node");
  if (check_sfc(state, topo) != SfcKind::None) return 1.0;

  const double n = static_cast<double>(topo.initial_real_count());
  const double cn = static_cast<double>(state.detected_real.size());
  const auto neighborhood = critical_neighborhood(topo, params.k);
  double term2 = 0.0;
  if (!neighborhood.empty()) {
    int cn_ck = 0;
    for (NodeId v : neighborhood) cn_ck += state.detected_real.count(v) ? 1 : 0;
    term2 = static_cast<double>(cn_ck) / static_cast<double>(neighborhood.size());
  }
  const double ssv = params.w1 * (cn / n) + params.w2 * term2;
  return std::clamp(ssv, 0.0, 1.0);
}

long defense_cost(const ShuffleLog& log) {
  long total = 0;
  for (const auto& e : log.events) total += e.edges_changed;
  return total;
}

double defense_cost_rate(long total_cost, double mttsf_hours) {
  if (!(mttsf_hours > 0.0)) throw Error("defense_cost_rate requires mttsf > 0");
  return static_cast<double>(total_cost) / mttsf_hours;
}

std::vector<double> normalize(const std::vector<double>& values, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (values.empty()) return {};
  double max = 0.0;
  for (double v : values) {
    if (v < 0.0) throw Error("normalize requires non-negative values");
    max = std::max(max, v);
  }
  if (max == 0.0) {
    if (degenerate) *degenerate = true;
    return std::vector<double>(values.size(), 0.0);
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / max;
  return out;
}

double scalarized_fitness(double n_ap_dt_norm, double e_mttsf_norm,
                          double cost_term_norm, const FitnessWeights& w) {
  w.validate();
  return w.w_n * n_ap_dt_norm + w.w_m * e_mttsf_norm + w.w_c * cost_term_norm;
}

}  // namespace mtdsim
