#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mtdsim/net.hpp"
#include "mtdsim/vuln.hpp"

namespace mtdsim {

// Three-layer hierarchical attack representation model. The upper layer is
// VLAN reachability, the middle layer node connectivity restricted to
// attack-traversable direction, and the lower layer each node's
// vulnerabilities.
//
// Middle-layer direction rules: real<->real links are traversable both ways
// (lateral movement), except that target-class nodes (server-class or
// critical) are sinks — an attack path ends when it reaches a target, so no
// edge leaves one. Real->decoy edges follow the active candidate edges and
// decoy->decoy edges point toward the decoy server.
struct Harm {
  std::map<std::string, std::set<std::string>> upper;
  std::vector<std::vector<NodeId>> middle;  // adjacency list, directed
  std::map<NodeId, std::vector<std::string>> lower;

  // Node metadata mirrored for self-contained traversal.
  std::vector<bool> is_decoy;
  std::vector<bool> is_target;  // server-class or critical

  std::size_t node_count() const { return middle.size(); }
  std::size_t middle_edge_count() const;
};

enum class TargetClass { Real, Decoy };

struct AttackPath {
  std::vector<NodeId> nodes;  // entry first, target last, no repeats
  TargetClass target_class = TargetClass::Real;
};

// Enumerated attack paths split by target class. ap_r contains only real
// nodes and ends at a real server; ap_d may mix real and decoy nodes and
// ends at a decoy server.
struct AttackPathSet {
  std::vector<AttackPath> ap_r;
  std::vector<AttackPath> ap_d;
};

Harm build_harm(const Topology& topo);

// All simple paths from any entry to any target over the middle layer,
// enumerated depth-first. depth_cap bounds the node count per path when
// positive (0 = unlimited).
AttackPathSet enumerate_paths(const Harm& harm, const std::vector<NodeId>& entries,
                              const std::vector<NodeId>& targets,
                              std::size_t depth_cap = 0);

// Convenience wrapper using the topology's entry nodes and its real and
// decoy servers as targets.
AttackPathSet enumerate_paths(const Harm& harm, const Topology& topo,
                              std::size_t depth_cap = 0);

inline std::size_t count_decoy_target_paths(const AttackPathSet& aps) {
  return aps.ap_d.size();
}

// Expected sequential compromise time of a path: the sum over its nodes of
// the mean exponential compromise time at each node's effective rate.
double expected_path_time(const AttackPath& path, const Topology& topo,
                          const Catalog& catalog);

// Debug view of the three layers plus path lists, as a JSON string.
std::string harm_to_json(const Harm& harm, const Topology& topo,
                         const AttackPathSet* paths = nullptr);

}  // namespace mtdsim
