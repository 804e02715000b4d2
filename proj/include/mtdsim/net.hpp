#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mtdsim/rng.hpp"
#include "mtdsim/vuln.hpp"

namespace mtdsim {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;  // directed

enum class DecoyKind { None, Emulation, FullOs };

const char* to_string(DecoyKind k);
DecoyKind decoy_kind_from_string(const std::string& s);

// Per-node attribute vector: compromised / decoy / critical flags plus the
// vulnerability list. `compromised` here is only the static template; live
// compromise state belongs to SystemState.
struct NodeAttributes {
  bool compromised = false;
  bool is_decoy = false;
  bool is_critical = false;
  std::vector<std::string> vulnerabilities;
  DecoyKind decoy_kind = DecoyKind::None;
};

struct Node {
  NodeId id = -1;
  std::string name;
  std::string vlan;
  bool is_server = false;  // server-class devices are targets, never entry points
  NodeAttributes attrs;
};

// Binary vector over candidate edges; position i controls candidate_edges[i].
using Genome = std::vector<uint8_t>;

// The mutable network: real and decoy nodes partitioned into VLANs, a
// directed edge set, and the fixed, ordered list of shuffleable
// (real IoT -> decoy) candidate edges. Values are immutable by convention:
// mutation operations return fresh copies.
struct Topology {
  std::vector<Node> nodes;  // id == index
  std::set<Edge> edges;
  std::vector<std::string> vlans;
  std::set<std::pair<std::string, std::string>> vlan_adjacency;  // both orders stored
  std::vector<Edge> candidate_edges;  // ordering fixed for a scenario's lifetime

  const Node& node(NodeId id) const;
  NodeId id_of(const std::string& name) const;  // throws if unknown
  bool has_edge(NodeId a, NodeId b) const { return edges.count({a, b}) != 0; }
  bool vlans_adjacent(const std::string& a, const std::string& b) const;

  std::vector<NodeId> real_nodes() const;
  std::vector<NodeId> decoy_nodes() const;
  std::vector<NodeId> entry_nodes() const;        // real, non-server
  std::vector<NodeId> real_server_nodes() const;  // real, server-class
  std::vector<NodeId> decoy_server_nodes() const;
  std::vector<NodeId> critical_nodes() const;
  int initial_real_count() const;

  // Current genome, read off the candidate edge list.
  Genome genome() const;

  // Hash of the real-node subgraph (nodes + real->real edges); shuffling
  // must never change it.
  uint64_t real_subgraph_hash() const;
};

// Scenario description, decoded from the JSON schema documented in the
// README (keys: vlans, nodes, vlan_adjacency, decoys, optional real_edges).
struct ScenarioNodeSpec {
  std::string name;
  std::string vlan;
  std::vector<std::string> cve_ids;
  bool critical = false;
  bool server = false;
};

struct DecoySpec {
  std::string name;
  std::string vlan;
  DecoyKind kind = DecoyKind::Emulation;
  std::vector<std::string> cve_ids;
  std::string mimics;
  bool server = false;
};

struct DecoyPlan {
  std::vector<DecoySpec> decoys;
};

struct ScenarioSpec {
  std::vector<std::string> vlans;
  std::vector<std::pair<std::string, std::string>> vlan_adjacency;
  std::vector<ScenarioNodeSpec> nodes;
  // Explicit real-node links (undirected pairs by name). When absent, real
  // nodes are fully connected within a VLAN and across adjacent VLANs.
  std::optional<std::vector<std::pair<std::string, std::string>>> real_edges;
  DecoyPlan decoys;
};

ScenarioSpec load_scenario(const std::filesystem::path& file);
ScenarioSpec load_scenario_text(const std::string& json_text);

// Builds the real-node network: no decoys, no candidate edges yet.
// Validates node VLANs, vulnerability ids, and edge endpoints.
Topology build_network(const ScenarioSpec& spec, const Catalog& catalog);

// Adds decoys per plan, wires every decoy toward a decoy server, fills the
// candidate edge list with every (real IoT node, decoy) pair, and activates
// an initial random subset of candidates.
Topology deploy_decoys(const Topology& topo, const DecoyPlan& plan,
                       const Catalog& catalog, Rng& rng);

// Returns a topology whose candidate edge i is present iff genome[i] == 1.
// Non-candidate edges are untouched. Throws on length mismatch.
Topology apply_genome(const Topology& topo, const Genome& genome);

// Number of candidate edges whose presence differs between the two
// topologies (Hamming distance over candidate bits). Both must share the
// same candidate edge list.
int edge_diff(const Topology& a, const Topology& b);

// Returns every violated structural invariant; empty means the topology is
// well formed.
std::vector<std::string> validate_topology(const Topology& topo);

}  // namespace mtdsim
