#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mtdsim/net.hpp"

namespace mtdsim {

enum class SfcKind { None, Sfc1, Sfc2 };

const char* to_string(SfcKind k);

// Live attacker-campaign state. compromised_real / compromised_decoys hold
// what is compromised on the currently deployed topology; a shuffle clears
// them (the attacker loses its footholds and decoys are redeployed).
// accumulated_progress is the attack effort already sunk into each real
// node; it survives shuffles, so a node whose total sampled effort has been
// spent is re-compromised instantly on the next encounter.
struct SystemState {
  double clock = 0.0;  // hours
  std::set<NodeId> compromised_real;
  std::set<NodeId> compromised_decoys;
  std::set<NodeId> detected_real;  // defender's view, reset per deployment
  std::map<NodeId, double> accumulated_progress;
  std::optional<std::pair<std::vector<NodeId>, std::size_t>> current_target_path;
};

// Security failure conditions: Sfc2 when any critical node is compromised
// (confidentiality loss, takes precedence), Sfc1 when more than a third of
// the initially deployed real nodes are simultaneously compromised
// (integrity loss).
SfcKind check_sfc(const SystemState& state, const Topology& topo);

}  // namespace mtdsim
