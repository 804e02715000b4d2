#include "mtdsim/state.hpp"

namespace mtdsim {

const char* to_string(SfcKind k) {
  switch (k) {
    case SfcKind::None: return "none";
    case SfcKind::Sfc1: return "SFC1";
    case SfcKind::Sfc2: return "SFC2";
  }
  return "none";
}

SfcKind check_sfc(const SystemState& state, const Topology& topo) {
  for (NodeId c : topo.critical_nodes())
    if (state.compromised_real.count(c)) return SfcKind::Sfc2;
  const int n = topo.initial_real_count();
  if (n > 0 &&
      static_cast<double>(state.compromised_real.size()) > static_cast<double>(n) / 3.0)
    return SfcKind::Sfc1;
  return SfcKind::None;
}

}  // namespace mtdsim
