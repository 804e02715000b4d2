#include "mtdsim/harm.hpp"

#include <algorithm>

#include "json.hpp"
#include "mtdsim/error.hpp"

namespace mtdsim {

std::size_t Harm::middle_edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : middle) n += adj.size();
  return n;
}

Harm build_harm(const Topology& topo) {
  auto violations = validate_topology(topo);
  if (!violations.empty())
    throw Error("build_harm on invalid topology: " + violations.front());

  Harm harm;
  const std::size_t n = topo.nodes.size();
  harm.middle.assign(n, {});
  harm.is_decoy.assign(n, false);
  harm.is_target.assign(n, false);

  for (const auto& node : topo.nodes) {
    harm.is_decoy[node.id] = node.attrs.is_decoy;
    harm.is_target[node.id] = node.is_server || node.attrs.is_critical;
    harm.lower[node.id] = node.attrs.vulnerabilities;
  }
  for (const auto& v : topo.vlans) harm.upper[v];  // ensure every VLAN appears
  for (const auto& [a, b] : topo.vlan_adjacency) harm.upper[a].insert(b);

  for (const auto& [a, b] : topo.edges) {
    if (harm.is_target[a]) continue;  // paths stop at targets
    harm.middle[a].push_back(b);
  }
  for (auto& adj : harm.middle) std::sort(adj.begin(), adj.end());
  return harm;
}

namespace {

void dfs_paths(const Harm& harm, NodeId node, const std::set<NodeId>& targets,
               std::vector<NodeId>& stack, std::vector<char>& on_path,
               std::size_t depth_cap, AttackPathSet& out) {
  stack.push_back(node);
  on_path[node] = 1;
  if (targets.count(node)) {
    AttackPath p;
    p.nodes = stack;
    p.target_class = harm.is_decoy[node] ? TargetClass::Decoy : TargetClass::Real;
    (p.target_class == TargetClass::Decoy ? out.ap_d : out.ap_r).push_back(std::move(p));
  } else if (depth_cap == 0 || stack.size() < depth_cap) {
    for (NodeId next : harm.middle[node])
      if (!on_path[next]) dfs_paths(harm, next, targets, stack, on_path, depth_cap, out);
  }
  on_path[node] = 0;
  stack.pop_back();
}

}  // namespace

AttackPathSet enumerate_paths(const Harm& harm, const std::vector<NodeId>& entries,
                              const std::vector<NodeId>& targets,
                              std::size_t depth_cap) {
  if (entries.empty()) throw Error("enumerate_paths: empty entry set");
  if (targets.empty()) throw Error("enumerate_paths: empty target set");
  std::set<NodeId> target_set(targets.begin(), targets.end());
  AttackPathSet out;
  std::vector<char> on_path(harm.node_count(), 0);
  std::vector<NodeId> stack;
  for (NodeId e : entries) {
    if (target_set.count(e)) continue;  // entries are not targets
    dfs_paths(harm, e, target_set, stack, on_path, depth_cap, out);
  }
  return out;
}

AttackPathSet enumerate_paths(const Harm& harm, const Topology& topo,
                              std::size_t depth_cap) {
  auto targets = topo.real_server_nodes();
  for (NodeId d : topo.decoy_server_nodes()) targets.push_back(d);
  return enumerate_paths(harm, topo.entry_nodes(), targets, depth_cap);
}

double expected_path_time(const AttackPath& path, const Topology& topo,
                          const Catalog& catalog) {
  double hours = 0.0;
  for (NodeId id : path.nodes) {
    const double rate = effective_node_rate(topo.node(id).attrs.vulnerabilities, catalog);
    if (!(rate > 0.0)) throw Error("non-positive rate on path node " + topo.node(id).name);
    hours += 1.0 / rate;
  }
  return hours;
}

std::string harm_to_json(const Harm& harm, const Topology& topo,
                         const AttackPathSet* paths) {
  nlohmann::ordered_json doc;
  auto& upper = doc["upper"];
  for (const auto& [vlan, adj] : harm.upper)
    upper[vlan] = std::vector<std::string>(adj.begin(), adj.end());
  auto& middle = doc["middle"];
  for (std::size_t i = 0; i < harm.middle.size(); ++i) {
    std::vector<std::string> names;
    for (NodeId j : harm.middle[i]) names.push_back(topo.node(j).name);
    middle[topo.node(static_cast<NodeId>(i)).name] = names;
  }
  auto& lower = doc["lower"];
  for (const auto& [id, vulns] : harm.lower) lower[topo.node(id).name] = vulns;
  if (paths) {
    auto path_names = [&](const std::vector<AttackPath>& list) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& p : list) {
        std::vector<std::string> names;
        for (NodeId id : p.nodes) names.push_back(topo.node(id).name);
        arr.push_back(names);
      }
      return arr;
    };
    doc["ap_r"] = path_names(paths->ap_r);
    doc["ap_d"] = path_names(paths->ap_d);
  }
  return doc.dump(2);
}

}  // namespace mtdsim
