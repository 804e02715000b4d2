#include "mtdsim/net.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "mtdsim/error.hpp"

namespace mtdsim {

const char* to_string(DecoyKind k) {
  switch (k) {
    case DecoyKind::None: return "none";
    case DecoyKind::Emulation: return "emulation";
    case DecoyKind::FullOs: return "full_os";
  }
  return "none";
}

DecoyKind decoy_kind_from_string(const std::string& s) {
  if (s == "none") return DecoyKind::None;
  if (s == "emulation") return DecoyKind::Emulation;
  if (s == "full_os") return DecoyKind::FullOs;
  throw Error("unknown decoy kind: " + s);
}

const Node& Topology::node(NodeId id) const {
  if (id < 0 || id >= static_cast<NodeId>(nodes.size()))
    throw Error("node id out of range: " + std::to_string(id));
  return nodes[id];
}

NodeId Topology::id_of(const std::string& name) const {
  for (const auto& n : nodes)
    if (n.name == name) return n.id;
  throw Error("unknown node name: " + name);
}

bool Topology::vlans_adjacent(const std::string& a, const std::string& b) const {
  return vlan_adjacency.count({a, b}) != 0;
}

std::vector<NodeId> Topology::real_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (!n.attrs.is_decoy) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::decoy_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.attrs.is_decoy) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::entry_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (!n.attrs.is_decoy && !n.is_server) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::real_server_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (!n.attrs.is_decoy && n.is_server) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::decoy_server_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.attrs.is_decoy && n.is_server) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::critical_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.attrs.is_critical) out.push_back(n.id);
  return out;
}

int Topology::initial_real_count() const {
  return static_cast<int>(real_nodes().size());
}

Genome Topology::genome() const {
  Genome g(candidate_edges.size(), 0);
  for (std::size_t i = 0; i < candidate_edges.size(); ++i)
    g[i] = edges.count(candidate_edges[i]) ? 1 : 0;
  return g;
}

uint64_t Topology::real_subgraph_hash() const {
  uint64_t h = 0x5851F42D4C957F2DULL;
  for (const auto& n : nodes) {
    if (n.attrs.is_decoy) continue;
    h = hash_combine(h, mix64(static_cast<uint64_t>(n.id)));
    for (char c : n.vlan) h = hash_combine(h, static_cast<uint64_t>(c));
  }
  for (const auto& [a, b] : edges) {
    if (nodes[a].attrs.is_decoy || nodes[b].attrs.is_decoy) continue;
    h = hash_combine(h, (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b));
  }
  return h;
}

namespace {

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open file: " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> get_string_list(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  for (const auto& e : j.at(key)) out.push_back(e.get<std::string>());
  return out;
}

}  // namespace

ScenarioSpec load_scenario_text(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed scenario JSON: ") + e.what());
  }
  ScenarioSpec spec;
  spec.vlans = get_string_list(doc, "vlans");
  for (const auto& pair : doc.at("vlan_adjacency")) {
    if (!pair.is_array() || pair.size() != 2)
      throw Error("vlan_adjacency entries must be [a, b] pairs");
    spec.vlan_adjacency.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  for (const auto& n : doc.at("nodes")) {
    ScenarioNodeSpec ns;
    ns.name = n.at("name").get<std::string>();
    ns.vlan = n.at("vlan").get<std::string>();
    ns.cve_ids = get_string_list(n, "cve_ids");
    ns.critical = n.value("critical", false);
    ns.server = n.value("server", false);
    spec.nodes.push_back(std::move(ns));
  }
  if (doc.contains("real_edges")) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& pair : doc.at("real_edges")) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error("real_edges entries must be [a, b] pairs");
      edges.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    spec.real_edges = std::move(edges);
  }
  if (doc.contains("decoys")) {
    for (const auto& d : doc.at("decoys")) {
      DecoySpec ds;
      ds.name = d.at("name").get<std::string>();
      ds.vlan = d.at("vlan").get<std::string>();
      ds.kind = decoy_kind_from_string(d.value("kind", std::string("emulation")));
      ds.cve_ids = get_string_list(d, "cve_ids");
      ds.mimics = d.value("mimics", std::string());
      ds.server = d.value("server", false);
      spec.decoys.decoys.push_back(std::move(ds));
    }
  }
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& file) {
  return load_scenario_text(read_file(file));
}

namespace {

void add_undirected(Topology& topo, NodeId a, NodeId b) {
  topo.edges.insert({a, b});
  topo.edges.insert({b, a});
}

}  // namespace

Topology build_network(const ScenarioSpec& spec, const Catalog& catalog) {
  if (spec.vlans.empty()) throw Error("scenario declares no VLANs");
  Topology topo;
  topo.vlans = spec.vlans;
  std::set<std::string> declared(spec.vlans.begin(), spec.vlans.end());
  for (const auto& [a, b] : spec.vlan_adjacency) {
    if (!declared.count(a) || !declared.count(b))
      throw Error("vlan_adjacency references undeclared VLAN: " + a + "/" + b);
    topo.vlan_adjacency.insert({a, b});
    topo.vlan_adjacency.insert({b, a});
  }

  for (const auto& ns : spec.nodes) {
    if (!declared.count(ns.vlan))
      throw Error("node " + ns.name + " assigned to undeclared VLAN " + ns.vlan);
    if (ns.cve_ids.empty()) throw Error("node " + ns.name + " has no vulnerabilities");
    for (const auto& cve : ns.cve_ids)
      if (!catalog.contains(cve))
        throw Error("node " + ns.name + " references unknown vulnerability " + cve);
    Node n;
    n.id = static_cast<NodeId>(topo.nodes.size());
    n.name = ns.name;
    n.vlan = ns.vlan;
    n.is_server = ns.server;
    n.attrs.is_critical = ns.critical;
    n.attrs.vulnerabilities = ns.cve_ids;
    topo.nodes.push_back(std::move(n));
  }

  if (spec.real_edges) {
    for (const auto& [a, b] : *spec.real_edges) {
      NodeId ia = topo.id_of(a), ib = topo.id_of(b);
      const auto& na = topo.node(ia);
      const auto& nb = topo.node(ib);
      if (na.vlan != nb.vlan && !topo.vlans_adjacent(na.vlan, nb.vlan))
        throw Error("real edge " + a + "-" + b + " crosses non-adjacent VLANs");
      add_undirected(topo, ia, ib);
    }
  } else {
    // Default connectivity: full mesh within a VLAN, full bipartite links
    // between adjacent VLANs.
    for (const auto& a : topo.nodes) {
      for (const auto& b : topo.nodes) {
        if (a.id >= b.id) continue;
        if (a.vlan == b.vlan || topo.vlans_adjacent(a.vlan, b.vlan))
          add_undirected(topo, a.id, b.id);
      }
    }
  }
  return topo;
}

Topology deploy_decoys(const Topology& base, const DecoyPlan& plan,
                       const Catalog& catalog, Rng& rng) {
  for (const auto& n : base.nodes)
    if (n.attrs.is_decoy) throw Error("deploy_decoys: topology already has decoys");

  Topology topo = base;
  std::set<std::string> declared(topo.vlans.begin(), topo.vlans.end());
  std::vector<NodeId> decoy_ids;
  for (const auto& ds : plan.decoys) {
    if (!declared.count(ds.vlan))
      throw Error("decoy " + ds.name + " placed in VLAN absent from topology: " + ds.vlan);
    if (ds.cve_ids.empty()) throw Error("decoy " + ds.name + " has no vulnerabilities");
    for (const auto& cve : ds.cve_ids)
      if (!catalog.contains(cve))
        throw Error("decoy " + ds.name + " references unknown vulnerability " + cve);
    if (ds.kind == DecoyKind::None)
      throw Error("decoy " + ds.name + " must be emulation or full_os");
    Node n;
    n.id = static_cast<NodeId>(topo.nodes.size());
    n.name = ds.name;
    n.vlan = ds.vlan;
    n.is_server = ds.server;
    n.attrs.is_decoy = true;
    n.attrs.decoy_kind = ds.kind;
    n.attrs.vulnerabilities = ds.cve_ids;
    topo.nodes.push_back(std::move(n));
    decoy_ids.push_back(topo.nodes.back().id);
  }
  if (decoy_ids.empty()) return topo;

  const auto servers = topo.decoy_server_nodes();
  if (servers.empty())
    throw Error("decoy plan must include at least one decoy server");

  // Every non-server decoy needs a diversion route ending at a decoy server:
  // direct when the VLANs are adjacent (or equal), otherwise hop through
  // decoys in intermediate VLANs.
  const NodeId sink = servers.front();
  const std::string& sink_vlan = topo.node(sink).vlan;
  auto vlan_route = [&](const std::string& from) {
    // BFS over VLAN adjacency toward the decoy server's VLAN.
    std::map<std::string, std::string> prev;
    std::queue<std::string> q;
    q.push(from);
    prev[from] = from;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      if (v == sink_vlan) break;
      for (const auto& w : topo.vlans) {
        if (!prev.count(w) && topo.vlans_adjacent(v, w)) {
          prev[w] = v;
          q.push(w);
        }
      }
    }
    std::vector<std::string> route;
    if (!prev.count(sink_vlan)) return route;
    for (std::string v = sink_vlan; v != from; v = prev[v]) route.push_back(v);
    std::reverse(route.begin(), route.end());
    return route;  // VLANs after `from`, ending at the server VLAN
  };
  auto first_decoy_in = [&](const std::string& vlan) -> NodeId {
    for (NodeId d : decoy_ids)
      if (topo.node(d).vlan == vlan) return d;
    return -1;
  };
  for (NodeId d : decoy_ids) {
    if (topo.node(d).is_server) continue;
    const std::string& v = topo.node(d).vlan;
    if (v == sink_vlan || topo.vlans_adjacent(v, sink_vlan)) {
      topo.edges.insert({d, sink});
      continue;
    }
    auto route = vlan_route(v);
    if (route.empty())
      throw Error("decoy " + topo.node(d).name + " cannot reach a decoy server VLAN");
    NodeId cur = d;
    for (const auto& hop : route) {
      NodeId next = (hop == sink_vlan) ? sink : first_decoy_in(hop);
      if (next < 0)
        throw Error("no decoy available in VLAN " + hop + " to relay toward the decoy server");
      topo.edges.insert({cur, next});
      cur = next;
    }
  }

  // Shuffleable surface: every (real IoT node, decoy) pair, in deterministic
  // (entry, decoy) order. Server-class real nodes are never sources.
  for (NodeId r : topo.entry_nodes())
    for (NodeId d : decoy_ids) topo.candidate_edges.emplace_back(r, d);

  Genome initial(topo.candidate_edges.size(), 0);
  for (auto& bit : initial) bit = rng.bernoulli(0.5) ? 1 : 0;
  return apply_genome(topo, initial);
}

Topology apply_genome(const Topology& topo, const Genome& genome) {
  if (genome.size() != topo.candidate_edges.size())
    throw Error("genome length " + std::to_string(genome.size()) +
                " does not match candidate edge count " +
                std::to_string(topo.candidate_edges.size()));
  Topology out = topo;
  for (std::size_t i = 0; i < genome.size(); ++i) {
    if (genome[i])
      out.edges.insert(out.candidate_edges[i]);
    else
      out.edges.erase(out.candidate_edges[i]);
  }
  return out;
}

int edge_diff(const Topology& a, const Topology& b) {
  if (a.candidate_edges != b.candidate_edges)
    throw Error("edge_diff requires matching candidate edge lists");
  const Genome ga = a.genome(), gb = b.genome();
  int diff = 0;
  for (std::size_t i = 0; i < ga.size(); ++i) diff += (ga[i] != gb[i]) ? 1 : 0;
  return diff;
}

std::vector<std::string> validate_topology(const Topology& topo) {
  std::vector<std::string> violations;
  std::set<std::string> declared(topo.vlans.begin(), topo.vlans.end());

  for (const auto& n : topo.nodes) {
    if (!declared.count(n.vlan))
      violations.push_back("node " + n.name + " in undeclared VLAN " + n.vlan);
    if (n.attrs.is_critical && n.attrs.is_decoy)
      violations.push_back("critical node " + n.name + " is a decoy");
    if (n.attrs.vulnerabilities.empty())
      violations.push_back("node " + n.name + " has an empty vulnerability list");
    if (n.attrs.is_decoy != (n.attrs.decoy_kind != DecoyKind::None))
      violations.push_back("node " + n.name + " has inconsistent decoy kind");
  }

  for (const auto& [a, b] : topo.edges) {
    if (a < 0 || b < 0 || a >= static_cast<NodeId>(topo.nodes.size()) ||
        b >= static_cast<NodeId>(topo.nodes.size())) {
      violations.push_back("edge references unknown node id");
      continue;
    }
    const auto& na = topo.nodes[a];
    const auto& nb = topo.nodes[b];
    if (na.attrs.is_decoy && !nb.attrs.is_decoy)
      violations.push_back("decoy-to-real edge " + na.name + " -> " + nb.name);
    if (na.vlan != nb.vlan && !topo.vlans_adjacent(na.vlan, nb.vlan))
      violations.push_back("edge " + na.name + " -> " + nb.name +
                           " crosses non-adjacent VLANs");
  }

  for (const auto& [r, d] : topo.candidate_edges) {
    if (r < 0 || d < 0 || r >= static_cast<NodeId>(topo.nodes.size()) ||
        d >= static_cast<NodeId>(topo.nodes.size())) {
      violations.push_back("candidate edge references unknown node id");
      continue;
    }
    const auto& nr = topo.nodes[r];
    const auto& nd = topo.nodes[d];
    if (nr.attrs.is_decoy || !nd.attrs.is_decoy || nr.is_server)
      violations.push_back("candidate edge " + nr.name + " -> " + nd.name +
                           " is not a (real IoT, decoy) pair");
  }
  return violations;
}

}  // namespace mtdsim
