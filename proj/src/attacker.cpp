#include "mtdsim/attacker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mtdsim/error.hpp"

namespace mtdsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags for the per-episode RNG tree.
enum : uint64_t {
  kStreamSelect = 1,
  kStreamDetect = 2,
  kStreamEngage = 3,
  kStreamDecoyWork = 4,
  kStreamPolicy = 5,
  kStreamEffortBase = 0x1000,
};
}  // namespace

void AttackerProfile::validate() const {
  if (p_decoy_emulation < 0.0 || p_decoy_emulation > 1.0 || p_decoy_full_os < 0.0 ||
      p_decoy_full_os > 1.0)
    throw Error("decoy engagement probabilities must lie in [0,1]");
  if (p_decoy_emulation > p_decoy_full_os)
    throw Error("emulation decoy engagement probability must not exceed full-OS");
}

double AttackerProfile::engagement_probability(DecoyKind kind) const {
  switch (kind) {
    case DecoyKind::Emulation: return p_decoy_emulation;
    case DecoyKind::FullOs: return p_decoy_full_os;
    case DecoyKind::None: break;
  }
  throw Error("engagement probability queried for a non-decoy node");
}

void DefenderProfile::validate() const {
  if (detection_confidence < 0.0 || detection_confidence > 1.0)
    throw Error("detection confidence must lie in [0,1]");
  if (estimation_error_range.first > estimation_error_range.second)
    throw Error("estimation error range bounds out of order");
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::EntryChosen: return "entry_chosen";
    case EventKind::NodeCompromised: return "node_compromised";
    case EventKind::DecoyEngaged: return "decoy_engaged";
    case EventKind::DecoyRecognized: return "decoy_recognized";
    case EventKind::DecoyCompromised: return "decoy_compromised";
    case EventKind::DetectionRaised: return "detection_raised";
    case EventKind::ShuffleApplied: return "shuffle_applied";
    case EventKind::SfcReached: return "sfc_reached";
  }
  return "unknown";
}

const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::Sfc1: return "SFC1";
    case Terminal::Sfc2: return "SFC2";
    case Terminal::Horizon: return "horizon";
  }
  return "unknown";
}

double ShufflePolicy::next_tick() const { return kInf; }
std::optional<Topology> ShufflePolicy::on_tick(const Topology&, const SystemState&, Rng&) {
  return std::nullopt;
}
std::optional<Topology> ShufflePolicy::on_detection(const Topology&, const SystemState&,
                                                    Rng&) {
  return std::nullopt;
}
void ShufflePolicy::on_shuffled(double) {}

namespace {

struct PathsView {
  std::vector<AttackPath> all;                // real-target paths first
  std::vector<std::vector<int>> by_entry;     // node id -> indices into all
  int n_ap_dt = 0;
};

PathsView build_paths(const Topology& topo) {
  Harm harm = build_harm(topo);
  AttackPathSet aps = enumerate_paths(harm, topo);
  PathsView pv;
  pv.n_ap_dt = static_cast<int>(aps.ap_d.size());
  pv.all = std::move(aps.ap_r);
  pv.all.insert(pv.all.end(), std::make_move_iterator(aps.ap_d.begin()),
                std::make_move_iterator(aps.ap_d.end()));
  pv.by_entry.assign(topo.nodes.size(), {});
  for (std::size_t i = 0; i < pv.all.size(); ++i)
    pv.by_entry[pv.all[i].nodes.front()].push_back(static_cast<int>(i));
  return pv;
}

enum class DecoyState { Unseen, Recognized, Engaged, Compromised };

class Episode {
 public:
  Episode(const Topology& topo, const Catalog& catalog, const AttackerProfile& attacker,
          const DefenderProfile& defender, ShufflePolicy* policy, Rng rng,
          double horizon)
      : topo_(topo),
        catalog_(catalog),
        attacker_(attacker),
        defender_(defender),
        policy_(policy),
        rng_(rng),
        select_rng_(rng.child(kStreamSelect)),
        detect_rng_(rng.child(kStreamDetect)),
        engage_rng_(rng.child(kStreamEngage)),
        decoy_rng_(rng.child(kStreamDecoyWork)),
        policy_rng_(rng.child(kStreamPolicy)),
        horizon_(horizon) {
    if (!(horizon_ > 0.0)) throw Error("episode horizon must be positive");
    attacker_.validate();
    defender_.validate();
    const std::size_t n = topo_.nodes.size();
    rate_.resize(n);
    for (const auto& node : topo_.nodes)
      rate_[node.id] = effective_node_rate(node.attrs.vulnerabilities, catalog_);
    effort_units_.assign(n, -1.0);
    progress_.assign(n, 0.0);
    decoy_state_.assign(n, DecoyState::Unseen);
    engaged_remaining_.assign(n, 0.0);
    if (topo_.entry_nodes().empty()) throw Error("episode requires at least one entry node");
  }

  EpisodeResult run() {
    rebuild_paths(true);
    while (!terminal_) {
      if (!walk_) {
        if (!pick_walk()) {
          idle();
          continue;
        }
      }
      step();
    }
    EpisodeResult result;
    result.trace.events = std::move(events_);
    result.trace.terminal = *terminal_;
    result.trace.terminal_time = state_.clock;
    result.shuffle_log = std::move(shuffle_log_);
    result.n_ap_dt_per_topology = std::move(n_ap_list_);
    result.final_state = std::move(state_);
    return result;
  }

 private:
  void emit(EventKind kind, NodeId node, double value = 0.0) {
    events_.push_back({state_.clock, kind, node, value});
  }

  void rebuild_paths(bool initial) {
    paths_ = build_paths(topo_);
    exhausted_.assign(paths_.all.size(), 0);
    n_ap_list_.push_back(paths_.n_ap_dt);
    (void)initial;
  }

  double remaining_work(NodeId v) {
    if (effort_units_[v] < 0.0)
      effort_units_[v] = rng_.child(kStreamEffortBase + static_cast<uint64_t>(v))
                             .exponential(1.0);
    const double total = effort_units_[v] / rate_[v];
    return std::max(0.0, total - progress_[v]);
  }

  bool path_available(int idx) const { return !exhausted_[idx]; }

  bool pick_walk() {
    std::vector<NodeId> entries;
    for (NodeId e : topo_.entry_nodes()) {
      for (int idx : paths_.by_entry[e]) {
        if (path_available(idx)) {
          entries.push_back(e);
          break;
        }
      }
    }
    if (entries.empty()) return false;
    const NodeId entry =
        entries[select_rng_.uniform_int(entries.size())];
    std::vector<int> open;
    for (int idx : paths_.by_entry[entry])
      if (path_available(idx)) open.push_back(idx);
    const int path = open[select_rng_.uniform_int(open.size())];
    walk_ = Walk{path, 0};
    sync_walk_state();
    emit(EventKind::EntryChosen, entry, static_cast<double>(path));
    return true;
  }

  void sync_walk_state() {
    if (walk_) {
      state_.current_target_path = {paths_.all[walk_->path].nodes, walk_->pos};
    } else {
      state_.current_target_path.reset();
    }
  }

  // Attacker has nothing to do on this topology; wait for the next fixed
  // shuffle, or run out the clock when the policy is event-driven.
  void idle() {
    const double tick = policy_ ? policy_->next_tick() : kInf;
    if (tick < horizon_) {
      state_.clock = std::max(state_.clock, tick);
      fire_tick();
    } else {
      state_.clock = horizon_;
      finish(Terminal::Horizon);
    }
  }

  void finish(Terminal t) {
    terminal_ = t;
    if (t != Terminal::Horizon) emit(EventKind::SfcReached, -1,
                                     t == Terminal::Sfc1 ? 1.0 : 2.0);
  }

  void advance_pos() {
    if (!walk_) return;
    walk_->pos++;
    if (walk_->pos >= paths_.all[walk_->path].nodes.size()) {
      exhausted_[walk_->path] = 1;  // target reached; this route is spent
      walk_.reset();
    }
    sync_walk_state();
  }

  void abandon_walk() {
    walk_.reset();
    sync_walk_state();
  }

  void step() {
    const AttackPath& path = paths_.all[walk_->path];
    const NodeId v = path.nodes[walk_->pos];
    const Node& node = topo_.node(v);
    if (!node.attrs.is_decoy) {
      step_real(v);
    } else {
      step_decoy(v);
    }
  }

  void step_real(NodeId v) {
    if (state_.compromised_real.count(v)) {
      advance_pos();
      return;
    }
    const double remaining = remaining_work(v);
    if (remaining <= 0.0) {
      compromise_real(v);
      if (!terminal_ && walk_) advance_pos();
      return;
    }
    const double tick = policy_ ? policy_->next_tick() : kInf;
    const double to_tick = tick - state_.clock;
    const double to_horizon = horizon_ - state_.clock;
    if (remaining <= to_tick && remaining <= to_horizon) {
      state_.clock += remaining;
      add_progress(v, remaining);
      compromise_real(v);
      if (!terminal_ && walk_) advance_pos();
    } else if (to_tick <= to_horizon) {
      state_.clock = tick;
      add_progress(v, to_tick);
      fire_tick();
    } else {
      add_progress(v, to_horizon);
      state_.clock = horizon_;
      finish(Terminal::Horizon);
    }
  }

  void step_decoy(NodeId v) {
    switch (decoy_state_[v]) {
      case DecoyState::Compromised:
        advance_pos();
        return;
      case DecoyState::Recognized:
        // Routes through a recognized decoy were already retired; reaching
        // one mid-walk just abandons the attempt.
        abandon_walk();
        return;
      case DecoyState::Unseen: {
        const double p = attacker_.engagement_probability(topo_.node(v).attrs.decoy_kind);
        if (!engage_rng_.bernoulli(p)) {
          recognize_decoy(v);
          return;
        }
        decoy_state_[v] = DecoyState::Engaged;
        engaged_remaining_[v] = decoy_rng_.exponential(rate_[v]);
        emit(EventKind::DecoyEngaged, v);
        return;  // work happens on the next step
      }
      case DecoyState::Engaged: {
        const double tick = policy_ ? policy_->next_tick() : kInf;
        const double to_tick = tick - state_.clock;
        const double to_horizon = horizon_ - state_.clock;
        const double remaining = engaged_remaining_[v];
        if (remaining <= to_tick && remaining <= to_horizon) {
          state_.clock += remaining;
          engaged_remaining_[v] = 0.0;
          decoy_state_[v] = DecoyState::Compromised;
          state_.compromised_decoys.insert(v);
          emit(EventKind::DecoyCompromised, v);
          advance_pos();
        } else if (to_tick <= to_horizon) {
          state_.clock = tick;
          engaged_remaining_[v] -= to_tick;
          fire_tick();
        } else {
          state_.clock = horizon_;
          finish(Terminal::Horizon);
        }
        return;
      }
    }
  }

  void recognize_decoy(NodeId v) {
    decoy_state_[v] = DecoyState::Recognized;
    emit(EventKind::DecoyRecognized, v);
    // The attacker will not re-approach this decoy until it is redeployed.
    for (std::size_t i = 0; i < paths_.all.size(); ++i) {
      if (exhausted_[i]) continue;
      const auto& nodes = paths_.all[i].nodes;
      if (std::find(nodes.begin(), nodes.end(), v) != nodes.end()) exhausted_[i] = 1;
    }
    abandon_walk();
  }

  void add_progress(NodeId v, double dt) {
    progress_[v] += dt;
    state_.accumulated_progress[v] = progress_[v];
  }

  void compromise_real(NodeId v) {
    progress_[v] = std::max(progress_[v], effort_units_[v] >= 0.0
                                              ? effort_units_[v] / rate_[v]
                                              : progress_[v]);
    state_.accumulated_progress[v] = progress_[v];
    state_.compromised_real.insert(v);
    emit(EventKind::NodeCompromised, v);
    const SfcKind sfc = check_sfc(state_, topo_);
    if (sfc != SfcKind::None) {
      finish(sfc == SfcKind::Sfc1 ? Terminal::Sfc1 : Terminal::Sfc2);
      return;
    }
    if (detect_rng_.bernoulli(defender_.detection_confidence)) {
      state_.detected_real.insert(v);
      emit(EventKind::DetectionRaised, v);
      if (policy_) {
        auto next = policy_->on_detection(topo_, state_, policy_rng_);
        if (next) do_shuffle(std::move(*next));
      }
    }
  }

  void fire_tick() {
    if (!policy_) return;
    auto next = policy_->on_tick(topo_, state_, policy_rng_);
    if (next) do_shuffle(std::move(*next));
  }

  void do_shuffle(Topology next) {
    const int diff = edge_diff(topo_, next);
    shuffle_log_.events.push_back(
        {state_.clock, diff, static_cast<int>(topo_.candidate_edges.size())});
    topo_ = std::move(next);
    rebuild_paths(false);
    // The attacker loses its footholds and connections; decoys are
    // redeployed; the defender re-baselines its view of the new topology.
    state_.compromised_real.clear();
    state_.compromised_decoys.clear();
    state_.detected_real.clear();
    std::fill(decoy_state_.begin(), decoy_state_.end(), DecoyState::Unseen);
    std::fill(engaged_remaining_.begin(), engaged_remaining_.end(), 0.0);
    abandon_walk();
    if (policy_) policy_->on_shuffled(state_.clock);
    emit(EventKind::ShuffleApplied, -1, static_cast<double>(diff));
  }

  struct Walk {
    int path = -1;
    std::size_t pos = 0;
  };

  Topology topo_;
  const Catalog& catalog_;
  AttackerProfile attacker_;
  DefenderProfile defender_;
  ShufflePolicy* policy_;
  Rng rng_;
  Rng select_rng_, detect_rng_, engage_rng_, decoy_rng_, policy_rng_;
  double horizon_;

  std::vector<double> rate_;
  std::vector<double> effort_units_;  // Exp(1) units, drawn lazily per node
  std::vector<double> progress_;      // hours of effort sunk per node
  std::vector<DecoyState> decoy_state_;
  std::vector<double> engaged_remaining_;

  PathsView paths_;
  std::vector<char> exhausted_;
  std::optional<Walk> walk_;

  SystemState state_;
  std::vector<TraceEvent> events_;
  ShuffleLog shuffle_log_;
  std::vector<int> n_ap_list_;
  std::optional<Terminal> terminal_;
};

}  // namespace

EpisodeResult run_episode(const Topology& topo, const Catalog& catalog,
                          const AttackerProfile& attacker,
                          const DefenderProfile& defender, ShufflePolicy* policy,
                          Rng rng, double horizon_hours) {
  Episode ep(topo, catalog, attacker, defender, policy, rng, horizon_hours);
  return ep.run();
}

double estimate_expected_mttsf(const Topology& topo, const Catalog& catalog,
                               const AttackerProfile& attacker_estimate,
                               const DefenderProfile& defender, int runs, Rng rng,
                               double horizon_hours) {
  if (runs < 1) throw Error("estimate_expected_mttsf requires runs >= 1");
  defender.validate();
  const auto [lo, hi] = defender.estimation_error_range;
  // One shared offset keeps the emulation <= full-OS ordering intact.
  const double u = lo + rng.uniform01() * (hi - lo);
  AttackerProfile est = attacker_estimate;
  est.p_decoy_emulation = std::clamp(est.p_decoy_emulation + u, 0.0, 1.0);
  est.p_decoy_full_os = std::clamp(est.p_decoy_full_os + u, 0.0, 1.0);
  double total = 0.0;
  for (int i = 0; i < runs; ++i) {
    total += run_episode(topo, catalog, est, defender, nullptr,
                         rng.child(0x2000 + static_cast<uint64_t>(i)), horizon_hours)
                 .trace.terminal_time;
  }
  return total / runs;
}

double mttc_until_ssv(const EpisodeTrace& trace,
                      const std::vector<std::pair<double, double>>& ssv_series,
                      double target) {
  if (!(target > 0.0) || target > 1.0) throw Error("mttc target must lie in (0,1]");
  for (const auto& [time, value] : ssv_series)
    if (value >= target) return time;
  return trace.terminal_time;
}

std::string trace_to_jsonl(const EpisodeTrace& trace, const Topology& topo) {
  std::ostringstream out;
  for (const auto& e : trace.events) {
    nlohmann::ordered_json j;
    j["t"] = e.time;
    j["event"] = to_string(e.kind);
    if (e.node >= 0) j["node"] = topo.node(e.node).name;
    if (e.kind == EventKind::ShuffleApplied) j["edges_changed"] = e.value;
    if (e.kind == EventKind::SfcReached) j["sfc"] = e.value;
    out << j.dump() << "\n";
  }
  nlohmann::ordered_json fin;
  fin["t"] = trace.terminal_time;
  fin["event"] = "terminal";
  fin["terminal"] = to_string(trace.terminal);
  out << fin.dump() << "\n";
  return out.str();
}

}  // namespace mtdsim
