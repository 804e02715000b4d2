#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mtdsim/harm.hpp"
#include "mtdsim/metrics.hpp"
#include "mtdsim/net.hpp"
#include "mtdsim/rng.hpp"
#include "mtdsim/state.hpp"
#include "mtdsim/vuln.hpp"

namespace mtdsim {

// Attacker intelligence, expressed as the probability of engaging each decoy
// class. Lower values mean the attacker spots the deception more often.
struct AttackerProfile {
  double p_decoy_emulation = 0.9;  // P for emulation-based decoys
  double p_decoy_full_os = 1.0;    // P for full-OS decoys, >= emulation

  void validate() const;
  double engagement_probability(DecoyKind kind) const;
};

struct DefenderProfile {
  double detection_confidence = 0.95;  // per-compromise detection probability
  std::pair<double, double> estimation_error_range{-0.05, 0.05};

  void validate() const;
};

enum class EventKind {
  EntryChosen,
  NodeCompromised,
  DecoyEngaged,
  DecoyRecognized,
  DecoyCompromised,
  DetectionRaised,
  ShuffleApplied,
  SfcReached,
};

const char* to_string(EventKind k);

struct TraceEvent {
  double time = 0.0;
  EventKind kind = EventKind::EntryChosen;
  NodeId node = -1;
  double value = 0.0;  // edges changed for shuffles, SFC kind for terminals

  bool operator==(const TraceEvent&) const = default;
};

enum class Terminal { Sfc1, Sfc2, Horizon };

const char* to_string(Terminal t);

struct EpisodeTrace {
  std::vector<TraceEvent> events;
  Terminal terminal = Terminal::Horizon;
  double terminal_time = 0.0;
};

// Full result of one simulated campaign: the event trace plus the shuffle
// log and the decoy-target path count of every deployed topology (initial
// deployment first).
struct EpisodeResult {
  EpisodeTrace trace;
  ShuffleLog shuffle_log;
  std::vector<int> n_ap_dt_per_topology;
  SystemState final_state;
};

// Shuffle decision hook. The engine consults it at every defender detection
// event and at its fixed ticks; returning a topology triggers a shuffle
// (attacker ejected, decoys redeployed, defender view re-baselined).
class ShufflePolicy {
 public:
  virtual ~ShufflePolicy() = default;
  // Next fixed consultation time, or +infinity when event-driven only.
  virtual double next_tick() const;
  virtual std::optional<Topology> on_tick(const Topology& current,
                                          const SystemState& state, Rng& rng);
  virtual std::optional<Topology> on_detection(const Topology& current,
                                               const SystemState& state, Rng& rng);
  virtual void on_shuffled(double now);
};

// Runs one attacker campaign on the given topology until a security failure
// condition or the horizon. The attacker repeatedly picks a random entry
// and a random attack path from it, compromises nodes along the path with
// exponentially distributed effort, engages decoys according to its
// profile, and is ejected (keeping per-node progress) whenever the policy
// shuffles. Pass a null policy for a static topology.
EpisodeResult run_episode(const Topology& topo, const Catalog& catalog,
                          const AttackerProfile& attacker,
                          const DefenderProfile& defender, ShufflePolicy* policy,
                          Rng rng, double horizon_hours);

// Defender-side estimate of the expected time to security failure for a
// fixed topology: the mean terminal time of `runs` independent shuffle-free
// episodes, with the attacker profile perturbed by a uniform draw from the
// defender's estimation error range (one shared offset, so the emulation /
// full-OS ordering is preserved).
double estimate_expected_mttsf(const Topology& topo, const Catalog& catalog,
                               const AttackerProfile& attacker_estimate,
                               const DefenderProfile& defender, int runs, Rng rng,
                               double horizon_hours);

// First time the recorded security-vulnerability series reaches `target`,
// or the trace terminal time if it never does. target must be in (0, 1].
double mttc_until_ssv(const EpisodeTrace& trace,
                      const std::vector<std::pair<double, double>>& ssv_series,
                      double target);

// Episode trace as JSON lines, one event per line.
std::string trace_to_jsonl(const EpisodeTrace& trace, const Topology& topo);

}  // namespace mtdsim
