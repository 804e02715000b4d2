#include "mtdsim/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtdsim/error.hpp"
#include "mtdsim/parallel.hpp"

namespace mtdsim {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::FsRnt: return "fs-rnt";
    case Scheme::AsRnt: return "as-rnt";
    case Scheme::FsGant: return "fs-gant";
    case Scheme::AsGant: return "as-gant";
  }
  return "fs-rnt";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "fs-rnt") return Scheme::FsRnt;
  if (s == "as-rnt") return Scheme::AsRnt;
  if (s == "fs-gant") return Scheme::FsGant;
  if (s == "as-gant") return Scheme::AsGant;
  throw Error("unknown scheme: " + s);
}

Trigger trigger_of(Scheme s) {
  return (s == Scheme::FsRnt || s == Scheme::FsGant) ? Trigger::Fixed
                                                     : Trigger::Adaptive;
}

Selector selector_of(Scheme s) {
  return (s == Scheme::FsRnt || s == Scheme::AsRnt) ? Selector::Random : Selector::Ga;
}

void CampaignConfig::validate() const {
  attacker.validate();
  defender.validate();
  ssv.validate();
  ga.validate();
  fitness_weights.validate();
  if (p_rewire < 0.0 || p_rewire > 1.0) throw Error("p_rewire must lie in [0,1]");
  if (!(fixed_interval_hours > 0.0))
    throw Error("fixed shuffle interval must be positive");
  if (eval_runs < 1) throw Error("eval_runs must be >= 1");
  if (sims < 1) throw Error("simulation count must be >= 1");
  if (!(horizon_hours > 0.0)) throw Error("horizon must be positive");
  if (schemes.empty()) throw Error("at least one scheme must be configured");
}

namespace {

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open file: " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CampaignConfig load_config(const std::filesystem::path& file) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed config JSON: ") + e.what());
  }
  const auto dir = file.parent_path();
  CampaignConfig cfg;

  const auto scenario_file = doc.at("scenario_file").get<std::string>();
  cfg.scenario = load_scenario(dir / scenario_file);
  for (const auto& f : doc.at("catalog_files"))
    cfg.catalog.merge(load_catalog(dir / f.get<std::string>()));

  if (doc.contains("attacker")) {
    const auto& a = doc.at("attacker");
    cfg.attacker.p_decoy_emulation = a.value("p_decoy_emulation", 0.9);
    cfg.attacker.p_decoy_full_os = a.value("p_decoy_full_os", 1.0);
  }
  if (doc.contains("defender")) {
    const auto& d = doc.at("defender");
    cfg.defender.detection_confidence = d.value("detection_confidence", 0.95);
    if (d.contains("estimation_error_range")) {
      const auto& r = d.at("estimation_error_range");
      cfg.defender.estimation_error_range = {r.at(0).get<double>(),
                                             r.at(1).get<double>()};
    }
  }
  if (doc.contains("ssv")) {
    const auto& s = doc.at("ssv");
    cfg.ssv.w1 = s.value("w1", 0.5);
    cfg.ssv.w2 = s.value("w2", 0.5);
    cfg.ssv.k = s.value("k", 1);
    cfg.ssv.beta = s.value("beta", 0.01);
    cfg.ssv.rho = s.value("rho", 0.1);
  }
  if (doc.contains("ga")) {
    const auto& g = doc.at("ga");
    cfg.ga.population_size = g.value("population_size", 100);
    cfg.ga.max_generations = g.value("max_generations", 100);
    cfg.ga.crossover_rate = g.value("crossover_rate", 0.8);
    cfg.ga.mutation_rate = g.value("mutation_rate", 0.2);
  }
  cfg.p_rewire = doc.value("p_rewire", 0.5);
  cfg.fixed_interval_hours = doc.value("fixed_interval_hours", 24.0);
  cfg.eval_runs = doc.value("eval_runs", 100);
  cfg.sims = doc.value("sims", 100);
  cfg.master_seed = doc.value("master_seed", uint64_t{1});
  cfg.horizon_hours = doc.value("horizon_hours", 20000.0);
  cfg.ga_reuse_unchanged = doc.value("ga_reuse_unchanged", false);
  cfg.ga_warm_start = doc.value("ga_warm_start", false);
  if (doc.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : doc.at("schemes"))
      cfg.schemes.push_back(scheme_from_string(s.get<std::string>()));
  }
  cfg.canonical_json = doc.dump();
  cfg.validate();
  return cfg;
}

void apply_fast_profile(CampaignConfig& config) {
  config.eval_runs = std::min(config.eval_runs, 20);
  config.ga.population_size = std::min(config.ga.population_size, 20);
  config.ga.max_generations = std::min(config.ga.max_generations, 10);
  config.canonical_json += "#fast";
}

namespace {

// Selects the next topology at a shuffle event.
class TopologySelector {
 public:
  virtual ~TopologySelector() = default;
  virtual Topology select(const Topology& current, const SystemState& state,
                          Rng& rng) = 0;
};

class RandomSelector final : public TopologySelector {
 public:
  explicit RandomSelector(double p_rewire) : p_rewire_(p_rewire) {}
  Topology select(const Topology& current, const SystemState&, Rng& rng) override {
    return random_topology(current, p_rewire_, rng);
  }

 private:
  double p_rewire_;
};

class GaSelector final : public TopologySelector {
 public:
  GaSelector(const CampaignConfig& config) : cfg_(config) {}

  Topology select(const Topology& current, const SystemState& state,
                  Rng& rng) override {
    if (cfg_.ga_reuse_unchanged && cached_ &&
        cached_detected_ == state.detected_real &&
        cached_anchor_ == current.genome()) {
      return apply_genome(current, *cached_);
    }
    CandidateEvaluator evaluator = [this, &current](const Genome& g, Rng& r) {
      return evaluate_candidate(g, current, cfg_.catalog, cfg_.attacker, cfg_.defender,
                                cfg_.eval_runs, cfg_.horizon_hours, r);
    };
    std::vector<Genome> finals;
    const std::vector<Genome>* seeds =
        (cfg_.ga_warm_start && !warm_.empty()) ? &warm_ : nullptr;
    auto [topo, score] =
        ga_optimize(current, cfg_.ga, cfg_.fitness_weights, evaluator,
                    rng.child(++invocation_), nullptr, seeds, &finals);
    if (cfg_.ga_warm_start) warm_ = std::move(finals);
    if (cfg_.ga_reuse_unchanged) {
      cached_ = score.genome;
      cached_detected_ = state.detected_real;
      cached_anchor_ = current.genome();
    }
    return topo;
  }

 private:
  const CampaignConfig& cfg_;
  uint64_t invocation_ = 0;
  std::vector<Genome> warm_;
  std::optional<Genome> cached_;
  std::set<NodeId> cached_detected_;
  Genome cached_anchor_;
};

// Fixed-interval trigger: shuffles at every multiple of the interval.
class FixedPolicy final : public ShufflePolicy {
 public:
  FixedPolicy(double interval, TopologySelector& selector)
      : interval_(interval), selector_(selector) {}

  double next_tick() const override { return static_cast<double>(tick_) * interval_; }

  std::optional<Topology> on_tick(const Topology& current, const SystemState& state,
                                  Rng& rng) override {
    ++tick_;
    return selector_.select(current, state, rng);
  }

 private:
  double interval_;
  TopologySelector& selector_;
  long tick_ = 1;
};

// Adaptive trigger: consulted at defender detection events. The defender
// keeps a decision window of detections not yet acted on; the trigger fires
// when the window's vulnerability level rises above beta while still below
// the tolerance rho. A window at or above rho is handed off to incident
// response instead, and the window re-baselines. At most one shuffle per
// clock instant.
class AdaptivePolicy final : public ShufflePolicy {
 public:
  AdaptivePolicy(const SsvParams& ssv, TopologySelector& selector)
      : ssv_(ssv), selector_(selector) {}

  std::optional<Topology> on_detection(const Topology& current,
                                       const SystemState& state, Rng& rng) override {
    SystemState view = state;
    view.detected_real.clear();
    for (NodeId v : state.detected_real)
      if (!accounted_.count(v)) view.detected_real.insert(v);
    const double ssv = compute_ssv(view, current, ssv_);
    const double delta = ssv - prev_check_ssv_;
    checks_.push_back({state.clock, ssv});
    if (ssv >= ssv_.rho) {
      // Beyond what shuffling can absorb; hand off and re-baseline.
      accounted_ = state.detected_real;
      prev_check_ssv_ = 0.0;
      return std::nullopt;
    }
    if (delta <= ssv_.beta) {
      prev_check_ssv_ = ssv;  // not enough rise yet; keep accumulating
      return std::nullopt;
    }
    if (state.clock <= last_fire_time_) {
      // Already shuffled at this instant; absorb and wait for the clock.
      accounted_ = state.detected_real;
      prev_check_ssv_ = 0.0;
      return std::nullopt;
    }
    fired_.push_back({state.clock, ssv});
    return selector_.select(current, state, rng);
  }

  void on_shuffled(double now) override {
    accounted_.clear();
    prev_check_ssv_ = 0.0;
    last_fire_time_ = now;
  }

  const std::vector<std::pair<double, double>>& checks() const { return checks_; }
  const std::vector<std::pair<double, double>>& fired() const { return fired_; }

 private:
  SsvParams ssv_;
  TopologySelector& selector_;
  std::set<NodeId> accounted_;
  double last_fire_time_ = -1.0;
  double last_checked_ssv_ = 0.0;
  std::vector<std::pair<double, double>> checks_;
  std::vector<std::pair<double, double>> fired_;
};

uint64_t sim_seed(uint64_t master, Scheme scheme, int sim_index) {
  return hash_combine(hash_combine(master, static_cast<uint64_t>(scheme) + 0x51),
                      static_cast<uint64_t>(sim_index));
}

}  // namespace

SimOutcome run_scheme_simulation(const CampaignConfig& config, Scheme scheme,
                                 int sim_index) {
  config.validate();
  const uint64_t seed = sim_seed(config.master_seed, scheme, sim_index);
  Rng rng(seed);
  Rng deploy_rng = rng.child(1);
  Rng init_rng = rng.child(2);
  Rng episode_rng = rng.child(3);

  Topology base = build_network(config.scenario, config.catalog);
  Topology deployed =
      deploy_decoys(base, config.scenario.decoys, config.catalog, deploy_rng);

  std::unique_ptr<TopologySelector> selector;
  if (selector_of(scheme) == Selector::Random)
    selector = std::make_unique<RandomSelector>(config.p_rewire);
  else
    selector = std::make_unique<GaSelector>(config);

  // Initial deployment: a fresh random draw for both scheme families, then
  // one optimizer pass for GA-selected schemes.
  Topology initial = deployed.candidate_edges.empty()
                         ? deployed
                         : random_topology(deployed, 0.5, init_rng);
  if (selector_of(scheme) == Selector::Ga) {
    SystemState clean;
    initial = selector->select(initial, clean, init_rng);
  }

  std::unique_ptr<ShufflePolicy> policy;
  if (trigger_of(scheme) == Trigger::Fixed)
    policy = std::make_unique<FixedPolicy>(config.fixed_interval_hours, *selector);
  else
    policy = std::make_unique<AdaptivePolicy>(config.ssv, *selector);

  EpisodeResult episode =
      run_episode(initial, config.catalog, config.attacker, config.defender,
                  policy.get(), episode_rng, config.horizon_hours);

  SimOutcome out;
  out.row.scheme = scheme;
  out.row.seed = seed;
  out.row.mttsf_hours = episode.trace.terminal_time;
  out.row.shuffle_count = static_cast<int>(episode.shuffle_log.events.size());
  out.row.total_cost = defense_cost(episode.shuffle_log);
  out.row.cost_per_hour =
      out.row.mttsf_hours > 0.0
          ? defense_cost_rate(out.row.total_cost, out.row.mttsf_hours)
          : 0.0;
  double n_sum = 0.0;
  for (int n : episode.n_ap_dt_per_topology) n_sum += n;
  out.row.mean_n_ap_dt =
      episode.n_ap_dt_per_topology.empty()
          ? 0.0
          : n_sum / static_cast<double>(episode.n_ap_dt_per_topology.size());
  out.row.terminal = episode.trace.terminal;
  out.episode = std::move(episode);
  return out;
}

CampaignResult run_campaign(const CampaignConfig& config, int parallelism) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  if (parallelism >= 0) set_max_threads(parallelism);

  CampaignResult result;
  result.master_seed = config.master_seed;
  result.config_hash = mix64(std::hash<std::string>{}(config.canonical_json));

  for (Scheme scheme : config.schemes) {
    std::vector<SimRow> rows(config.sims);
    std::string failure;
    parallel_for(config.sims, [&](int i) {
      try {
        rows[i] = run_scheme_simulation(config, scheme, i).row;
      } catch (const std::exception& e) {
        // Remember one failure; rethrown below with context.
        std::string msg = std::string(to_string(scheme)) + " sim " +
                          std::to_string(i) + ": " + e.what();
#ifdef _OPENMP
#pragma omp critical
#endif
        failure = msg;
      }
    });
    if (!failure.empty()) throw Error("simulation failed: " + failure);

    SchemeAggregate agg;
    agg.scheme = scheme;
    agg.sims = config.sims;
    for (const auto& r : rows) {
      agg.mean_mttsf_hours += r.mttsf_hours;
      agg.mean_n_ap_dt += r.mean_n_ap_dt;
      agg.mean_cost_per_hour += r.cost_per_hour;
      if (r.terminal == Terminal::Horizon) agg.horizon_runs++;
    }
    agg.mean_mttsf_hours /= config.sims;
    agg.mean_n_ap_dt /= config.sims;
    agg.mean_cost_per_hour /= config.sims;
    result.aggregates.push_back(agg);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

nlohmann::ordered_json row_to_json(const SimRow& r) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(r.scheme);
  j["seed"] = r.seed;
  j["mttsf_hours"] = r.mttsf_hours;
  j["shuffle_count"] = r.shuffle_count;
  j["total_cost"] = r.total_cost;
  j["cost_per_hour"] = r.cost_per_hour;
  j["mean_n_ap_dt"] = r.mean_n_ap_dt;
  j["terminal"] = to_string(r.terminal);
  return j;
}

SimRow row_from_json(const nlohmann::ordered_json& j) {
  SimRow r;
  r.scheme = scheme_from_string(j.at("scheme").get<std::string>());
  r.seed = j.at("seed").get<uint64_t>();
  r.mttsf_hours = j.at("mttsf_hours").get<double>();
  r.shuffle_count = j.at("shuffle_count").get<int>();
  r.total_cost = j.at("total_cost").get<long>();
  r.cost_per_hour = j.at("cost_per_hour").get<double>();
  r.mean_n_ap_dt = j.at("mean_n_ap_dt").get<double>();
  const auto t = j.at("terminal").get<std::string>();
  r.terminal = t == "SFC1" ? Terminal::Sfc1
                           : (t == "SFC2" ? Terminal::Sfc2 : Terminal::Horizon);
  return r;
}

Terminal terminal_from_string(const std::string& t) {
  if (t == "SFC1") return Terminal::Sfc1;
  if (t == "SFC2") return Terminal::Sfc2;
  if (t == "horizon") return Terminal::Horizon;
  throw Error("unknown terminal: " + t);
}

}  // namespace

std::string report_to_string(const CampaignResult& result, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json doc;
    doc["master_seed"] = result.master_seed;
    doc["config_hash"] = result.config_hash;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : result.rows) doc["rows"].push_back(row_to_json(r));
    doc["aggregates"] = nlohmann::ordered_json::array();
    for (const auto& a : result.aggregates) {
      nlohmann::ordered_json j;
      j["scheme"] = to_string(a.scheme);
      j["sims"] = a.sims;
      j["horizon_runs"] = a.horizon_runs;
      j["mean_mttsf_hours"] = a.mean_mttsf_hours;
      j["mean_n_ap_dt"] = a.mean_n_ap_dt;
      j["mean_cost_per_hour"] = a.mean_cost_per_hour;
      doc["aggregates"].push_back(j);
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "scheme,seed,mttsf_hours,shuffle_count,total_cost,cost_per_hour,"
         "mean_n_ap_dt,terminal\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%llu,%.6f,%d,%ld,%.6f,%.6f,%s\n",
                  to_string(r.scheme), static_cast<unsigned long long>(r.seed),
                  r.mttsf_hours, r.shuffle_count, r.total_cost, r.cost_per_hour,
                  r.mean_n_ap_dt, to_string(r.terminal));
    out << buf;
  }
  out << "# summary\n";
  out << "scheme,sims,horizon_runs,mean_mttsf_hours,mean_n_ap_dt,mean_cost_per_hour\n";
  for (const auto& a : result.aggregates) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.6f,%.6f,%.6f\n", to_string(a.scheme),
                  a.sims, a.horizon_runs, a.mean_mttsf_hours, a.mean_n_ap_dt,
                  a.mean_cost_per_hour);
    out << buf;
  }
  return out.str();
}

void emit_report(const CampaignResult& result, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report file: " + path.string());
  out << report_to_string(result, format);
  if (!out) throw Error("failed writing report file: " + path.string());
}

CampaignResult parse_report_json(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report JSON: ") + e.what());
  }
  CampaignResult result;
  result.master_seed = doc.at("master_seed").get<uint64_t>();
  result.config_hash = doc.at("config_hash").get<uint64_t>();
  for (const auto& r : doc.at("rows")) result.rows.push_back(row_from_json(r));
  for (const auto& a : doc.at("aggregates")) {
    SchemeAggregate agg;
    agg.scheme = scheme_from_string(a.at("scheme").get<std::string>());
    agg.sims = a.at("sims").get<int>();
    agg.horizon_runs = a.at("horizon_runs").get<int>();
    agg.mean_mttsf_hours = a.at("mean_mttsf_hours").get<double>();
    agg.mean_n_ap_dt = a.at("mean_n_ap_dt").get<double>();
    agg.mean_cost_per_hour = a.at("mean_cost_per_hour").get<double>();
    result.aggregates.push_back(agg);
  }
  return result;
}

CsvReport parse_report_csv(const std::string& text) {
  CsvReport report;
  std::istringstream in(text);
  std::string line;
  bool summary = false;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "# summary") {
      summary = true;
      header = true;
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!summary) {
      if (fields.size() != 8) throw Error("malformed CSV row: " + line);
      SimRow r;
      r.scheme = scheme_from_string(fields[0]);
      r.seed = std::stoull(fields[1]);
      r.mttsf_hours = std::stod(fields[2]);
      r.shuffle_count = std::stoi(fields[3]);
      r.total_cost = std::stol(fields[4]);
      r.cost_per_hour = std::stod(fields[5]);
      r.mean_n_ap_dt = std::stod(fields[6]);
      r.terminal = terminal_from_string(fields[7]);
      report.rows.push_back(r);
    } else {
      if (fields.size() != 6) throw Error("malformed CSV summary row: " + line);
      SchemeAggregate a;
      a.scheme = scheme_from_string(fields[0]);
      a.sims = std::stoi(fields[1]);
      a.horizon_runs = std::stoi(fields[2]);
      a.mean_mttsf_hours = std::stod(fields[3]);
      a.mean_n_ap_dt = std::stod(fields[4]);
      a.mean_cost_per_hour = std::stod(fields[5]);
      report.summary.push_back(a);
    }
  }
  return report;
}

}  // namespace mtdsim
