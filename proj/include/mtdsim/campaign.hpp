#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mtdsim/attacker.hpp"
#include "mtdsim/metrics.hpp"
#include "mtdsim/net.hpp"
#include "mtdsim/optimizer.hpp"

namespace mtdsim {

enum class Trigger { Fixed, Adaptive };
enum class Selector { Random, Ga };

enum class Scheme { FsRnt, AsRnt, FsGant, AsGant };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);
Trigger trigger_of(Scheme s);
Selector selector_of(Scheme s);

// Campaign configuration: the scenario plus every simulation knob. Loaded
// from a JSON config file (schema in the README); all randomness derives
// from master_seed.
struct CampaignConfig {
  ScenarioSpec scenario;
  Catalog catalog;
  AttackerProfile attacker;
  DefenderProfile defender;
  SsvParams ssv;
  GaParams ga;
  FitnessWeights fitness_weights;
  double p_rewire = 0.5;
  double fixed_interval_hours = 24.0;
  int eval_runs = 100;  // episodes per GA candidate evaluation
  int sims = 100;
  uint64_t master_seed = 1;
  double horizon_hours = 20000.0;
  std::vector<Scheme> schemes{Scheme::FsRnt, Scheme::AsRnt, Scheme::FsGant,
                              Scheme::AsGant};
  bool ga_reuse_unchanged = false;  // reuse GA optimum while detections unchanged
  bool ga_warm_start = false;       // seed GA with the previous final population

  std::string canonical_json;  // normalized config text, hashed into reports

  void validate() const;
};

CampaignConfig load_config(const std::filesystem::path& file);

// Reduced evaluation budget for desk runs: smaller GA population/generation
// counts and fewer episodes per candidate evaluation.
void apply_fast_profile(CampaignConfig& config);

struct SimRow {
  Scheme scheme = Scheme::FsRnt;
  uint64_t seed = 0;
  double mttsf_hours = 0.0;
  int shuffle_count = 0;
  long total_cost = 0;
  double cost_per_hour = 0.0;
  double mean_n_ap_dt = 0.0;
  Terminal terminal = Terminal::Horizon;

  bool operator==(const SimRow&) const = default;
};

struct SchemeAggregate {
  Scheme scheme = Scheme::FsRnt;
  int sims = 0;
  int horizon_runs = 0;
  double mean_mttsf_hours = 0.0;
  double mean_n_ap_dt = 0.0;
  double mean_cost_per_hour = 0.0;

  bool operator==(const SchemeAggregate&) const = default;
};

struct CampaignResult {
  std::vector<SimRow> rows;
  std::vector<SchemeAggregate> aggregates;
  uint64_t master_seed = 0;
  uint64_t config_hash = 0;
  double wall_seconds = 0.0;  // informational; excluded from reports/equality

  bool operator==(const CampaignResult& o) const {
    return rows == o.rows && aggregates == o.aggregates &&
           master_seed == o.master_seed && config_hash == o.config_hash;
  }
};

struct SimOutcome {
  SimRow row;
  EpisodeResult episode;
};

// One full attacker campaign under the scheme's shuffle policy.
SimOutcome run_scheme_simulation(const CampaignConfig& config, Scheme scheme,
                                 int sim_index);

// Runs every configured scheme `sims` times with derived seeds and
// aggregates the reported metrics. parallelism: 0 = hardware default,
// 1 = serial; results are identical for any value.
CampaignResult run_campaign(const CampaignConfig& config, int parallelism = 0);

enum class ReportFormat { Csv, Json };

void emit_report(const CampaignResult& result, ReportFormat format,
                 const std::filesystem::path& path);
std::string report_to_string(const CampaignResult& result, ReportFormat format);

CampaignResult parse_report_json(const std::string& text);

// Parsed CSV report, for consistency checks.
struct CsvReport {
  std::vector<SimRow> rows;
  std::vector<SchemeAggregate> summary;
};
CsvReport parse_report_csv(const std::string& text);

}  // namespace mtdsim
