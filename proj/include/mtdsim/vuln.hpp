#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtdsim {

// One exploitable weakness. compromise_rate is the frequency (events per
// hour) at which an attacker successfully exploits it to gain root.
struct Vulnerability {
  std::string cve_id;
  std::optional<double> base_score;  // CVSS base score in [0, 10], if known
  double compromise_rate = 0.0;      // > 0, per hour

  bool operator==(const Vulnerability&) const = default;
};

class Catalog {
 public:
  // Throws on duplicate cve_id with conflicting data; identical re-adds
  // are accepted so that multiple catalog files can share entries.
  void add(Vulnerability v);
  void merge(const Catalog& other);

  const Vulnerability& at(const std::string& cve_id) const;
  bool contains(const std::string& cve_id) const;
  std::size_t size() const { return by_id_.size(); }

  const std::map<std::string, Vulnerability>& entries() const { return by_id_; }

 private:
  std::map<std::string, Vulnerability> by_id_;
};

// Maps a CVSS base score onto a compromise rate (per hour). Piecewise bands
// anchored at: 10.0 -> once per day, ~8 -> twice per week, ~7 -> once per
// week, ~5 -> once per ten days. Throws if score is outside [0, 10].
double rate_from_base_score(double score);

// Loads a JSON catalog file: a list of {cve_id, base_score?, compromise_rate?}.
// A missing rate is filled from the base score; a record with neither is an
// error, as are duplicates within one file.
Catalog load_catalog(const std::filesystem::path& file);
Catalog load_catalog_text(const std::string& json_text);

// Effective compromise rate of a node holding the given vulnerabilities:
// the attacker may exploit any of them, so the time to compromise is the
// minimum of independent exponentials and the rates add.
double effective_node_rate(const std::vector<std::string>& vulnerabilities,
                           const Catalog& catalog);

}  // namespace mtdsim
