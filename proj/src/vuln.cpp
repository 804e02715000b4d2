#include "mtdsim/vuln.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtdsim/error.hpp"

namespace mtdsim {

void Catalog::add(Vulnerability v) {
  if (v.cve_id.empty()) throw Error("catalog record with empty cve_id");
  if (!(v.compromise_rate > 0.0))
    throw Error("catalog record " + v.cve_id + " has non-positive compromise_rate");
  if (v.base_score && (*v.base_score < 0.0 || *v.base_score > 10.0))
    throw Error("catalog record " + v.cve_id + " has base_score outside [0,10]");
  auto it = by_id_.find(v.cve_id);
  if (it != by_id_.end()) {
    if (it->second == v) return;
    throw Error("duplicate cve_id with conflicting data: " + v.cve_id);
  }
  by_id_.emplace(v.cve_id, std::move(v));
}

void Catalog::merge(const Catalog& other) {
  for (const auto& [id, v] : other.by_id_) add(v);
}

const Vulnerability& Catalog::at(const std::string& cve_id) const {
  auto it = by_id_.find(cve_id);
  if (it == by_id_.end()) throw Error("unresolved cve_id: " + cve_id);
  return it->second;
}

bool Catalog::contains(const std::string& cve_id) const {
  return by_id_.count(cve_id) != 0;
}

double rate_from_base_score(double score) {
  if (score < 0.0 || score > 10.0)
    throw Error("base score out of range [0,10]: " + std::to_string(score));
  if (score >= 9.0) return 0.042;  // about once per day
  if (score >= 7.5) return 0.012;  // about twice per week
  if (score >= 6.0) return 0.006;  // about once per week
  return 0.004;                    // about once per ten days
}

Catalog load_catalog_text(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed catalog JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error("catalog JSON must be a list of records");
  Catalog cat;
  for (const auto& rec : doc) {
    if (!rec.is_object() || !rec.contains("cve_id"))
      throw Error("malformed catalog record: " + rec.dump());
    Vulnerability v;
    v.cve_id = rec.at("cve_id").get<std::string>();
    if (rec.contains("base_score") && !rec.at("base_score").is_null())
      v.base_score = rec.at("base_score").get<double>();
    if (rec.contains("compromise_rate") && !rec.at("compromise_rate").is_null()) {
      v.compromise_rate = rec.at("compromise_rate").get<double>();
    } else if (v.base_score) {
      v.compromise_rate = rate_from_base_score(*v.base_score);
    } else {
      throw Error("catalog record " + v.cve_id + " has neither rate nor base score");
    }
    if (cat.contains(v.cve_id)) throw Error("duplicate cve_id in catalog file: " + v.cve_id);
    cat.add(std::move(v));
  }
  return cat;
}

Catalog load_catalog(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open catalog file: " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_catalog_text(ss.str());
}

double effective_node_rate(const std::vector<std::string>& vulnerabilities,
                           const Catalog& catalog) {
  if (vulnerabilities.empty()) throw Error("node has no vulnerabilities");
  double rate = 0.0;
  for (const auto& id : vulnerabilities) rate += catalog.at(id).compromise_rate;
  return rate;
}

}  // namespace mtdsim
