#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace gaugesurf {

using json = nlohmann::json;

// Upper entries pass when value <= threshold, lower entries (negative
// controls) when value >= threshold.
enum class Bound { Upper, Lower };

struct Entry {
  std::string name;
  std::string module;
  double value = 0.0;
  double threshold = 0.0;
  Bound bound = Bound::Upper;
  bool pass = false;
};

inline Entry make_entry(std::string name, std::string module, double value, double threshold, Bound bound = Bound::Upper) {
  Entry e{std::move(name), std::move(module), value, threshold, bound, false};
  // NaN never passes
  e.pass = bound == Bound::Upper ? value <= threshold : value >= threshold;
  return e;
}

struct Report {
  json scenario = json::object();
  std::vector<Entry> entries;
  json tables = json::object();    // refinement studies, cross-ratio tables, ...
  json artifacts = json::array();  // written files, relative to the output directory
  json extra = json::object();     // counts such as masked OBJ faces

  void add(Entry e) { entries.push_back(std::move(e)); }
  bool overall_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  std::vector<const Entry*> failing() const {
    std::vector<const Entry*> out;
    for (const auto& e : entries)
      if (!e.pass) out.push_back(&e);
    return out;
  }
};

// JSON numbers cannot carry NaN or infinity; those become strings.
inline json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json to_json(const Entry& e) {
  return json{{"name", e.name},
              {"module", e.module},
              {"value", number_or_string(e.value)},
              {"threshold", e.threshold},
              {"bound", e.bound == Bound::Upper ? "upper" : "lower"},
              {"pass", e.pass}};
}

inline json to_json(const Report& r) {
  json j;
  j["schema"] = 1;
  j["scenario"] = r.scenario;
  j["entries"] = json::array();
  for (const auto& e : r.entries) j["entries"].push_back(to_json(e));
  j["overall_pass"] = r.overall_pass();
  if (!r.tables.empty()) j["tables"] = r.tables;
  if (!r.artifacts.empty()) j["artifacts"] = r.artifacts;
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

// Every acceptance threshold in one place. Scenarios may override entries by
// name; --tol-scale loosens all of them at once.
class Tolerances {
 public:
  Tolerances() : table_(defaults()) {}

  static const std::map<std::string, double>& defaults() {
    static const std::map<std::string, double> t = {
        // sine-Gordon solver
        {"sg.ratio_window", 0.6},  // |ratio - 4|
        {"sg.max_error", 5e-3},
        {"sg.runtime_s", 5.0},
        // K-surface reconstruction
        {"ks.curvature", 1e-3},
        {"ks.cayley_hamilton", 1e-6},
        {"ks.tchebyshev", 1e-4},
        {"ks.lelieuvre", 1e-4},
        {"ks.path_defect", 1e-6},
        {"ks.runtime_s", 10.0},
        // loop connection
        {"loop.holonomy", 1e-3},
        {"loop.exact", 1e-10},
        {"loop.ratio_window", 0.6},
        {"loop.control_min", 1e-2},
        {"loop.runtime_s", 20.0},
        {"loop.sym", 1e-3},
        {"loop.lie", 1e-3},
        // Baecklund and permutability
        {"bk.constant", 1e-3},
        {"bk.curvature", 1e-2},
        {"bk.permutability", 1e-6},
        {"bk.closure", 1e-3},
        // smooth isothermic
        {"iso.ratio_window", 0.6},
        {"iso.christoffel", 1e-3},
        {"iso.involution", 1e-6},
        {"iso.invariants", 1e-3},
        {"iso.control_min", 1.0},
        {"iso.algebraic", 1e-8},
        // discrete
        {"disc.flat", 1e-9},
        {"disc.control_min", 1e-5},
        {"disc.spread", 1e-9},
        {"disc.triple", 1e-8},
        {"disc.group", 1e-8},
        {"disc.runtime_s", 10.0},
        // whole suite
        {"suite.runtime_s", 180.0},
    };
    return t;
  }

  double get(const std::string& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) throw std::out_of_range("unknown tolerance '" + key + "'");
    return it->second;
  }
  // Scaled threshold for an entry of the given bound.
  double upper(const std::string& key) const { return get(key) * scale_; }
  double lower(const std::string& key) const { return get(key) / scale_; }

  void set(const std::string& key, double v) {
    if (!table_.count(key)) throw std::out_of_range("unknown tolerance '" + key + "'");
    table_[key] = v;
  }
  void set_scale(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("tolerance scale must be positive");
    scale_ = s;
  }
  double scale() const { return scale_; }

 private:
  std::map<std::string, double> table_;
  double scale_ = 1.0;
};

}  // namespace gaugesurf
