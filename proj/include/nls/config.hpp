#pragma once

// Experiment configuration: a single JSON document with nested sections.
// Unknown keys are hard errors; every numeric field is validated against
// the domain invariants before any compute starts.

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>

#include "nls/evolution.hpp"

namespace nls {

using Json = nlohmann::ordered_json;

namespace config_detail {

inline void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_or(const Json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad type for key '" + key + "'");
  }
}

template <class T>
T require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad type for key '" + key + "' in " + where);
  }
}

}  // namespace config_detail

struct GridSpec {
  std::string kind = "cartesian";  // cartesian | radial
  int n = 1024;
  double box_half_length = 30.0;   // cartesian
  double r_max = 40.0;             // radial
};

struct InitialDataSpec {
  std::string kind = "gaussian";  // ground_state_multiple | dilated_ground_state |
                                  // gaussian | file
  double c = 1.0;          // ground_state_multiple
  double eps = 0.5;        // dilated_ground_state
  double amplitude = 1.0;  // gaussian
  double width = 1.0;      // gaussian
  std::string path;        // file
};

struct DiagnosticsSpec {
  bool virial = true;
  std::string cutoff = "scattering";  // scattering | blowup
  double virial_R = 0.0;              // 0 -> half the box
  bool radial_sobolev = false;
  std::vector<double> sobolev_radii = {2.0, 4.0, 8.0};
};

struct OutputSpec {
  bool csv = true;
  bool plots = false;
};

struct SweepEntry {
  std::string name;
  Json patch;
};

struct ExperimentConfig {
  Params params;
  GridSpec grid;
  InitialDataSpec initial_data;
  EvolveControls controls;
  DiagnosticsSpec diagnostics;
  OutputSpec output;
  std::uint64_t seed = 1;
  std::vector<SweepEntry> sweep;

  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
};

inline ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  using namespace config_detail;
  reject_unknown(j, {"params", "grid", "initial_data", "controls", "diagnostics",
                     "output", "seed", "sweep"}, "config");
  ExperimentConfig c;

  const Json& jp = j.contains("params") ? j.at("params") : Json::object();
  if (!j.contains("params")) throw ConfigError("missing 'params' section");
  reject_unknown(jp, {"d", "p", "omega"}, "params");
  c.params = Params::make(require<int>(jp, "d", "params"),
                          require<double>(jp, "p", "params"),
                          require<double>(jp, "omega", "params"));

  if (j.contains("grid")) {
    const Json& jg = j.at("grid");
    reject_unknown(jg, {"kind", "n", "box_half_length", "r_max"}, "grid");
    c.grid.kind = get_or<std::string>(jg, "kind", "cartesian");
    if (c.grid.kind != "cartesian" && c.grid.kind != "radial")
      throw ConfigError("grid.kind must be 'cartesian' or 'radial'");
    c.grid.n = get_or<int>(jg, "n", c.grid.n);
    c.grid.box_half_length = get_or<double>(jg, "box_half_length", c.grid.box_half_length);
    c.grid.r_max = get_or<double>(jg, "r_max", c.grid.r_max);
  }

  if (j.contains("initial_data")) {
    const Json& ji = j.at("initial_data");
    reject_unknown(ji, {"kind", "c", "eps", "amplitude", "width", "path"}, "initial_data");
    c.initial_data.kind = require<std::string>(ji, "kind", "initial_data");
    const std::set<std::string> kinds = {"ground_state_multiple", "dilated_ground_state",
                                         "gaussian", "file"};
    if (!kinds.count(c.initial_data.kind))
      throw ConfigError("unknown initial_data.kind '" + c.initial_data.kind + "'");
    c.initial_data.c = get_or<double>(ji, "c", c.initial_data.c);
    c.initial_data.eps = get_or<double>(ji, "eps", c.initial_data.eps);
    c.initial_data.amplitude = get_or<double>(ji, "amplitude", c.initial_data.amplitude);
    c.initial_data.width = get_or<double>(ji, "width", c.initial_data.width);
    c.initial_data.path = get_or<std::string>(ji, "path", "");
    if (c.initial_data.kind == "dilated_ground_state" && !(c.initial_data.eps > 0.0))
      throw ConfigError("initial_data.eps must be positive");
    if (c.initial_data.kind == "gaussian" && !(c.initial_data.width > 0.0))
      throw ConfigError("initial_data.width must be positive");
    if (c.initial_data.kind == "file" && c.initial_data.path.empty())
      throw ConfigError("initial_data.path required for kind 'file'");
  }

  if (j.contains("controls")) {
    const Json& jc = j.at("controls");
    reject_unknown(jc, {"dt0", "t_end", "dt_floor", "blowup_gradient_factor", "adapt",
                        "snapshot_stride", "drift_budget", "dealias_23"}, "controls");
    c.controls.dt0 = get_or<double>(jc, "dt0", c.controls.dt0);
    c.controls.t_end = get_or<double>(jc, "t_end", c.controls.t_end);
    c.controls.dt_floor = get_or<double>(jc, "dt_floor", c.controls.dt_floor);
    c.controls.blowup_gradient_factor =
        get_or<double>(jc, "blowup_gradient_factor", c.controls.blowup_gradient_factor);
    std::string adapt = get_or<std::string>(jc, "adapt", "gradient");
    if (adapt == "fixed") c.controls.adapt = AdaptRule::fixed;
    else if (adapt == "gradient") c.controls.adapt = AdaptRule::gradient;
    else throw ConfigError("controls.adapt must be 'fixed' or 'gradient'");
    c.controls.snapshot_stride = get_or<int>(jc, "snapshot_stride", c.controls.snapshot_stride);
    c.controls.drift_budget = get_or<double>(jc, "drift_budget", c.controls.drift_budget);
    c.controls.dealias_23 = get_or<bool>(jc, "dealias_23", c.controls.dealias_23);
    c.controls.validate();
  }

  if (j.contains("diagnostics")) {
    const Json& jd = j.at("diagnostics");
    reject_unknown(jd, {"virial", "cutoff", "virial_R", "radial_sobolev", "sobolev_radii"},
                   "diagnostics");
    c.diagnostics.virial = get_or<bool>(jd, "virial", c.diagnostics.virial);
    c.diagnostics.cutoff = get_or<std::string>(jd, "cutoff", c.diagnostics.cutoff);
    if (c.diagnostics.cutoff != "scattering" && c.diagnostics.cutoff != "blowup")
      throw ConfigError("diagnostics.cutoff must be 'scattering' or 'blowup'");
    c.diagnostics.virial_R = get_or<double>(jd, "virial_R", c.diagnostics.virial_R);
    c.diagnostics.radial_sobolev =
        get_or<bool>(jd, "radial_sobolev", c.diagnostics.radial_sobolev);
    c.diagnostics.sobolev_radii =
        get_or<std::vector<double>>(jd, "sobolev_radii", c.diagnostics.sobolev_radii);
  }

  if (j.contains("output")) {
    const Json& jo = j.at("output");
    reject_unknown(jo, {"csv", "plots"}, "output");
    c.output.csv = get_or<bool>(jo, "csv", c.output.csv);
    c.output.plots = get_or<bool>(jo, "plots", c.output.plots);
  }

  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);

  if (j.contains("sweep")) {
    const Json& js = j.at("sweep");
    if (!js.is_array()) throw ConfigError("sweep must be an array");
    for (const auto& entry : js) {
      reject_unknown(entry, {"name", "patch"}, "sweep entry");
      SweepEntry e;
      e.name = config_detail::require<std::string>(entry, "name", "sweep entry");
      e.patch = entry.contains("patch") ? entry.at("patch") : Json::object();
      c.sweep.push_back(std::move(e));
    }
  }
  return c;
}

inline Json ExperimentConfig::to_json() const {
  Json j;
  j["params"] = {{"d", params.d}, {"p", params.p}, {"omega", params.omega}};
  j["grid"] = {{"kind", grid.kind},
               {"n", grid.n},
               {"box_half_length", grid.box_half_length},
               {"r_max", grid.r_max}};
  j["initial_data"] = {{"kind", initial_data.kind}, {"c", initial_data.c},
                       {"eps", initial_data.eps},  {"amplitude", initial_data.amplitude},
                       {"width", initial_data.width}, {"path", initial_data.path}};
  j["controls"] = {{"dt0", controls.dt0},
                   {"t_end", controls.t_end},
                   {"dt_floor", controls.dt_floor},
                   {"blowup_gradient_factor", controls.blowup_gradient_factor},
                   {"adapt", controls.adapt == AdaptRule::fixed ? "fixed" : "gradient"},
                   {"snapshot_stride", controls.snapshot_stride},
                   {"drift_budget", controls.drift_budget},
                   {"dealias_23", controls.dealias_23}};
  j["diagnostics"] = {{"virial", diagnostics.virial},
                      {"cutoff", diagnostics.cutoff},
                      {"virial_R", diagnostics.virial_R},
                      {"radial_sobolev", diagnostics.radial_sobolev},
                      {"sobolev_radii", diagnostics.sobolev_radii}};
  j["output"] = {{"csv", output.csv}, {"plots", output.plots}};
  j["seed"] = seed;
  if (!sweep.empty()) {
    Json arr = Json::array();
    for (const auto& e : sweep) arr.push_back(Json{{"name", e.name}, {"patch", e.patch}});
    j["sweep"] = arr;
  }
  return j;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  Json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return ExperimentConfig::from_json(j);
}

// merge `patch` onto the serialized base and re-validate
inline ExperimentConfig apply_patch(const ExperimentConfig& base, const Json& patch) {
  nlohmann::json merged = base.to_json();
  // strip sweep from sub-experiments
  merged.erase("sweep");
  merged.merge_patch(patch);
  return ExperimentConfig::from_json(Json(merged));
}

}  // namespace nls
