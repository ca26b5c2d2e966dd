// Copyright 2026 The fanolines Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FANO_CONFIG_HPP
#define FANO_CONFIG_HPP

// JSON model files.
//
// A file holds either a single resonance,
//   { "fano": {...}, "field": {...}, "run": {...} }
// or a general model,
//   { "units": {...}, "levels": [...], "dipoles": [...], "continua": [...],
//     "dissipators": {...}, "field": {...}, "run": {...} }.
// Unknown keys are errors.

#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fano/lineshape.hpp"
#include "fano/oracle.hpp"
#include "fano/types.hpp"

namespace fano {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// start:stop with `points` samples, endpoints included.
struct Sweep {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      out[static_cast<std::size_t>(i)] =
          points == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return out;
  }
};

/// Parses "a:b:n".
inline Sweep parse_sweep(const std::string& s) {
  Sweep w;
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("sweep '" + s + "' must be start:stop:points");
  try {
    std::size_t used = 0;
    w.start = std::stod(s.substr(0, c1), &used);
    w.stop = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    w.points = std::stoi(s.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ConfigError("sweep '" + s + "' must be start:stop:points");
  }
  if (w.points < 1) throw ConfigError("sweep '" + s + "': points must be >= 1");
  return w;
}

struct RunSpec {
  std::string observable = "continuum_pop";
  std::string output;  // empty: stdout
  std::optional<DiscretizationSpec> oracle;
  std::vector<DiscretizationSpec> ladder;
};

struct ModelConfig {
  std::optional<FanoParams> fano;     // single-resonance file
  std::optional<GeneralModel> model;  // general file
  std::optional<Sweep> sweep;         // epsilon (fano) or omega_L (general)
  RunSpec run;
};

namespace detail {

inline void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

inline double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline double get_number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

inline std::size_t get_index(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  }
  return j.at(key).get<std::size_t>();
}

inline std::vector<double> get_vector(const json& j, const std::string& key, const std::string& where) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ConfigError(where + "." + key + ": expected an array");
  for (const json& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline cplx get_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(where + ": expected a number or [re, im]");
}

inline Sweep parse_sweep_json(const json& j, const std::string& where) {
  check_keys(j, where, {"start", "stop", "points"});
  Sweep s;
  s.start = get_number(j, "start", where);
  s.stop = get_number(j, "stop", where);
  if (!j.contains("points") || !j.at("points").is_number_integer()) throw ConfigError(where + ".points: expected an integer");
  s.points = j.at("points").get<int>();
  if (s.points < 1) throw ConfigError(where + ".points: must be >= 1");
  return s;
}

inline DiscretizationSpec parse_spec(const json& j, const std::string& where) {
  check_keys(j, where, {"bandwidth", "levels_per_continuum", "center", "grid_shift", "max_liouville_dim"});
  DiscretizationSpec s;
  s.bandwidth = get_number_or(j, "bandwidth", s.bandwidth, where);
  if (j.contains("levels_per_continuum")) s.levels_per_continuum = static_cast<int>(get_index(j, "levels_per_continuum", where));
  if (j.contains("center")) s.center = get_number(j, "center", where);
  s.grid_shift = get_number_or(j, "grid_shift", 0.0, where);
  if (j.contains("max_liouville_dim")) s.max_liouville_dim = get_index(j, "max_liouville_dim", where);
  return s;
}

inline json spec_to_json(const DiscretizationSpec& s) {
  json j = {{"bandwidth", s.bandwidth},
            {"levels_per_continuum", s.levels_per_continuum},
            {"grid_shift", s.grid_shift},
            {"max_liouville_dim", s.max_liouville_dim}};
  if (s.center) j["center"] = *s.center;
  return j;
}

inline FanoParams parse_fano(const json& j, const std::string& where) {
  check_keys(j, where,
             {"epsilon", "q", "Omega", "F", "mu_c", "V", "Gamma_e", "Gamma_cg", "Gamma_ce", "gamma_eg", "gamma_kg", "gamma_ke"});
  FanoParams p;
  p.epsilon = get_number_or(j, "epsilon", p.epsilon, where);
  p.q = get_number_or(j, "q", p.q, where);
  const bool field = j.contains("F") || j.contains("mu_c") || j.contains("V");
  if (field && j.contains("Omega")) throw ConfigError(where + ": give either Omega or (F, mu_c, V), not both");
  if (field) {
    const double v = get_number(j, "V", where);
    if (v == 0.0) throw ConfigError(where + ".V: must be nonzero");
    p.Omega = get_number(j, "mu_c", where) * get_number(j, "F", where) / (2.0 * v);
  } else {
    p.Omega = get_number_or(j, "Omega", p.Omega, where);
  }
  p.Gamma_e = get_number_or(j, "Gamma_e", p.Gamma_e, where);
  p.Gamma_cg = get_number_or(j, "Gamma_cg", p.Gamma_cg, where);
  p.Gamma_ce = get_number_or(j, "Gamma_ce", p.Gamma_ce, where);
  p.gamma_eg = get_number_or(j, "gamma_eg", p.gamma_eg, where);
  p.gamma_kg = get_number_or(j, "gamma_kg", p.gamma_kg, where);
  p.gamma_ke = get_number_or(j, "gamma_ke", p.gamma_ke, where);
  return p;
}

inline RunSpec parse_run(const json& j) {
  check_keys(j, "run", {"observable", "output", "oracle", "ladder"});
  RunSpec r;
  if (j.contains("observable")) {
    if (!j.at("observable").is_string()) throw ConfigError("run.observable: expected a string");
    r.observable = j.at("observable").get<std::string>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("run.output: expected a string");
    r.output = j.at("output").get<std::string>();
  }
  if (j.contains("oracle")) r.oracle = parse_spec(j.at("oracle"), "run.oracle");
  if (j.contains("ladder")) {
    if (!j.at("ladder").is_array()) throw ConfigError("run.ladder: expected an array");
    for (std::size_t i = 0; i < j.at("ladder").size(); ++i) {
      r.ladder.push_back(parse_spec(j.at("ladder")[i], "run.ladder[" + std::to_string(i) + "]"));
    }
  }
  return r;
}

inline GeneralModel parse_general(const json& doc) {
  GeneralModel m;
  if (!doc.contains("levels") || !doc.at("levels").is_array()) throw ConfigError("levels: expected an array");
  for (std::size_t i = 0; i < doc.at("levels").size(); ++i) {
    const json& l = doc.at("levels")[i];
    const std::string where = "levels[" + std::to_string(i) + "]";
    check_keys(l, where, {"energy", "photon_index"});
    Level lv;
    lv.energy = get_number(l, "energy", where);
    lv.photon_index = static_cast<int>(get_index(l, "photon_index", where));
    m.levels.push_back(lv);
  }
  const auto n = static_cast<Eigen::Index>(m.levels.size());
  m.dipoles = MatrixXc::Zero(n, n);
  if (doc.contains("dipoles")) {
    if (!doc.at("dipoles").is_array()) throw ConfigError("dipoles: expected an array");
    std::set<std::pair<std::size_t, std::size_t>> given;
    for (std::size_t k = 0; k < doc.at("dipoles").size(); ++k) {
      const json& d = doc.at("dipoles")[k];
      const std::string where = "dipoles[" + std::to_string(k) + "]";
      check_keys(d, where, {"i", "j", "value"});
      const std::size_t i = get_index(d, "i", where);
      const std::size_t j = get_index(d, "j", where);
      if (i >= m.levels.size() || j >= m.levels.size()) throw ConfigError(where + ": level index out of range");
      if (!d.contains("value")) throw ConfigError(where + ": missing 'value'");
      m.dipoles(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = get_complex(d.at("value"), where + ".value");
      given.insert({i, j});
    }
    // Entries given once stand for the Hermitian pair.
    for (const auto& [i, j] : given) {
      if (!given.count({j, i})) {
        m.dipoles(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
            std::conj(m.dipoles(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
    }
  }
  if (!doc.contains("continua") || !doc.at("continua").is_array()) throw ConfigError("continua: expected an array");
  for (std::size_t a = 0; a < doc.at("continua").size(); ++a) {
    const json& c = doc.at("continua")[a];
    const std::string where = "continua[" + std::to_string(a) + "]";
    check_keys(c, where, {"density", "couplings", "relax_rates", "pump_rates"});
    Continuum ct;
    ct.density = get_number_or(c, "density", ct.density, where);
    ct.couplings = get_vector(c, "couplings", where);
    ct.relax_rates = get_vector(c, "relax_rates", where);
    ct.pump_rates = get_vector(c, "pump_rates", where);
    m.continua.push_back(ct);
  }
  if (doc.contains("dissipators")) {
    const json& d = doc.at("dissipators");
    check_keys(d, "dissipators", {"jumps", "dephasings"});
    if (d.contains("jumps")) {
      for (std::size_t k = 0; k < d.at("jumps").size(); ++k) {
        const json& jj = d.at("jumps")[k];
        const std::string where = "dissipators.jumps[" + std::to_string(k) + "]";
        check_keys(jj, where, {"from", "to", "rate"});
        m.jumps.push_back({get_index(jj, "from", where), get_index(jj, "to", where), get_number(jj, "rate", where)});
      }
    }
    if (d.contains("dephasings")) {
      for (std::size_t k = 0; k < d.at("dephasings").size(); ++k) {
        const json& dd = d.at("dephasings")[k];
        const std::string where = "dissipators.dephasings[" + std::to_string(k) + "]";
        check_keys(dd, where, {"i", "j", "rate"});
        m.dephasings.push_back({get_index(dd, "i", where), get_index(dd, "j", where), get_number(dd, "rate", where)});
      }
    }
  }
  if (doc.contains("units")) {
    const json& u = doc.at("units");
    check_keys(u, "units", {"reference_continuum", "reference_level", "note"});
    if (u.contains("reference_continuum")) m.reference.continuum = get_index(u, "reference_continuum", "units");
    if (u.contains("reference_level")) m.reference.level = get_index(u, "reference_level", "units");
  }
  return m;
}

}  // namespace detail

inline ModelConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  ModelConfig cfg;
  if (doc.contains("fano")) {
    detail::check_keys(doc, "config", {"fano", "field", "run"});
    cfg.fano = detail::parse_fano(doc.at("fano"), "fano");
  } else {
    detail::check_keys(doc, "config", {"units", "levels", "dipoles", "continua", "dissipators", "field", "run"});
    cfg.model = detail::parse_general(doc);
  }
  if (doc.contains("field")) {
    const json& f = doc.at("field");
    if (cfg.fano) {
      detail::check_keys(f, "field", {"epsilon"});
      if (f.contains("epsilon")) cfg.sweep = detail::parse_sweep_json(f.at("epsilon"), "field.epsilon");
    } else {
      detail::check_keys(f, "field", {"omega_L"});
      if (f.contains("omega_L")) cfg.sweep = detail::parse_sweep_json(f.at("omega_L"), "field.omega_L");
    }
  }
  if (doc.contains("run")) cfg.run = detail::parse_run(doc.at("run"));
  if (cfg.model) {
    const auto v = structural_violations(*cfg.model);
    if (!v.empty()) throw ConfigError("config: " + join(v));
  }
  return cfg;
}

inline ModelConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline json to_json(const GeneralModel& m) {
  json doc;
  doc["units"] = {{"reference_continuum", m.reference.continuum}, {"reference_level", m.reference.level}};
  doc["levels"] = json::array();
  for (const Level& l : m.levels) doc["levels"].push_back({{"energy", l.energy}, {"photon_index", l.photon_index}});
  doc["dipoles"] = json::array();
  for (Eigen::Index i = 0; i < m.dipoles.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.dipoles.cols(); ++j) {
      const cplx v = m.dipoles(i, j);
      if (v == 0.0) continue;
      json value = v.imag() == 0.0 ? json(v.real()) : json::array({v.real(), v.imag()});
      doc["dipoles"].push_back({{"i", i}, {"j", j}, {"value", value}});
    }
  }
  doc["continua"] = json::array();
  for (const Continuum& c : m.continua) {
    json jc = {{"density", c.density}, {"couplings", c.couplings}, {"relax_rates", c.relax_rates}};
    if (!c.pump_rates.empty()) jc["pump_rates"] = c.pump_rates;
    doc["continua"].push_back(jc);
  }
  json jumps = json::array();
  for (const Jump& j : m.jumps) jumps.push_back({{"from", j.from}, {"to", j.to}, {"rate", j.rate}});
  json deph = json::array();
  for (const Dephasing& d : m.dephasings) deph.push_back({{"i", d.i}, {"j", d.j}, {"rate", d.rate}});
  doc["dissipators"] = {{"jumps", jumps}, {"dephasings", deph}};
  return doc;
}

inline json to_json(const FanoParams& p) {
  return {{"epsilon", p.epsilon}, {"q", p.q},           {"Omega", p.Omega},       {"Gamma_e", p.Gamma_e},
          {"Gamma_cg", p.Gamma_cg}, {"Gamma_ce", p.Gamma_ce}, {"gamma_eg", p.gamma_eg}, {"gamma_kg", p.gamma_kg},
          {"gamma_ke", p.gamma_ke}};
}

inline json to_json(const ModelConfig& cfg) {
  json doc;
  if (cfg.fano) {
    doc["fano"] = to_json(*cfg.fano);
  } else if (cfg.model) {
    doc = to_json(*cfg.model);
  }
  if (cfg.sweep) {
    const json s = {{"start", cfg.sweep->start}, {"stop", cfg.sweep->stop}, {"points", cfg.sweep->points}};
    doc["field"] = {{cfg.fano ? "epsilon" : "omega_L", s}};
  }
  json run = {{"observable", cfg.run.observable}};
  if (!cfg.run.output.empty()) run["output"] = cfg.run.output;
  if (cfg.run.oracle) run["oracle"] = detail::spec_to_json(*cfg.run.oracle);
  if (!cfg.run.ladder.empty()) {
    run["ladder"] = json::array();
    for (const auto& s : cfg.run.ladder) run["ladder"].push_back(detail::spec_to_json(s));
  }
  doc["run"] = run;
  return doc;
}

inline json to_json(const LineshapeDecomposition& d, const RationalFit& fit) {
  json j = {{"Delta", d.Delta},
            {"sigma", d.sigma},
            {"K_den", d.K_den},
            {"c0", d.c0},
            {"c1", d.c1},
            {"c2", d.c2},
            {"pure_lorentzian", d.pure_lorentzian},
            {"residual", fit.residual},
            {"condition_number", fit.condition_number},
            {"coefficients",
             {{"a0", fit.rq.a0}, {"a1", fit.rq.a1}, {"a2", fit.rq.a2}, {"b0", fit.rq.b0}, {"b1", fit.rq.b1}, {"b2", fit.rq.b2}}}};
  j["q"] = d.pure_lorentzian ? json(nullptr) : json(d.q);
  j["D"] = d.pure_lorentzian ? json(nullptr) : json(d.D);
  if (auto cq = d.complex_q()) j["q_i"] = cq->q_i;
  return j;
}

}  // namespace fano

#endif  // FANO_CONFIG_HPP
