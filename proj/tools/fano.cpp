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

// fano: command-line front end.
//
//   fano scatter  --q 1 --omega 0.01 --t 10,100,300 --eps -10:10:401
//   fano steady   --observable transport_rate --gamma-c 0.1
//   fano general  --config configs/fig5.json
//   fano decompose --coeffs 9,6,1,1,0,1
//   fano oracle   --eps 0 --gamma-c 2

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fano/fano.hpp"

namespace {

using namespace fano;

/// stdout unless a path is given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void notice(const std::string& s) { std::cerr << "# " << s << '\n'; }

struct ResonanceFlags {
  double q = 1.0;
  double omega = 0.05;
  double gamma_c = 1.0;
  double beta = 1.0;
  double gamma_e = 0.0;
  double gamma_eg = 0.0;
  double gamma_kg = 0.0;
  double gamma_ke = 0.0;
  std::string eps = "-10:10:201";
  std::string config;

  void add(CLI::App* app, bool dissipative, bool grid = true) {
    app->add_option("--q", q, "asymmetry parameter q = mu_e / (n pi mu_c)")->capture_default_str();
    app->add_option("--omega", omega, "reduced Rabi coupling Omega = mu_c F / 2V")->capture_default_str();
    if (grid) {
      app->add_option("--eps", eps, "detuning grid eps = (omega_L - E_e)/(n pi V^2) as start:stop:points")
          ->capture_default_str();
    }
    if (!dissipative) return;
    app->add_option("--gamma-c", gamma_c, "total continuum relaxation Gamma_c = Gamma_cg + Gamma_ce")
        ->capture_default_str();
    app->add_option("--beta", beta, "branching beta = Gamma_cg / Gamma_c into the ground state")->capture_default_str();
    app->add_option("--gamma-e", gamma_e, "excited-state decay Gamma_e (population relaxes at 2 Gamma_e)")
        ->capture_default_str();
    app->add_option("--gamma-eg", gamma_eg, "pure dephasing gamma_eg of the g-e coherence")->capture_default_str();
    app->add_option("--gamma-kg", gamma_kg, "continuum-ground dephasing gamma_kg (no effect in the wideband limit)")
        ->capture_default_str();
    app->add_option("--gamma-ke", gamma_ke, "continuum-excited dephasing gamma_ke (no effect in the wideband limit)")
        ->capture_default_str();
    app->add_option("--config", config, "JSON file with a 'fano' section; flags given explicitly are ignored");
  }

  FanoParams params() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ModelError("--beta must lie in [0, 1]");
    FanoParams p;
    p.q = q;
    p.Omega = omega;
    p.Gamma_cg = beta * gamma_c;
    p.Gamma_ce = (1.0 - beta) * gamma_c;
    p.Gamma_e = gamma_e;
    p.gamma_eg = gamma_eg;
    p.gamma_kg = gamma_kg;
    p.gamma_ke = gamma_ke;
    return p;
  }
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int cmd_scatter(const ResonanceFlags& f, const std::string& times, const std::string& output) {
  FanoParams p;
  p.q = f.q;
  p.Omega = f.omega;
  require_valid(p);
  const std::vector<double> eps = parse_sweep(f.eps).values();
  const std::vector<double> t = parse_list(times);
  for (double x : t)
    if (!(x >= 0.0)) throw ModelError("--t: times must be >= 0");
  const IonizationTable tab = ionization_sweep(p, eps, t);
  Output out(output);
  CsvWriter csv(out.stream(), {"epsilon", "T", "P", "dP_dt"});
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t e = 0; e < eps.size(); ++e) csv.row({eps[e], t[i], tab.P(i, e), tab.dPdt(i, e)});
  for (std::size_t i = 0; i < t.size(); ++i) {
    notice("T = " + format_double(t[i]) + ": profile flatness max/min P = " + format_double(profile_flatness(tab, i)));
  }
  return 0;
}

int cmd_steady(ResonanceFlags f, const std::string& observable, const std::string& output,
               const std::string& decomposition_path) {
  FanoParams p = f.params();
  std::vector<double> eps = parse_sweep(f.eps).values();
  std::string obs = observable;
  if (!f.config.empty()) {
    const ModelConfig cfg = load_config(f.config);
    if (!cfg.fano) throw ConfigError("steady: config has no 'fano' section");
    p = *cfg.fano;
    if (cfg.sweep) eps = cfg.sweep->values();
    obs = cfg.run.observable;
  }
  for (const std::string& s : ignored_inputs(p)) notice(s);
  const SweepResult r = lineshape_sweep(p, eps, parse_observable(obs));

  Output out(output);
  CsvWriter csv(out.stream(), {"epsilon", obs});
  for (std::size_t i = 0; i < eps.size(); ++i) csv.row({eps[i], r.values[i]});

  json summary = {{"observable", obs}, {"parameters", to_json(p)}};
  if (r.fit && r.decomposition) {
    summary["decomposition"] = to_json(*r.decomposition, *r.fit);
  } else {
    summary["decomposition"] = nullptr;
    summary["note"] = r.note;
  }
  if (r.fit) summary["residual"] = r.fit->residual;
  const std::string text = summary.dump(2);
  if (decomposition_path.empty()) {
    std::cerr << text << '\n';
  } else {
    std::ofstream js(decomposition_path);
    if (!js) throw ConfigError("cannot write '" + decomposition_path + "'");
    js << text << '\n';
  }
  return 0;
}

int cmd_general(const std::string& config, const std::string& sweep_override, const std::string& output_flag) {
  const ModelConfig cfg = load_config(config);
  if (!cfg.model) throw ConfigError("general: config has no general model (use 'steady' for a 'fano' section)");
  const GeneralModel& m = *cfg.model;
  require_valid(m);
  std::vector<double> wl;
  if (!sweep_override.empty()) {
    wl = parse_sweep(sweep_override).values();
  } else if (cfg.sweep) {
    wl = cfg.sweep->values();
  } else {
    throw ConfigError("general: no omega_L sweep (field.omega_L or --omega-l)");
  }

  const std::size_t n = m.size();
  const std::size_t nc = m.continua.size();
  std::vector<std::vector<double>> rows(wl.size());
  parallel_for(wl.size(), [&](std::size_t k) {
    const GeneralEffectiveLiouvillian g = build_general(m, wl[k]);
    const DensityMatrixP ss = general_steady_state(g);
    std::vector<double>& row = rows[k];
    row.push_back(wl[k]);
    for (std::size_t i = 0; i < n; ++i) row.push_back(ss.population(i));
    for (double pc : ss.continuum_pops) row.push_back(pc);
    row.push_back(ss.continuum_total());
    row.push_back(ss.total());
    row.push_back(absorption(g, ss));
    row.push_back(transport_rate(g, ss));
  });

  std::vector<std::string> cols{"omega_L"};
  for (std::size_t i = 0; i < n; ++i) cols.push_back("rho_" + std::to_string(i) + std::to_string(i));
  for (std::size_t a = 0; a < nc; ++a) cols.push_back("P_continuum_" + std::to_string(a));
  cols.insert(cols.end(), {"P_continuum_total", "total", "absorption", "transport_rate"});
  Output out(output_flag.empty() ? cfg.run.output : output_flag);
  CsvWriter csv(out.stream(), cols);
  for (const auto& r : rows) csv.row(r);
  return 0;
}

int cmd_decompose(const std::string& coeffs) {
  const std::vector<double> c = parse_list(coeffs);
  if (c.size() != 6) throw ConfigError("--coeffs needs a0,a1,a2,b0,b1,b2");
  const RationalQuadratic rq{c[0], c[1], c[2], c[3], c[4], c[5]};
  const LineshapeDecomposition d = decompose(rq);
  RationalFit exact;
  exact.rq = rq;
  std::cout << to_json(d, exact).dump(2) << '\n';
  return 0;
}

std::vector<DiscretizationSpec> parse_ladder(const std::string& s) {
  std::vector<DiscretizationSpec> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto c = item.find(':');
    if (c == std::string::npos) throw ConfigError("--ladder entries are W:M_k");
    DiscretizationSpec d;
    try {
      d.bandwidth = std::stod(item.substr(0, c));
      d.levels_per_continuum = std::stoi(item.substr(c + 1));
    } catch (const std::exception&) {
      throw ConfigError("--ladder entries are W:M_k");
    }
    out.push_back(d);
  }
  return out;
}

int cmd_oracle(const ResonanceFlags& f, double epsilon, double omega_l, const std::string& ladder_flag,
               const std::string& output) {
  GeneralModel model;
  double wl = 0.0;
  std::vector<DiscretizationSpec> ladder = default_ladder();
  std::string out_path = output;
  if (!f.config.empty()) {
    const ModelConfig cfg = load_config(f.config);
    if (cfg.fano) {
      FanoParams p = *cfg.fano;
      p.epsilon = epsilon;
      const ModelAtField mf = two_level_model(p);
      model = mf.model;
      wl = mf.omega_L;
    } else {
      model = *cfg.model;
      wl = omega_l;
    }
    if (!cfg.run.ladder.empty()) ladder = cfg.run.ladder;
    if (out_path.empty()) out_path = cfg.run.output;
  } else {
    FanoParams p = f.params();
    p.epsilon = epsilon;
    const ModelAtField mf = two_level_model(p);
    model = mf.model;
    wl = mf.omega_L;
  }
  if (!ladder_flag.empty()) ladder = parse_ladder(ladder_flag);

  const ConvergenceStudy st = convergence_study(model, wl, ladder);
  Output out(out_path);
  CsvWriter csv(out.stream(), {"bandwidth", "levels_per_continuum", "spacing", "P_continuum_oracle",
                               "P_continuum_analytic", "P_relative_error", "rate_oracle", "rate_analytic",
                               "rate_relative_error", "residual", "min_eigenvalue"});
  for (const ConvergenceRow& r : st.rows) {
    csv.row({r.bandwidth, static_cast<double>(r.levels), r.spacing, r.population, r.population_analytic,
             r.population_error, r.rate, r.rate_analytic, r.rate_error, r.residual, r.min_eigenvalue});
  }
  notice("fitted order (error ~ W^-p): p = " + format_double(st.fitted_order));
  notice(st.converging ? "error decreases along the ladder" : "WARNING: error does not decrease along the ladder");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Beutler-Fano lineshapes of driven discrete-continuum systems.\n"
      "Energies and rates are in units of the continuum width n*pi*V^2 (hbar = 1)."};
  app.require_subcommand(1);

  ResonanceFlags scatter_flags;
  std::string scatter_times = "10,100,300";
  std::string scatter_out;
  auto* scatter = app.add_subcommand(
      "scatter", "Ionization probability P(T) = 1 - |U_gg(T)|^2 and dP/dt from the resolvent poles");
  scatter_flags.add(scatter, false);
  scatter->add_option("--t", scatter_times, "interaction times T (units 1/(n pi V^2)), comma separated")
      ->capture_default_str();
  scatter->add_option("--output,-o", scatter_out, "CSV path (default stdout)");

  ResonanceFlags steady_flags;
  steady_flags.gamma_e = 0.1;
  std::string steady_obs = "continuum_pop";
  std::string steady_out;
  std::string steady_json;
  auto* steady = app.add_subcommand(
      "steady", "Steady state of the 4x4 effective Liouvillian over an eps grid, with a Fano + Lorentzian fit");
  steady_flags.add(steady, true);
  steady->add_option("--observable", steady_obs, "continuum_pop | transport_rate | absorption")
      ->check(CLI::IsMember({"continuum_pop", "transport_rate", "absorption"}))
      ->capture_default_str();
  steady->add_option("--output,-o", steady_out, "CSV path (default stdout)");
  steady->add_option("--decomposition", steady_json,
                     "JSON path for (Delta, sigma, q, D, residual) of the fitted lineshape (default stderr)");

  std::string general_config;
  std::string general_sweep;
  std::string general_out;
  auto* general = app.add_subcommand(
      "general", "N levels, M wideband continua: populations rho_ii, continuum populations P_a, absorption");
  general->add_option("--config", general_config, "JSON model file (levels, dipoles, continua, dissipators, field)")
      ->required()
      ->check(CLI::ExistingFile);
  general->add_option("--omega-l", general_sweep, "laser frequency sweep omega_L as start:stop:points");
  general->add_option("--output,-o", general_out, "CSV path (default run.output or stdout)");

  std::string coeffs;
  auto* dec = app.add_subcommand(
      "decompose", "Rewrite (a0 + a1 e + a2 e^2)/(b0 + b1 e + b2 e^2) as c2((e'+q)^2 + D)/(K (e'^2 + 1))");
  dec->add_option("--coeffs", coeffs, "a0,a1,a2,b0,b1,b2")->required();

  ResonanceFlags oracle_flags;
  oracle_flags.gamma_c = 2.0;
  oracle_flags.gamma_e = 0.1;
  double oracle_eps = 0.0;
  double oracle_wl = 0.0;
  std::string oracle_ladder;
  std::string oracle_out;
  auto* oracle = app.add_subcommand(
      "oracle", "Convergence of a discretized-continuum Lindblad solve toward the wideband result");
  oracle_flags.add(oracle, true, false);
  oracle->add_option("--epsilon", oracle_eps, "detuning eps for single-resonance runs")->capture_default_str();
  oracle->add_option("--omega-l", oracle_wl, "laser frequency omega_L for general-model configs")
      ->capture_default_str();
  oracle->add_option("--ladder", oracle_ladder, "discretizations W:M_k,W:M_k,... (default 50:51,100:101,200:201)");
  oracle->add_option("--output,-o", oracle_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scatter) return cmd_scatter(scatter_flags, scatter_times, scatter_out);
    if (*steady) return cmd_steady(steady_flags, steady_obs, steady_out, steady_json);
    if (*general) return cmd_general(general_config, general_sweep, general_out);
    if (*dec) return cmd_decompose(coeffs);
    if (*oracle) return cmd_oracle(oracle_flags, oracle_eps, oracle_wl, oracle_ladder, oracle_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
