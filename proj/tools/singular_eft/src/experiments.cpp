#include "singular_cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "singular/analysis.hpp"
#include "singular/nlo.hpp"
#include "singular/renorm.hpp"
#include "singular/solver.hpp"

namespace singular::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Shared configuration handling

std::vector<KeySpec> grid_keys() {
  return {
      {"nodes_per_panel", "24", "Gauss-Legendre nodes per panel"},
      {"grading_levels", "4", "dyadic panels accumulating at the on-shell point"},
      {"map_power", "4", "endpoint map power on the panels touching p"},
      {"seed", "0", "reserved; the numerics are deterministic"},
  };
}

std::vector<KeySpec> with_grid(std::vector<KeySpec> keys) {
  for (auto& k : grid_keys()) keys.push_back(std::move(k));
  return keys;
}

ModelParams model_from(const Config& cfg) {
  ModelParams m;
  m.lambda = cfg.number("lambda");
  const double l = cfg.number("l");
  if (l < 0 || l != std::floor(l) || l > 50) throw ConfigError("l must be a non-negative integer");
  m.l = int(l);
  const auto& keys = cfg.resolved();
  if (keys.count("g")) m.g = cfg.number("g");
  if (keys.count("big_m")) m.big_m = cfg.number("big_m");
  if (!(m.lambda > 0.0)) throw ConfigError("lambda must be positive");
  try {
    m.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return m;
}

GridOptions grid_from(const Config& cfg) {
  GridOptions g;
  g.nodes_per_panel = cfg.integer("nodes_per_panel");
  g.layout.grading_levels = cfg.integer("grading_levels");
  g.layout.endpoint_map_power = cfg.integer("map_power");
  if (g.nodes_per_panel < 4 || g.nodes_per_panel > 256) {
    throw ConfigError("nodes_per_panel must lie in [4, 256]");
  }
  if (g.layout.grading_levels < 0 || g.layout.grading_levels > 16) {
    throw ConfigError("grading_levels must lie in [0, 16]");
  }
  if (g.layout.endpoint_map_power < 1 || g.layout.endpoint_map_power > 8) {
    throw ConfigError("map_power must lie in [1, 8]");
  }
  cfg.integer("seed");
  return g;
}

double positive(const Config& cfg, const std::string& key) {
  const double v = cfg.number(key);
  if (!(v > 0.0)) throw ConfigError(key + " must be positive");
  return v;
}

std::vector<double> positive_list(const Config& cfg, const std::string& key) {
  auto v = cfg.list(key);
  if (v.empty()) throw ConfigError(key + " must not be empty");
  for (double x : v) {
    if (!(x > 0.0)) throw ConfigError(key + " entries must be positive");
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_below(const std::vector<double>& momenta, const std::vector<double>& cutoffs) {
  const double pmax = *std::max_element(momenta.begin(), momenta.end());
  const double lmin = *std::min_element(cutoffs.begin(), cutoffs.end());
  if (!(10.0 * pmax <= lmin)) {
    throw ConfigError("momenta must not exceed min(cutoff)/10 (largest momentum " +
                      format_number(pmax) + ", smallest cutoff " + format_number(lmin) + ")");
  }
}

void require_s_wave(const ModelParams& m) {
  if (m.l != 0) throw ConfigError("NLO experiments are defined for l = 0 only");
}

void require_singular(const ModelParams& m) {
  const auto nu = nu_l(m);
  if (!nu.singular || !(nu.magnitude > 0.0)) {
    throw ConfigError("lambda must exceed (l+1/2)^2 for a limit cycle in this wave");
  }
}

QuadratureGrid make_grid(double cutoff, double p, const GridOptions& g) {
  return build_grid(cutoff, p, g.nodes_per_panel, {}, g.layout);
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// Relative sup-norm distance of off-shell curves from the curve at the
// largest cutoff, over x < min(cutoff) / (4p).
double offshell_disagreement(const std::vector<HalfOffShellK>& sols, double p,
                             const std::vector<double>& xs) {
  double diff = 0.0, scale = 0.0;
  const double xmax = sols.front().grid().cutoff / (4.0 * p);
  for (double x : xs) {
    if (x >= xmax) continue;
    const double ref = eval_offshell(sols.back(), p * x);
    scale = std::max(scale, std::abs(ref));
    for (const auto& s : sols) diff = std::max(diff, std::abs(eval_offshell(s, p * x) - ref));
  }
  return scale > 0.0 ? diff / scale : kNaN;
}

// ---------------------------------------------------------------------------
// lo-cutoff-scan / lo-renormalized

ExperimentResult offshell_scan(const Config& cfg, bool renormalized) {
  const auto m = model_from(cfg);
  const auto g = grid_from(cfg);
  const double p = positive(cfg, "p");
  const auto cutoffs = positive_list(cfg, "cutoffs");
  const auto xs = positive_list(cfg, "x");
  require_below({p}, cutoffs);

  std::string mode = "none";
  double lambda_star = kNaN;
  double datum_k = kNaN;
  if (renormalized) {
    require_singular(m);
    mode = cfg.text("counterterm");
    lambda_star = positive(cfg, "lambda_star");
    if (mode == "calibrated") {
      if (cfg.is_set("datum_k")) {
        datum_k = cfg.number("datum_k");
      } else {
        CountertermSet ct{analytic_c0(m, cutoffs.back(), lambda_star), 0, 0, cutoffs.back()};
        datum_k = solve_k(m, ct, p, make_grid(cutoffs.back(), p, g)).onshell_value;
      }
    } else if (mode != "analytic") {
      throw ConfigError("counterterm must be 'analytic' or 'calibrated'");
    }
  }

  ExperimentResult r{Table({"series", "cutoff", "c_lo", "x", "k"}), json::object()};
  std::vector<HalfOffShellK> sols;
  std::vector<Sample> onshell;
  std::vector<double> skipped;
  PotentialSelection select;
  select.lo_contact = renormalized;
  for (double cutoff : cutoffs) {
    try {
      double c = 0.0;
      if (mode == "analytic") {
        c = analytic_c0(m, cutoff, lambda_star);
      } else if (mode == "calibrated") {
        CalibrationOptions co;
        co.grid = g;
        c = calibrate_c0(m, cutoff, {p, datum_k}, kNaN, co).c;
      }
      auto sol = solve_k(m, CountertermSet{c, 0, 0, cutoff}, p, make_grid(cutoff, p, g), select);
      r.table.add({std::string("onshell"), cutoff, c, 1.0, sol.onshell_value});
      for (double x : xs) {
        if (p * x > cutoff) break;
        r.table.add({std::string("offshell"), cutoff, c, x, eval_offshell(sol, p * x)});
      }
      onshell.push_back({cutoff, sol.onshell_value});
      sols.push_back(std::move(sol));
    } catch (const PoleCondition&) {
      skipped.push_back(cutoff);
    }
  }

  json& s = r.summary;
  s["counterterm"] = mode;
  if (renormalized) s["lambda_star"] = lambda_star;
  if (mode == "calibrated") s["datum"] = {{"p", p}, {"k", datum_k}};
  std::vector<double> ks;
  for (const auto& o : onshell) ks.push_back(o.value);
  s["onshell_cutoffs"] = numbers([&] {
    std::vector<double> c;
    for (const auto& o : onshell) c.push_back(o.x);
    return c;
  }());
  s["onshell_k"] = numbers(ks);
  if (onshell.size() >= 4) {
    const auto v = rg_variation(onshell);
    s["onshell_spread"] = v.spread;
    s["onshell_sign_changes"] = v.sign_changes;
    s["residual_power"] = v.residual_power;
    s["power_law"] = v.power_law;
  }
  if (renormalized && sols.size() >= 2) {
    s["offshell_disagreement"] = offshell_disagreement(sols, p, xs);
  }
  s["skipped_cutoffs"] = numbers(skipped);
  return r;
}

ExperimentResult run_lo_cutoff_scan(const Config& cfg) { return offshell_scan(cfg, false); }
ExperimentResult run_lo_renormalized(const Config& cfg) { return offshell_scan(cfg, true); }

// ---------------------------------------------------------------------------
// rg-flow

ExperimentResult run_rg_flow(const Config& cfg) {
  const auto m = model_from(cfg);
  const auto g = grid_from(cfg);
  require_singular(m);
  const double lo = positive(cfg, "cutoff_min");
  const double hi = positive(cfg, "cutoff_max");
  if (!(hi > lo)) throw ConfigError("cutoff_max must exceed cutoff_min");
  const int spd = cfg.integer("samples_per_decade");
  if (spd < 2 || spd > 1000) throw ConfigError("samples_per_decade must lie in [2, 1000]");
  const double h = positive(cfg, "beta_step");
  const double lambda_star = positive(cfg, "lambda_star");
  Datum datum{positive(cfg, "datum_p"), kNaN};
  require_below({datum.p * std::exp(h)}, {lo});
  if (cfg.is_set("datum_k")) {
    datum.k = cfg.number("datum_k");
  } else {
    const double dc = positive(cfg, "datum_cutoff");
    require_below({datum.p}, {dc});
    CountertermSet ct{analytic_c0(m, dc, lambda_star), 0, 0, dc};
    datum.k = solve_k(m, ct, datum.p, make_grid(dc, datum.p, g)).onshell_value;
  }

  TraceOptions to;
  to.calibration.grid = g;
  const auto tr = trace_limit_cycle(m, datum, lo, hi, spd, to);

  ExperimentResult r{Table({"cutoff", "branch", "c_calibrated", "reduced_calibrated",
                            "c_analytic", "reduced_analytic", "beta_measured",
                            "beta_predicted"}),
                     json::object()};
  const double a = 2.0 * m.l + 1.0;
  for (std::size_t i = 0; i < tr.cutoffs.size(); ++i) {
    const double cut = tr.cutoffs[i];
    double ya = kNaN;
    try {
      ya = analytic_reduced_c0(m, cut, tr.lambda_star);
    } catch (const PoleCondition&) {
    }
    double bm = kNaN, bp = kNaN;
    try {
      const auto b = measure_beta(m, datum, cut, tr.couplings[i], h, to.calibration);
      bm = b.measured;
      bp = b.predicted;
    } catch (const PoleCondition&) {
    }
    r.table.add({cut, (long long)tr.branches[i], tr.couplings[i], tr.reduced[i],
                 ya / std::pow(cut, a), ya, bm, bp});
  }

  json& s = r.summary;
  s["datum"] = {{"p", datum.p}, {"k", datum.k}};
  s["lambda_star_fit"] = tr.lambda_star;
  s["lambda_star_config"] = lambda_star;
  s["fit_residual"] = tr.fit_residual;
  s["poles"] = numbers(tr.poles);
  s["analytic_poles"] = numbers(analytic_poles(m, tr.lambda_star, lo, hi));
  std::vector<double> spacing;
  for (std::size_t i = 1; i < tr.poles.size(); ++i) {
    spacing.push_back(std::log(tr.poles[i] / tr.poles[i - 1]));
  }
  s["pole_spacings"] = numbers(spacing);
  s["expected_spacing"] = std::numbers::pi / nu_l(m).magnitude;
  s["branches"] = tr.branch_id + 1;
  return r;
}

// ---------------------------------------------------------------------------
// nlo-x-scan / nlo-energy-scan

std::array<Datum, 2> nlo_data(const Config& cfg) {
  std::array<Datum, 2> d{Datum{positive(cfg, "datum_p"), cfg.number("datum_k")},
                         Datum{positive(cfg, "datum2_p"), cfg.number("datum2_k")}};
  if (d[0].p == d[1].p) throw ConfigError("datum_p and datum2_p must differ");
  return d;
}

json series_stats(const std::vector<double>& x) {
  if (x.empty()) return json::object();
  double mean = 0.0, tv = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean += x[i];
    if (i) tv += std::abs(x[i] - x[i - 1]);
  }
  mean /= double(x.size());
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return {{"mean", mean},
          {"min", *mn},
          {"max", *mx},
          {"total_variation_over_mean", tv / std::abs(mean)},
          {"half_amplitude_over_mean", 0.5 * (*mx - *mn) / std::abs(mean)}};
}

ExperimentResult run_nlo_x_scan(const Config& cfg) {
  const auto m = model_from(cfg);
  const auto g = grid_from(cfg);
  require_s_wave(m);
  const auto data = nlo_data(cfg);
  const double p = positive(cfg, "p");
  const auto cutoffs = positive_list(cfg, "cutoffs");
  require_below({p, data[0].p, data[1].p}, cutoffs);
  CalibrationOptions co;
  co.grid = g;

  ExperimentResult r{Table({"series", "cutoff", "c_lo", "c_nlo", "d_nlo", "k_lo",
                            "k_nlo", "X"}),
                     json::object()};
  std::vector<double> x_both, x_c, skipped;
  for (const bool with_d : {true, false}) {
    for (double cutoff : cutoffs) {
      try {
        const NLOFit fit = with_d ? calibrate_nlo(m, cutoff, data, co)
                                  : calibrate_nlo_c_only(m, cutoff, data[0], co);
        const auto ct = fit.counterterms(cutoff);
        const auto b = nlo_basis(m, ct, p, g);
        const double k1 = b.total(m.g, ct.c_nlo, ct.d_nlo);
        const double x = b.lo_value != 0.0 ? std::abs(k1 / b.lo_value) : kNaN;
        r.table.add({std::string(with_d ? "c_and_d" : "c_only"), cutoff, ct.c_lo,
                     ct.c_nlo, ct.d_nlo, b.lo_value, b.lo_value + k1, x});
        (with_d ? x_both : x_c).push_back(x);
      } catch (const PoleCondition&) {
        if (with_d) skipped.push_back(cutoff);
      }
    }
  }
  r.summary["p"] = p;
  r.summary["c_and_d"] = series_stats(x_both);
  r.summary["c_only"] = series_stats(x_c);
  r.summary["skipped_cutoffs"] = numbers(skipped);
  return r;
}

ExperimentResult run_nlo_energy_scan(const Config& cfg) {
  const auto m = model_from(cfg);
  const auto g = grid_from(cfg);
  require_s_wave(m);
  const auto data = nlo_data(cfg);
  const auto cutoffs = positive_list(cfg, "cutoffs");
  const auto momenta = positive_list(cfg, "momenta");
  require_below(momenta, cutoffs);
  require_below({data[0].p, data[1].p}, cutoffs);
  CalibrationOptions co;
  co.grid = g;

  ExperimentResult r{Table({"cutoff", "p", "k_lo", "k_nlo", "X"}), json::object()};
  std::vector<std::vector<double>> lo(momenta.size()), nlo(momenta.size());
  double worst_residual = 0.0;
  for (double cutoff : cutoffs) {
    const NLOFit fit = calibrate_nlo(m, cutoff, data, co);
    worst_residual = std::max({worst_residual, std::abs(fit.residuals[0]),
                               std::abs(fit.residuals[1])});
    const auto ct = fit.counterterms(cutoff);
    for (std::size_t i = 0; i < momenta.size(); ++i) {
      const auto b = nlo_basis(m, ct, momenta[i], g);
      const double k1 = b.total(m.g, ct.c_nlo, ct.d_nlo);
      const double x = b.lo_value != 0.0 ? std::abs(k1 / b.lo_value) : kNaN;
      r.table.add({cutoff, momenta[i], b.lo_value, b.lo_value + k1, x});
      lo[i].push_back(b.lo_value);
      nlo[i].push_back(b.lo_value + k1);
    }
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    return (*mx - *mn) / std::abs(mean);
  };
  double lo_spread = 0.0, nlo_spread = 0.0;
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    lo_spread = std::max(lo_spread, spread(lo[i]));
    nlo_spread = std::max(nlo_spread, spread(nlo[i]));
  }
  r.summary["max_lo_spread"] = lo_spread;
  r.summary["max_nlo_spread"] = nlo_spread;
  r.summary["max_data_residual"] = worst_residual;
  return r;
}

// ---------------------------------------------------------------------------
// born-check

ExperimentResult run_born_check(const Config& cfg) {
  const auto m = model_from(cfg);
  const auto g = grid_from(cfg);
  const auto momenta = positive_list(cfg, "momenta");
  const auto cutoffs = positive_list(cfg, "cutoffs");
  require_below(momenta, cutoffs);

  ExperimentResult r{Table({"lambda", "l", "cutoff", "p", "k", "first_born", "residual",
                            "residual_doubled", "onset_power"}),
                     json::object()};
  double worst_power = 0.0;
  for (double cutoff : cutoffs) {
    for (double p : momenta) {
      const auto b = born_check(m, p, cutoff, g);
      r.table.add({m.lambda, (long long)m.l, cutoff, p, b.k, b.first_born, b.residual,
                   b.residual_doubled, b.onset_power});
      worst_power = std::max(worst_power, std::abs(b.onset_power - 2.0));
    }
  }
  r.summary["max_onset_power_deviation"] = worst_power;
  return r;
}

// ---------------------------------------------------------------------------
// oscillation-fit

ExperimentResult run_oscillation_fit(const Config& cfg) {
  const auto m = model_from(cfg);
  const auto g = grid_from(cfg);
  require_singular(m);
  const double p = positive(cfg, "p");
  const double lambda_star = positive(cfg, "lambda_star");
  const auto cutoffs = positive_list(cfg, "cutoffs");
  require_below({p}, cutoffs);
  const double x_min = positive(cfg, "fit_x_min");
  const int count = cfg.integer("samples");
  if (count < 16) throw ConfigError("samples must be at least 16");

  ExperimentResult r{Table({"cutoff", "nu_fit", "nu_expected", "envelope_power",
                            "phase_fit", "amplitude", "lambda_star_phase", "residual",
                            "crossings", "x_min", "x_max"}),
                     json::object()};
  const double nu = nu_l(m).magnitude;
  for (double cutoff : cutoffs) {
    const double x_max = cfg.is_set("fit_x_max") ? positive(cfg, "fit_x_max")
                                                 : cutoff / (4.0 * p);
    if (!(x_max > x_min) || p * x_max > cutoff) {
      throw ConfigError("fit window must satisfy fit_x_min < fit_x_max <= cutoff/p");
    }
    CountertermSet ct{analytic_c0(m, cutoff, lambda_star), 0, 0, cutoff};
    const auto sol = solve_k(m, ct, p, make_grid(cutoff, p, g));
    const auto fit = fit_oscillation(sample_offshell(sol, x_min, x_max, count));
    const double ls = canonical_lambda_star(m, lambda_star_from_phase(fit, p), lambda_star);
    r.table.add({cutoff, fit.nu_fit, nu, fit.envelope_power, fit.phase_fit, fit.amplitude,
                 ls, fit.residual, (long long)fit.crossings, x_min, x_max});
  }
  r.summary["nu_expected"] = nu;
  r.summary["envelope_expected"] = -0.5;
  return r;
}

}  // namespace

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> registry = {
      {"lo-cutoff-scan",
       "half-off-shell k_l(px, p) per cutoff without counterterm",
       with_grid({{"lambda", "4.25", "LO strength"},
                  {"l", "1", "partial wave"},
                  {"p", "0.1", "on-shell momentum"},
                  {"cutoffs", "geom(5, 500, 21)", "cutoff list or range"},
                  {"x", "geom(0.01, 1000, 161)", "off-shell ratios p'/p"}}),
       &run_lo_cutoff_scan},
      {"lo-renormalized",
       "half-off-shell k_l(px, p) per cutoff with the LO counterterm",
       with_grid({{"lambda", "4.25", "LO strength"},
                  {"l", "1", "partial wave"},
                  {"p", "0.1", "on-shell momentum"},
                  {"cutoffs", "10, 20, 40, 80", "cutoff list or range"},
                  {"x", "geom(0.01, 1000, 161)", "off-shell ratios p'/p"},
                  {"lambda_star", "0.2", "limit-cycle scale"},
                  {"counterterm", "analytic", "analytic or calibrated"},
                  {"datum_k", "", "k(p, p) for calibrated runs; generated when empty"}}),
       &run_lo_renormalized},
      {"rg-flow",
       "calibrated limit-cycle running against the analytic form",
       with_grid({{"lambda", "4.25", "LO strength"},
                  {"l", "1", "partial wave"},
                  {"datum_p", "0.1", "datum momentum"},
                  {"datum_k", "", "datum value; generated when empty"},
                  {"datum_cutoff", "100", "cutoff at which a missing datum is generated"},
                  {"lambda_star", "0.2", "scale used to generate the datum"},
                  {"cutoff_min", "2", "lowest cutoff"},
                  {"cutoff_max", "2000", "highest cutoff"},
                  {"samples_per_decade", "10", "geometric sampling density"},
                  {"beta_step", "0.001", "step in ln(cutoff) of the beta-function differences"}}),
       &run_rg_flow},
      {"nlo-x-scan",
       "fractional NLO correction versus cutoff, with and without D",
       with_grid({{"lambda", "2", "LO strength"},
                  {"l", "0", "partial wave"},
                  {"g", "1", "NLO strength"},
                  {"big_m", "0.5", "NLO mass scale"},
                  {"datum_p", "0.1", "first datum momentum"},
                  {"datum_k", "-1.05", "first datum value"},
                  {"datum2_p", "0.15", "second datum momentum"},
                  {"datum2_k", "-0.34", "second datum value"},
                  {"p", "0.175", "momentum at which X is evaluated"},
                  {"cutoffs", "geom(5, 50, 41)", "cutoff list or range"}}),
       &run_nlo_x_scan},
      {"nlo-energy-scan",
       "LO and LO+NLO on-shell amplitudes across cutoffs",
       with_grid({{"lambda", "2", "LO strength"},
                  {"l", "0", "partial wave"},
                  {"g", "1", "NLO strength"},
                  {"big_m", "0.5", "NLO mass scale"},
                  {"datum_p", "0.1", "first datum momentum"},
                  {"datum_k", "-1.05", "first datum value"},
                  {"datum2_p", "0.15", "second datum momentum"},
                  {"datum2_k", "-0.34", "second datum value"},
                  {"cutoffs", "5.5, 6.5, 7.5, 8.5", "cutoff list or range"},
                  {"momenta", "lin(0.02, 0.2, 10)", "on-shell momenta"}}),
       &run_nlo_energy_scan},
      {"born-check",
       "weak-coupling comparison with the first Born term",
       with_grid({{"lambda", "0.001", "LO strength"},
                  {"l", "0", "partial wave"},
                  {"momenta", "0.1", "on-shell momenta"},
                  {"cutoffs", "1000", "cutoff list or range"}}),
       &run_born_check},
      {"oscillation-fit",
       "log-periodic fit of the renormalized half-off-shell amplitude",
       with_grid({{"lambda", "4.25", "LO strength"},
                  {"l", "1", "partial wave"},
                  {"p", "0.1", "on-shell momentum"},
                  {"lambda_star", "0.2", "limit-cycle scale"},
                  {"cutoffs", "100000", "cutoff list or range"},
                  {"fit_x_min", "20", "lower end of the fit window"},
                  {"fit_x_max", "", "upper end; cutoff/(4p) when empty"},
                  {"samples", "600", "geometric samples in the window"}}),
       &run_oscillation_fit},
  };
  return registry;
}

const Experiment& find_experiment(std::string_view name) {
  for (const auto& e : experiments()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : experiments()) known += (known.empty() ? "" : ", ") + e.name;
  throw ConfigError("unknown experiment '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace singular::cli
