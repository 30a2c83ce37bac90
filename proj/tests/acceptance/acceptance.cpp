// Acceptance checks for the seven primary criteria. Prints one PASS/FAIL
// line per criterion and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "singular/analysis.hpp"
#include "singular/nlo.hpp"
#include "singular/renorm.hpp"

using namespace singular;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<double> geom(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return v;
}

std::vector<double> lin(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * double(i) / (n - 1));
  return v;
}

ModelParams p_wave() {
  ModelParams m;
  m.lambda = 4.25;
  m.l = 1;
  return m;
}

ModelParams s_wave_nlo() {
  ModelParams m;
  m.lambda = 2.0;
  m.g = 1.0;
  m.big_m = 0.5;
  return m;
}

constexpr double kStar = 0.2;
constexpr double kP = 0.1;
const std::array<Datum, 2> kData{Datum{0.1, -1.05}, Datum{0.15, -0.34}};

HalfOffShellK solve(const ModelParams& m, double c, double cutoff, double p) {
  return solve_k(m, CountertermSet{c, 0.0, 0.0, cutoff}, p, build_grid(cutoff, p, 24));
}

double renormalized_c(double cutoff) { return analytic_c0(p_wave(), cutoff, kStar); }

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = double(k);
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  double d2 = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double n = double(a.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

// ---------------------------------------------------------------------------

Outcome bare_cutoff_dependence() {
  std::vector<double> k;
  int sign_changes = 0;
  for (double cutoff : geom(5.0, 500.0, 41)) {
    k.push_back(solve(p_wave(), 0.0, cutoff, kP).onshell_value);
    if (k.size() > 1 && k.back() * k[k.size() - 2] < 0.0) ++sign_changes;
  }
  auto sorted = k;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double spread = (sorted.back() - sorted.front()) / std::abs(median);
  return {sign_changes >= 2 && spread > 1.0,
          fmt("sign changes %d (need >= 2), spread/|median| %.3g (need > 1)", sign_changes,
              spread)};
}

Outcome lo_renormalization() {
  // Half-off-shell curves for cutoffs spanning a factor 4.
  const std::vector<double> cutoffs{10.0, 20.0, 40.0};
  const double x_max = cutoffs.front() / (4.0 * kP);
  const auto xs = geom(0.01, x_max, 200);
  std::vector<std::vector<double>> curves;
  for (double cutoff : cutoffs) {
    const auto sol = solve(p_wave(), renormalized_c(cutoff), cutoff, kP);
    std::vector<double> c;
    for (double x : xs) c.push_back(eval_offshell(sol, kP * x));
    curves.push_back(c);
  }
  double sup = 0.0, worst = 0.0;
  for (double v : curves.back()) sup = std::max(sup, std::abs(v));
  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        worst = std::max(worst, std::abs(curves[a][i] - curves[b][i]) / sup);
      }
    }
  }

  // On-shell residual power against a far-cutoff reference.
  const double limit = solve(p_wave(), renormalized_c(1e5), 1e5, kP).onshell_value;
  std::vector<Sample> sweep;
  for (double cutoff : geom(5.0, 320.0, 25)) {
    sweep.push_back({cutoff, solve(p_wave(), renormalized_c(cutoff), cutoff, kP).onshell_value});
  }
  const auto v = rg_variation(sweep, limit);
  const bool power_ok = v.power_law && v.residual_power >= 1.0 && v.residual_power <= 4.0;
  return {worst < 0.02 && power_ok,
          fmt("half-off-shell disagreement %.3g of sup for x < %.0f (need < 0.02); "
              "residual power %.3f (need within a factor 2 of 2)",
              worst, x_max, v.residual_power)};
}

Outcome limit_cycle() {
  const ModelParams m = p_wave();
  const double k_d = solve(m, renormalized_c(100.0), 100.0, kP).onshell_value;
  const Datum datum{kP, k_d};
  const auto tr = trace_limit_cycle(m, datum, 5.0, 5000.0, 10);

  const double period = std::numbers::pi / nu_l(m).magnitude;
  const auto poles = analytic_poles(m, tr.lambda_star, 1.0, 1e4);
  auto near_pole = [&](double cutoff) {
    for (double p : poles) {
      if (std::abs(std::log(cutoff / p)) < 0.05 * period) return true;
    }
    return false;
  };

  double worst_c = 0.0;
  int compared = 0;
  for (std::size_t i = 0; i < tr.cutoffs.size(); ++i) {
    if (near_pole(tr.cutoffs[i])) continue;
    const double y_an = analytic_reduced_c0(m, tr.cutoffs[i], tr.lambda_star);
    worst_c = std::max(worst_c, std::abs(tr.reduced[i] - y_an) / std::max(std::abs(y_an), m.lambda));
    ++compared;
  }

  double worst_spacing = tr.poles.size() >= 2 ? 0.0 : INFINITY;
  for (std::size_t i = 1; i < tr.poles.size(); ++i) {
    const double spacing = std::log(tr.poles[i] / tr.poles[i - 1]);
    worst_spacing = std::max(worst_spacing, std::abs(spacing - period) / period);
  }

  double worst_beta = 0.0;
  int betas = 0;
  for (std::size_t i = 0; i < tr.cutoffs.size(); i += 2) {
    if (near_pole(tr.cutoffs[i])) continue;
    const auto b = measure_beta(m, datum, tr.cutoffs[i], tr.couplings[i]);
    worst_beta = std::max(worst_beta, std::abs(b.measured - b.predicted) / std::abs(b.predicted));
    ++betas;
  }
  const bool pass = worst_c < 0.01 && worst_spacing < 0.01 && worst_beta < 0.01 &&
                    compared >= 10 && betas >= 5;
  return {pass, fmt("lambda_* %.6f; C vs running %.3g over %d cutoffs; %zu poles, spacing "
                    "error %.3g; beta error %.3g over %d cutoffs (each need < 0.01)",
                    tr.lambda_star, worst_c, compared, tr.poles.size(), worst_spacing,
                    worst_beta, betas)};
}

Outcome nlo_plateau() {
  const ModelParams m = s_wave_nlo();
  const double p = 0.175;
  std::vector<double> both;
  for (double cutoff : lin(5.5, 8.5, 13)) {
    both.push_back(fractional_correction(m, calibrate_nlo(m, cutoff, kData).counterterms(cutoff), p));
  }
  double variation = 0.0;
  for (std::size_t i = 1; i < both.size(); ++i) variation += std::abs(both[i] - both[i - 1]);
  const double mean_both = std::accumulate(both.begin(), both.end(), 0.0) / double(both.size());

  std::vector<double> c_only;
  for (double cutoff : geom(5.0, 50.0, 41)) {
    c_only.push_back(
        fractional_correction(m, calibrate_nlo_c_only(m, cutoff, kData[0]).counterterms(cutoff), p));
  }
  const auto [mn, mx] = std::minmax_element(c_only.begin(), c_only.end());
  const double mean_c = std::accumulate(c_only.begin(), c_only.end(), 0.0) / double(c_only.size());
  const double amplitude = 0.5 * (*mx - *mn) / mean_c;

  return {variation / mean_both < 0.1 && amplitude > 0.5,
          fmt("C and D: X(0.175) mean %.4f, total variation %.3g of mean (need < 0.1); "
              "C only: X in [%.4f, %.4f], amplitude %.3g of mean (need > 0.5)",
              mean_both, variation / mean_both, *mn, *mx, amplitude)};
}

Outcome energy_collapse() {
  const ModelParams m = s_wave_nlo();
  const std::vector<double> cutoffs{5.5, 6.5, 7.5, 8.5};
  const auto momenta = lin(0.02, 0.2, 10);
  const auto trend_momenta = lin(0.1, 0.45, 15);
  std::vector<std::vector<double>> lo(momenta.size()), total(momenta.size());
  double residual = 0.0;
  double worst_rho = 1.0;
  for (double cutoff : cutoffs) {
    const auto fit = calibrate_nlo(m, cutoff, kData);
    residual = std::max({residual, std::abs(fit.residuals[0]), std::abs(fit.residuals[1])});
    const auto ct = fit.counterterms(cutoff);
    for (std::size_t i = 0; i < momenta.size(); ++i) {
      const auto b = nlo_basis(m, ct, momenta[i]);
      lo[i].push_back(b.lo_value);
      total[i].push_back(b.lo_value + b.total(m.g, ct.c_nlo, ct.d_nlo));
    }
    std::vector<double> xs;
    for (double p : trend_momenta) xs.push_back(fractional_correction(m, ct, p));
    worst_rho = std::min(worst_rho, spearman(trend_momenta, xs));
  }
  auto worst_spread = [](const std::vector<std::vector<double>>& series) {
    double w = 0.0;
    for (const auto& v : series) {
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
      w = std::max(w, (*mx - *mn) / std::abs(mean));
    }
    return w;
  };
  const double s_lo = worst_spread(lo);
  const double s_total = worst_spread(total);
  return {s_lo < 0.02 && s_total < 0.02 && residual < 1e-8 && worst_rho >= 0.8,
          fmt("spread LO %.3g, LO+NLO %.3g (need < 0.02); data residual %.3g (need < 1e-8); "
              "rank correlation of X with p in [0.1, 0.45] %.3f (need >= 0.8)",
              s_lo, s_total, residual, worst_rho)};
}

Outcome oracle_suite() {
  double bubble = 0.0;
  ModelParams contact;
  for (double c : {-3.0, -0.05, 0.7, 11.0}) {
    for (double cutoff : {1.0, 5.5, 100.0}) {
      for (double p : {0.01, 0.1}) {
        const double exact = p * c / (1.0 + c * (cutoff + 0.5 * p * std::log((cutoff - p) / (cutoff + p))));
        bubble = std::max(bubble, std::abs(solve(contact, c, cutoff, p).onshell_value - exact) / std::abs(exact));
      }
    }
  }

  ModelParams weak;
  weak.lambda = 1e-3;
  const auto b0 = born_check(weak, 0.1, 1000.0);
  weak.l = 2;
  const auto b2 = born_check(weak, 0.1, 1000.0);
  const bool born_ok = std::abs(b0.residual) < 2.0 * b0.lambda * b0.lambda &&
                       std::abs(b0.onset_power - 2.0) < 0.1 &&
                       std::abs(b2.k - b2.first_born) < 1e-7 &&
                       std::abs(b2.onset_power - 2.0) < 0.1;

  const double pv = pv_moment(1.0, 10.0);
  const double pv_error = std::abs(pv - 0.5 * std::log(9.0 / 11.0));
  const bool pv_ok = pv_error < 1e-14 && std::abs(pv + 0.100335) < 5e-7;

  const ModelParams pw = p_wave();
  const ModelParams sw = s_wave_nlo();
  std::vector<std::pair<Kernel, double>> configs;
  std::vector<double> cutoffs;
  for (double cutoff : {5.0, 500.0}) {
    configs.push_back({assemble_kernel(pw, {0.0, 0.0, 0.0, cutoff}), kP});
    cutoffs.push_back(cutoff);
  }
  for (double cutoff : {40.0, 1e5}) {
    configs.push_back({assemble_kernel(pw, {renormalized_c(cutoff), 0.0, 0.0, cutoff}), kP});
    cutoffs.push_back(cutoff);
  }
  for (double cutoff : {5.5, 8.5}) {
    const double c = calibrate_c0(sw, cutoff, kData[0], kNaN).c;
    for (double p : {0.02, 0.175, 0.45}) {
      configs.push_back({assemble_kernel(sw, {c, 0.0, 0.0, cutoff}), p});
      cutoffs.push_back(cutoff);
    }
  }
  double doubling = 0.0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    doubling = std::max(doubling, refinement_change(configs[i].first, configs[i].second,
                                                    cutoffs[i], GridOptions{}));
  }
  return {bubble < 1e-8 && born_ok && pv_ok && doubling < 1e-6,
          fmt("bubble sum %.3g (need < 1e-8); Born residual l=0 %.3g lambda^2, onset %.3f, "
              "l=2 error %.3g; pv_moment %.9f; doubling change %.3g over %zu configurations "
              "(need < 1e-6)",
              bubble, b0.residual / (b0.lambda * b0.lambda), b0.onset_power,
              std::abs(b2.k - b2.first_born), pv, doubling, configs.size())};
}

Outcome asymptotics() {
  const double cutoff = 1e5;
  const auto sol = solve(p_wave(), renormalized_c(cutoff), cutoff, kP);
  const auto samples = sample_offshell(sol, 1.0, cutoff / kP, 600);
  const auto fit = fit_oscillation(samples, 20.0, cutoff / (4.0 * kP));
  const double nu = nu_l(p_wave()).magnitude;
  const double nu_error = std::abs(fit.nu_fit - nu) / nu;
  const double w_error = std::abs(fit.envelope_power + 0.5) / 0.5;
  return {nu_error < 0.02 && w_error < 0.05,
          fmt("nu %.5f (error %.3g, need < 0.02); envelope power %.5f (error %.3g, need < 0.05); "
              "%d crossings",
              fit.nu_fit, nu_error, fit.envelope_power, w_error, fit.crossings)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"unrenormalized P wave depends on the cutoff", bare_cutoff_dependence},
      {"LO renormalization", lo_renormalization},
      {"limit cycle", limit_cycle},
      {"NLO plateau", nlo_plateau},
      {"energy-scan collapse", energy_collapse},
      {"oracle suite", oracle_suite},
      {"asymptotics", asymptotics},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
