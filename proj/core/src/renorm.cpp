#include "singular/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace singular {

namespace {

constexpr double kPi = std::numbers::pi;

struct Cycle {
  double a;       // 2l + 1
  double b;       // 2 nu
  double nu;
  double lambda;
};

Cycle cycle_of(const ModelParams& params) {
  params.validate();
  const NuIndex nu = nu_l(params);
  if (!nu.singular || !(nu.magnitude > 0.0)) {
    throw UnsupportedChannel("no limit cycle: lambda must exceed (l+1/2)^2 in wave " +
                             std::to_string(params.l));
  }
  return {2.0 * params.l + 1.0, 2.0 * nu.magnitude, nu.magnitude, params.lambda};
}

// Reduced coupling at ln(cutoff) = s; NaN at a pole.
double reduced_at(const Cycle& cy, double s, double log_star) {
  const double t = std::tan(cy.nu * (s - log_star));
  const double den = cy.a + cy.b * t;
  if (std::abs(den) <= 1e-14 * (cy.a + std::abs(cy.b * t))) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return -cy.lambda * (cy.a - cy.b * t) / den;
}

// C reproducing the datum from the contact family alone (no verification
// solve, so it stays usable arbitrarily close to a pole of the running).
double family_coupling(const ModelParams& params, double cutoff, const Datum& datum,
                       const GridOptions& options) {
  const auto grid = build_grid(cutoff, datum.p, options.nodes_per_panel, {}, options.layout);
  return ContactFamily(params, datum.p, grid).invert(datum.k);
}

}  // namespace

double analytic_reduced_c0(const ModelParams& params, double cutoff,
                           double lambda_star) {
  if (!(cutoff > 0.0) || !(lambda_star > 0.0)) {
    throw DomainError("cutoff and lambda_star must be positive");
  }
  const Cycle cy = cycle_of(params);
  const double y = reduced_at(cy, std::log(cutoff), std::log(lambda_star));
  if (std::isnan(y)) {
    throw PoleCondition("analytic running has a pole at cutoff " + std::to_string(cutoff),
                        std::numeric_limits<double>::infinity());
  }
  return y;
}

double analytic_c0(const ModelParams& params, double cutoff, double lambda_star) {
  return analytic_reduced_c0(params, cutoff, lambda_star) /
         std::pow(cutoff, 2.0 * params.l + 1.0);
}

std::vector<double> analytic_poles(const ModelParams& params, double lambda_star,
                                   double lo, double hi) {
  const Cycle cy = cycle_of(params);
  const double base = std::log(lambda_star) - std::atan(cy.a / cy.b) / cy.nu;
  const double period = kPi / cy.nu;
  std::vector<double> poles;
  const double n0 = std::ceil((std::log(lo) - base) / period);
  for (double n = n0;; n += 1.0) {
    const double s = base + n * period;
    if (s > std::log(hi)) break;
    poles.push_back(std::exp(s));
  }
  return poles;
}

double beta_function(const ModelParams& params, double cutoff, double c) {
  const double a = 2.0 * params.l + 1.0;
  const double scale = std::pow(cutoff, a);
  const double d = params.lambda - scale * c;
  return d * d / (a * scale);
}

double cycle_ratio(const ModelParams& params) {
  return std::exp(kPi / cycle_of(params).nu);
}

double canonical_lambda_star(const ModelParams& params, double lambda_star,
                             double reference) {
  const double period = kPi / cycle_of(params).nu;
  const double s = std::log(lambda_star);
  const double shift = std::round((std::log(reference) - s) / period);
  return std::exp(s + shift * period);
}

// ---------------------------------------------------------------------------

Calibration calibrate_c0(const ModelParams& params, double cutoff,
                         const Datum& datum, double seed,
                         const CalibrationOptions& options) {
  params.validate();
  if (!(datum.p > 0.0) || !(10.0 * datum.p <= cutoff)) {
    throw DomainError("datum momentum must satisfy 0 < p <= cutoff/10");
  }
  if (!std::isfinite(datum.k)) throw DomainError("datum value must be finite");

  const auto grid = build_grid(cutoff, datum.p, options.grid.nodes_per_panel, {},
                               options.grid.layout);
  const ContactFamily family(params, datum.p, grid);
  double c = family.invert(datum.k);
  if (!std::isfinite(c)) {
    throw BranchExhausted("datum k = " + std::to_string(datum.k) +
                          " is the infinite-coupling limit at cutoff " +
                          std::to_string(cutoff));
  }

  Calibration out;
  const double pole = family.pole_coupling();
  out.crossed_pole = std::isfinite(seed) && (seed - pole) * (c - pole) < 0.0;

  const double scale = std::max(1.0, std::abs(datum.k));
  const double slope_num = family.onshell_at_infinity() - family.onshell(0.0);
  for (int it = 0;; ++it) {
    CountertermSet ct;
    ct.c_lo = c;
    ct.cutoff = cutoff;
    const auto sol = solve_k(params, ct, datum.p, grid);
    out.c = c;
    out.k = sol.onshell_value;
    out.residual = std::abs(sol.onshell_value - datum.k);
    out.condition = sol.condition;
    if (out.residual <= options.tolerance * scale || it >= options.max_polish) break;
    // dk/dC of the linear-fractional family k(C) = k_inf - slope/(1 - C/pole)
    const double r = 1.0 - c / pole;
    const double dk = -slope_num / (pole * r * r);
    if (!(std::abs(dk) > 0.0)) break;
    c -= (sol.onshell_value - datum.k) / dk;
  }
  return out;
}

// ---------------------------------------------------------------------------

double fit_lambda_star(const ModelParams& params, const std::vector<double>& cutoffs,
                       const std::vector<double>& reduced, double clip, double* rms) {
  const Cycle cy = cycle_of(params);
  if (cutoffs.size() != reduced.size() || cutoffs.size() < 2) {
    throw FitError("lambda_star fit needs at least two matched samples");
  }
  const std::size_t n = cutoffs.size();
  std::vector<double> s(n);
  double sx = 0.0, cx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::log(cutoffs[i]);
    const double y = reduced[i];
    double twice_phase;
    if (std::isinf(y)) {
      twice_phase = -2.0 * std::atan(cy.a / cy.b);
    } else {
      twice_phase = 2.0 * std::atan2(cy.a * (cy.lambda + y), cy.b * (cy.lambda - y));
    }
    const double theta = 2.0 * cy.nu * s[i] - twice_phase;  // = 2 nu ln(lambda_star)
    sx += std::sin(theta);
    cx += std::cos(theta);
  }
  if (std::hypot(sx, cx) < 1e-12 * double(n)) {
    throw FitError("lambda_star phases are incoherent");
  }
  const double s0 = std::atan2(sx, cx) / (2.0 * cy.nu);

  auto cost = [&](double log_star) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y_an = reduced_at(cy, s[i], log_star);
      double r = clip;
      if (!std::isnan(y_an) && std::isfinite(reduced[i])) {
        r = std::clamp((reduced[i] - y_an) / (std::abs(reduced[i]) + cy.lambda), -clip, clip);
      }
      sum += r * r;
    }
    return sum;
  };
  const double half = kPi / (4.0 * cy.nu);
  std::uintmax_t iters = 200;
  const auto best = boost::math::tools::brent_find_minima(cost, s0 - half, s0 + half,
                                                          52, iters);
  if (rms) *rms = std::sqrt(best.second / double(n));
  return std::exp(best.first);
}

RGTrajectory trace_limit_cycle(const ModelParams& params, const Datum& datum,
                               double lo, double hi, int samples_per_decade,
                               const TraceOptions& options) {
  const Cycle cy = cycle_of(params);
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("cutoff range must satisfy 0 < lo < hi");
  if (samples_per_decade < 2) throw DomainError("need at least two samples per decade");

  const int steps = std::max(1, int(std::ceil(samples_per_decade * std::log10(hi / lo))));
  const double a = 2.0 * params.l + 1.0;

  RGTrajectory tr;
  int branch = 0;
  double seed = std::numeric_limits<double>::quiet_NaN();
  auto calibrate_at = [&](double cutoff, double sd) {
    return calibrate_c0(params, cutoff, datum, sd, options.calibration);
  };

  for (int i = 0; i <= steps; ++i) {
    const double cutoff = lo * std::pow(hi / lo, double(i) / steps);
    Calibration cal;
    try {
      cal = calibrate_at(cutoff, seed);
    } catch (const PoleCondition&) {
      continue;  // on top of a pole; the neighbours bracket it
    }
    const double y = cal.c * std::pow(cutoff, a);

    if (!tr.cutoffs.empty() && y < tr.reduced.back()) {
      // The reduced coupling grows monotonically between poles, so a drop
      // means exactly one pole in between. Locate it on the unwrapped angle
      // atan(y/lambda) + pi * (right branch).
      const double y_left = tr.reduced.back();
      auto angle = [&](double s) {
        const double cut = std::exp(s);
        const double cc = family_coupling(params, cut, datum, options.calibration.grid);
        const double yy = std::isfinite(cc) ? cc * std::pow(cut, a) : y_left;
        const double base = std::atan(yy / cy.lambda);
        return (yy >= y_left ? base : base + kPi) - kPi / 2.0;
      };
      boost::math::tools::eps_tolerance<double> tol(40);
      std::uintmax_t iters = 100;
      double s_lo = std::log(tr.cutoffs.back());
      double s_hi = std::log(cutoff);
      const auto bracket = boost::math::tools::toms748_solve(
          angle, s_lo, s_hi, std::atan(y_left / cy.lambda) - kPi / 2.0,
          std::atan(y / cy.lambda) + kPi / 2.0, tol, iters);
      tr.poles.push_back(std::exp(0.5 * (bracket.first + bracket.second)));
      ++branch;
    }

    tr.cutoffs.push_back(cutoff);
    tr.couplings.push_back(cal.c);
    tr.reduced.push_back(y);
    tr.branches.push_back(branch);
    seed = cal.c;
  }
  tr.branch_id = branch;
  const double star = fit_lambda_star(params, tr.cutoffs, tr.reduced, options.clip,
                                      &tr.fit_residual);
  tr.lambda_star = canonical_lambda_star(params, star, datum.p);
  return tr;
}

BetaSample measure_beta(const ModelParams& params, const Datum& datum,
                        double cutoff, double seed, double h,
                        const CalibrationOptions& options) {
  BetaSample out;
  out.cutoff = cutoff;
  const double c0 = calibrate_c0(params, cutoff, datum, seed, options).c;
  const double cp = calibrate_c0(params, cutoff * std::exp(h), datum, c0, options).c;
  const double cm = calibrate_c0(params, cutoff * std::exp(-h), datum, c0, options).c;
  out.c = c0;
  out.measured = (cp - cm) / (2.0 * h);
  out.predicted = beta_function(params, cutoff, c0);
  return out;
}

}  // namespace singular
