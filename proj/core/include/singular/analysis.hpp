#pragma once

#include <limits>
#include <vector>

#include "singular/model.hpp"
#include "singular/solver.hpp"

namespace singular {

struct Sample {
  double x = 0.0;
  double value = 0.0;
};

/// Log-periodic fit  value ~ A x^w cos(nu ln x + phase).
struct OscillationFit {
  double nu_fit = 0.0;
  double phase_fit = 0.0;       // in (-pi, pi], with amplitude > 0
  double amplitude = 0.0;
  double envelope_power = 0.0;  // w
  double x_min = 0.0;           // fit window
  double x_max = 0.0;
  double residual = 0.0;        // rms misfit relative to the local envelope
  int crossings = 0;
  // Feature-based estimates before the least-squares refinement.
  double nu_crossings = 0.0;
  double power_extrema = 0.0;
};

/// Fits the log-periodic asymptotics to samples inside [x_min, x_max]
/// (the whole sample range when both are zero). Zero crossings located by
/// linear interpolation in ln x give nu, extrema magnitudes give the
/// envelope power, and a Levenberg-Marquardt fit refines all four
/// parameters. Throws FitError with fewer than three crossings in the window.
OscillationFit fit_oscillation(std::vector<Sample> samples, double x_min = 0.0,
                               double x_max = 0.0);

/// Lambda_* implied by the fitted phase for the form cos(nu ln(x p / Lambda_*)),
/// defined up to powers of exp(pi / nu).
double lambda_star_from_phase(const OscillationFit& fit, double p);

/// k(p x, p) on a geometric x grid of `count` points over [x_min, x_max].
std::vector<Sample> sample_offshell(const HalfOffShellK& sol, double x_min,
                                    double x_max, int count);

struct BornReport {
  double lambda = 0.0;
  double k = 0.0;              // solved k(p, p)
  double first_born = 0.0;     // -lambda / (2l+1)
  double residual = 0.0;       // k - first_born
  double residual_doubled = 0.0;  // same at 2 lambda
  double onset_power = 0.0;    // log2(residual_doubled / residual)
};

/// Compares the solved on-shell amplitude (no counterterm) with the first
/// Born term at lambda and at 2 lambda.
BornReport born_check(const ModelParams& params, double p, double cutoff,
                      const GridOptions& options = {});

struct RGVariation {
  double spread = 0.0;          // (max - min) / |median|
  double limit = 0.0;           // reference value the residual is taken from
  double residual_power = 0.0;  // n in |value - limit| ~ cutoff^-n
  int sign_changes = 0;
  bool power_law = false;       // false when the sweep does not settle
};

/// Cutoff dependence of an observable sampled at >= 4 cutoffs (x = cutoff).
/// The residual is measured from `reference` (the value at the largest
/// cutoff when NaN, that sample then being excluded from the fit). Residuals
/// of renormalized amplitudes carry a log-periodic modulation, so the power
/// is the log-log slope of their upper envelope max_{cutoff' >= cutoff}.
RGVariation rg_variation(std::vector<Sample> sweep,
                         double reference = std::numeric_limits<double>::quiet_NaN());

}  // namespace singular
