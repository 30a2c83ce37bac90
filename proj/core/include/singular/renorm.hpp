#pragma once

#include <vector>

#include "singular/model.hpp"
#include "singular/solver.hpp"

namespace singular {

/// A measured on-shell value k_l(p, p) used to fix a counterterm.
struct Datum {
  double p = 0.0;
  double k = 0.0;
};

/// Reduced coupling y = cutoff^(2l+1) C of the analytic limit cycle:
///
///   y = -lambda (2l+1 - 2 nu tan(nu ln(cutoff/lambda_star)))
///              / (2l+1 + 2 nu tan(nu ln(cutoff/lambda_star)))
///
/// Throws UnsupportedChannel unless lambda > (l+1/2)^2 and PoleCondition at a
/// pole of the running.
double analytic_reduced_c0(const ModelParams& params, double cutoff,
                           double lambda_star);

/// C_l^(0)(cutoff) = analytic_reduced_c0 / cutoff^(2l+1).
double analytic_c0(const ModelParams& params, double cutoff, double lambda_star);

/// Cutoffs in [lo, hi] at which the analytic running diverges.
std::vector<double> analytic_poles(const ModelParams& params, double lambda_star,
                                   double lo, double hi);

/// Right-hand side of the RG equation,
///   cutoff dC/dcutoff = (lambda - cutoff^(2l+1) C)^2 / ((2l+1) cutoff^(2l+1)).
double beta_function(const ModelParams& params, double cutoff, double c);

/// exp(pi / nu_l): ratio of successive poles of the running.
double cycle_ratio(const ModelParams& params);

/// Lambda_* reduced to the cycle whose logarithm is closest to ln(reference).
double canonical_lambda_star(const ModelParams& params, double lambda_star,
                             double reference);

struct Calibration {
  double c = 0.0;             // fitted C_l^(0)
  double k = 0.0;             // k(p_d, p_d) from a full solve at c
  double residual = 0.0;      // |k - k_d|
  double condition = 0.0;     // condition estimate of the full solve
  bool crossed_pole = false;  // root lies across the family pole from the seed
};

struct CalibrationOptions {
  GridOptions grid{};
  double tolerance = 1e-10;  // on |k - k_d| / max(1, |k_d|)
  int max_polish = 8;
};

/// Finds C_l^(0) at `cutoff` such that the LO solve reproduces the datum.
/// For fixed cutoff the on-shell amplitude is a linear-fractional function of
/// C, so the root is unique; `seed` only decides which side of the family's
/// pole is expected, and a root on the other side is flagged in the result.
/// Throws BranchExhausted when the datum is unreachable (C infinite) and
/// DomainError when p_d >= cutoff/10.
Calibration calibrate_c0(const ModelParams& params, double cutoff,
                         const Datum& datum, double seed,
                         const CalibrationOptions& options = {});

struct RGTrajectory {
  std::vector<double> cutoffs;    // strictly increasing
  std::vector<double> couplings;  // C_l^(0)(cutoff)
  std::vector<double> reduced;    // cutoff^(2l+1) C
  std::vector<int> branches;      // cycle index of each sample
  std::vector<double> poles;      // cutoffs where the running diverges
  double lambda_star = 0.0;       // fitted, reduced to the datum's cycle
  double fit_residual = 0.0;      // rms of the clipped relative misfit
  int branch_id = 0;              // cycle index of the last sample
};

struct TraceOptions {
  CalibrationOptions calibration{};
  double pole_tolerance = 1e-10;  // on ln(cutoff) when refining poles
  double clip = 0.5;              // residual clip of the lambda_star fit
};

/// Sweeps the cutoff geometrically over [lo, hi], calibrating C at each step
/// with the previous value as seed, locates the poles of the running and
/// fits lambda_star to the analytic limit cycle.
RGTrajectory trace_limit_cycle(const ModelParams& params, const Datum& datum,
                               double lo, double hi, int samples_per_decade,
                               const TraceOptions& options = {});

/// Fits lambda_star to reduced couplings sampled at `cutoffs`. Samples close
/// to a pole are down-weighted by clipping the relative residual.
double fit_lambda_star(const ModelParams& params, const std::vector<double>& cutoffs,
                       const std::vector<double>& reduced, double clip = 0.5,
                       double* rms = nullptr);

struct BetaSample {
  double cutoff = 0.0;
  double c = 0.0;
  double measured = 0.0;   // cutoff dC/dcutoff by central differences
  double predicted = 0.0;  // beta_function(params, cutoff, c)
};

/// Central-difference estimate of cutoff dC/dcutoff from calibrations at
/// cutoff * exp(+-h).
BetaSample measure_beta(const ModelParams& params, const Datum& datum,
                        double cutoff, double seed, double h = 1e-3,
                        const CalibrationOptions& options = {});

}  // namespace singular
