#pragma once

#include <array>

#include "singular/kernel.hpp"
#include "singular/model.hpp"
#include "singular/renorm.hpp"
#include "singular/solver.hpp"

namespace singular {

/// First-order distorted-wave amplitude of a perturbation v1 (reduced kernel)
/// around the solved LO column:
///
///   k1 = p v1(p, p) - 2 J(p) + (1/p) PV int dq q^2 k0(q) J(q) / (q^2 - p^2),
///   J(x) = PV int dq v1(x, q) q^2 k0(q) / (q^2 - p^2),
///
/// with J evaluated by the LO solver's operator on the same grid.
double nlo_amplitude(const HalfOffShellK& lo, const Kernel& v1);

/// Same, but insists that `grid` is the grid the LO column was solved on;
/// throws ConfigError otherwise.
double nlo_amplitude(const HalfOffShellK& lo, const Kernel& v1,
                     const QuadratureGrid& grid);

/// Per-unit-coupling NLO amplitudes at one (p, cutoff).
struct NLOBasisAmplitudes {
  double from_long_range = 0.0;  // per unit g
  double from_c = 0.0;           // per unit C_0^(1)
  double from_d = 0.0;           // per unit D_0^(1)
  double p = 0.0;
  double cutoff = 0.0;
  double lo_value = 0.0;         // k0(p, p) of the distorting solution

  double total(double g, double c1, double d1) const {
    return g * from_long_range + c1 * from_c + d1 * from_d;
  }
};

/// Basis amplitudes around an S-wave LO solution (throws UnsupportedChannel
/// for l != 0).
NLOBasisAmplitudes nlo_basis(const ModelParams& params, const HalfOffShellK& lo);

/// LO solve at (p, ct.cutoff) with ct.c_lo followed by nlo_basis.
NLOBasisAmplitudes nlo_basis(const ModelParams& params, const CountertermSet& ct,
                             double p, const GridOptions& options = {});

struct NLOFit {
  double c_lo = 0.0;
  double c_nlo = 0.0;
  double d_nlo = 0.0;
  double determinant = 0.0;               // of the 2x2 system (0 for C-only)
  std::array<double, 2> residuals{};      // k0 + k1 - target at both data
  std::array<NLOBasisAmplitudes, 2> basis{};

  CountertermSet counterterms(double cutoff) const {
    return {c_lo, c_nlo, d_nlo, cutoff};
  }
};

/// Full LO + NLO calibration at one cutoff: C_0^(0) from the first datum,
/// then (C_0^(1), D_0^(1)) from the linear system that makes k1(p1) = 0 and
/// k0(p2) + k1(p2) = k2. Throws FitError on a degenerate system.
NLOFit calibrate_nlo(const ModelParams& params, double cutoff,
                     const std::array<Datum, 2>& data,
                     const CalibrationOptions& options = {});

/// Variant with D_0^(1) fixed to zero and C_0^(1) fitted to the first datum.
NLOFit calibrate_nlo_c_only(const ModelParams& params, double cutoff,
                            const Datum& datum,
                            const CalibrationOptions& options = {});

/// X(p, cutoff) = |k1(p, p) / k0(p, p)|; throws DomainError when k0 vanishes.
double fractional_correction(const ModelParams& params, const CountertermSet& ct,
                             double p, const GridOptions& options = {});

}  // namespace singular
