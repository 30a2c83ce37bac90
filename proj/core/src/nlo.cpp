#include "singular/nlo.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace singular {

double nlo_amplitude(const HalfOffShellK& lo, const Kernel& v1) {
  if (v1.empty()) return 0.0;
  const QuadratureGrid& grid = lo.grid();
  const KernelOperator op(v1, grid);
  const Eigen::VectorXd j = op.matrix() * lo.phi();

  const std::size_t n = grid.size();
  const double p = lo.p;
  std::vector<double> outer(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = grid.nodes[i];
    outer[i] = q * q * lo.column[i] * j[Eigen::Index(i)];
  }
  const double jp = j[Eigen::Index(n)];
  const double outer_p = p * p * lo.onshell_value * jp;
  return p * v1(p, p) - 2.0 * jp + pv_integral(grid, outer, outer_p) / p;
}

double nlo_amplitude(const HalfOffShellK& lo, const Kernel& v1,
                     const QuadratureGrid& grid) {
  const QuadratureGrid& own = lo.grid();
  if (grid.cutoff != own.cutoff || grid.onshell != own.onshell ||
      grid.nodes != own.nodes || grid.weights != own.weights) {
    throw ConfigError("NLO quadrature grid differs from the grid of the LO solution");
  }
  return nlo_amplitude(lo, v1);
}

NLOBasisAmplitudes nlo_basis(const ModelParams& params, const HalfOffShellK& lo) {
  if (params.l != 0) {
    throw UnsupportedChannel("NLO counterterms are only defined for l = 0");
  }
  ModelParams unit = params;
  unit.g = 1.0;
  NLOBasisAmplitudes b;
  b.p = lo.p;
  b.cutoff = lo.grid().cutoff;
  b.lo_value = lo.onshell_value;
  b.from_long_range = nlo_amplitude(lo, nlo_long_range_kernel(unit));
  b.from_c = nlo_amplitude(lo, nlo_contact_kernel(params, 1.0, 0.0));
  b.from_d = nlo_amplitude(lo, nlo_contact_kernel(params, 0.0, 1.0));
  return b;
}

NLOBasisAmplitudes nlo_basis(const ModelParams& params, const CountertermSet& ct,
                             double p, const GridOptions& options) {
  const auto grid = build_grid(ct.cutoff, p, options.nodes_per_panel, {}, options.layout);
  return nlo_basis(params, solve_k(params, ct, p, grid));
}

NLOFit calibrate_nlo(const ModelParams& params, double cutoff,
                     const std::array<Datum, 2>& data,
                     const CalibrationOptions& options) {
  if (data[0].p == data[1].p) throw FitError("NLO data need two distinct momenta");
  NLOFit fit;
  fit.c_lo = calibrate_c0(params, cutoff, data[0], std::numeric_limits<double>::quiet_NaN(),
                          options).c;
  const CountertermSet lo_ct{fit.c_lo, 0.0, 0.0, cutoff};
  std::array<double, 2> target{};
  for (int i = 0; i < 2; ++i) {
    fit.basis[i] = nlo_basis(params, lo_ct, data[i].p, options.grid);
    target[i] = data[i].k - fit.basis[i].lo_value -
                params.g * fit.basis[i].from_long_range;
  }
  const auto& b0 = fit.basis[0];
  const auto& b1 = fit.basis[1];
  fit.determinant = b0.from_c * b1.from_d - b1.from_c * b0.from_d;
  const double scale = std::abs(b0.from_c * b1.from_d) + std::abs(b1.from_c * b0.from_d);
  if (!(std::abs(fit.determinant) > 1e-13 * scale)) {
    throw FitError("NLO counterterm system is singular (determinant " +
                   std::to_string(fit.determinant) + ")");
  }
  auto residuals = [&] {
    for (int i = 0; i < 2; ++i) {
      const auto& b = fit.basis[i];
      fit.residuals[i] = b.lo_value + b.total(params.g, fit.c_nlo, fit.d_nlo) - data[i].k;
    }
  };
  // Cramer's rule plus iterative refinement against the cancellation in target.
  std::array<double, 2> rhs = target;
  for (int pass = 0; pass < 3; ++pass) {
    fit.c_nlo += (rhs[0] * b1.from_d - rhs[1] * b0.from_d) / fit.determinant;
    fit.d_nlo += (b0.from_c * rhs[1] - b1.from_c * rhs[0]) / fit.determinant;
    residuals();
    rhs = {-fit.residuals[0], -fit.residuals[1]};
  }
  return fit;
}

NLOFit calibrate_nlo_c_only(const ModelParams& params, double cutoff,
                            const Datum& datum, const CalibrationOptions& options) {
  NLOFit fit;
  fit.c_lo = calibrate_c0(params, cutoff, datum, std::numeric_limits<double>::quiet_NaN(),
                          options).c;
  const CountertermSet lo_ct{fit.c_lo, 0.0, 0.0, cutoff};
  const auto b = nlo_basis(params, lo_ct, datum.p, options.grid);
  if (!(std::abs(b.from_c) > 0.0)) throw FitError("C_0^(1) does not affect the datum");
  fit.c_nlo = (datum.k - b.lo_value - params.g * b.from_long_range) / b.from_c;
  fit.basis = {b, b};
  const double r = b.lo_value + b.total(params.g, fit.c_nlo, 0.0) - datum.k;
  fit.residuals = {r, r};
  return fit;
}

double fractional_correction(const ModelParams& params, const CountertermSet& ct,
                             double p, const GridOptions& options) {
  const auto b = nlo_basis(params, ct, p, options);
  if (b.lo_value == 0.0) {
    throw DomainError("LO amplitude vanishes at p = " + std::to_string(p));
  }
  return std::abs(b.total(params.g, ct.c_nlo, ct.d_nlo) / b.lo_value);
}

}  // namespace singular
