#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "singular/errors.hpp"
#include "singular/kernel.hpp"
#include "singular/model.hpp"
#include "singular/quadrature.hpp"

namespace singular {

/// Grid resolution used by every driver that builds its own grids.
struct GridOptions {
  int nodes_per_panel = 24;
  PanelLayout layout{};
};

/// Condition number above which a solve is reported as a pole.
inline constexpr double kPoleCondition = 1e12;

/// Discretized principal-value operator
///
///   (K phi)(x) = PV int_0^cutoff dq u(x, q) phi(q) / (q^2 - p^2)
///
/// acting on phi sampled at the grid nodes plus the on-shell point (last
/// entry). Split terms are integrated separately below and above x with
/// spectral partial-integration weights; the pole is removed by subtraction
/// with the analytic moment of 1/(q^2 - p^2).
class KernelOperator {
 public:
  KernelOperator(Kernel kernel, QuadratureGrid grid);

  const Kernel& kernel() const noexcept { return kernel_; }
  const QuadratureGrid& grid() const noexcept { return grid_; }
  std::size_t unknowns() const noexcept { return grid_.size() + 1; }

  /// Row r with (K phi)(x) = r . phi, for any 0 < x <= cutoff.
  Eigen::RowVectorXd row(double x) const;

  /// Rows at every node followed by the on-shell row.
  Eigen::MatrixXd matrix() const;

  /// The points the rows of matrix() refer to (nodes, then p).
  std::vector<double> points() const;

 private:
  void add_separable(const PowerTerm& t, std::size_t term, double x,
                     Eigen::RowVectorXd& r) const;
  void add_split(const PowerTerm& t, std::size_t term, double x,
                 const std::vector<double>& left, Eigen::RowVectorXd& r) const;

  Kernel kernel_;
  QuadratureGrid grid_;
  std::vector<double> inv_;  // 1 / (q_i^2 - p^2)
  double sum_inv_ = 0.0;     // sum_i w_i inv_i
  double moment_ = 0.0;      // pv_moment(p, cutoff)
  // q_i^a and q_i^b for each term, row-major (term, node)
  std::vector<std::vector<double>> pow_a_;
  std::vector<std::vector<double>> pow_b_;
};

/// Reduced half-off-shell K matrix column k_l(q_i, p).
struct HalfOffShellK {
  ModelParams params;
  CountertermSet counterterms;
  std::shared_ptr<const KernelOperator> op;
  std::vector<double> column;  // k(q_i, p)
  double onshell_value = 0.0;  // k(p, p)
  double p = 0.0;
  double condition = 0.0;      // 1-norm condition estimate of the system

  const QuadratureGrid& grid() const { return op->grid(); }
  /// phi = q^2 k(q) at nodes, then p^2 k(p, p).
  Eigen::VectorXd phi() const;
};

/// Solve the cutoff principal-value equation
///
///   k(p', p) = p u(p', p) - PV int_0^cutoff dq q^2 u(p', q) k(q, p)/(q^2 - p^2)
///
/// for the potential assembled from `select`. Throws PoleCondition when the
/// system is numerically singular.
HalfOffShellK solve_k(const ModelParams& params, const CountertermSet& ct,
                      double p, const QuadratureGrid& grid,
                      const PotentialSelection& select = {});

/// Same, for an explicitly assembled reduced kernel.
HalfOffShellK solve_k(const Kernel& kernel, double p, const QuadratureGrid& grid);

/// k(p_out, p) from the solved column through the integral equation itself.
double eval_offshell(const HalfOffShellK& sol, double p_out);

/// delta_l = arctan(pi^2 k(p, p)).
double phase_shift(const HalfOffShellK& sol);
double phase_shift(double onshell_value);

/// PV int_0^cutoff dq f(q) / (q^2 - p^2) by subtraction, from nodal values
/// and the value at the pole.
double pv_integral(const QuadratureGrid& grid, std::span<const double> values,
                   double value_at_p);

/// Off-shell reduced K at fixed energy p^2/2m between external momenta:
/// entry (a, b) is m K(y_a, y_b) / pi^2. Column b is solved on the grid with
/// source u(x, y_b) and evaluated at y_a through the integral equation. Every
/// y must be p or a panel boundary of the grid (see build_grid's
/// panel_splits), so that the kink of column b at q = y_b falls between
/// panels; throws DomainError otherwise.
Eigen::MatrixXd solve_offshell_matrix(const Kernel& kernel, double p,
                                      const QuadratureGrid& grid,
                                      std::span<const double> momenta);

/// Convergence check: relative change of k(p, p) when the node count per
/// panel doubles. Throws ConvergenceError above `tolerance`.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double change, double condition)
      : Error(what), change_(change), condition_(condition) {}
  double change() const noexcept { return change_; }
  double condition() const noexcept { return condition_; }

 private:
  double change_;
  double condition_;
};

double refinement_change(const Kernel& kernel, double p, double cutoff,
                         const GridOptions& options);
void require_converged(const Kernel& kernel, double p, double cutoff,
                       const GridOptions& options, double tolerance = 1e-6);

/// On-shell amplitude as an exact linear-fractional function of the LO
/// contact coupling C: one factorization of the contact-free system serves
/// every C through the Sherman-Morrison identity.
class ContactFamily {
 public:
  ContactFamily(const ModelParams& params, double p, const QuadratureGrid& grid,
                const PotentialSelection& background = {});

  double onshell(double c) const;
  /// Coupling at which the on-shell amplitude is infinite-coupling limited,
  /// i.e. where 1 + C rho.z = 0 (the family's pole).
  double pole_coupling() const;
  /// k(p, p) in the limit C -> infinity.
  double onshell_at_infinity() const;
  /// Unique C reproducing k(p, p) = target (infinite when target equals the
  /// C -> infinity limit).
  double invert(double target) const;
  double condition() const noexcept { return condition_; }

 private:
  double y0_p_ = 0.0;   // contact-free k(p, p)
  double z_p_ = 0.0;    // response vector at p
  double sigma_ = 0.0;  // inhomogeneous coupling of the contact term
  double rho_y0_ = 0.0;
  double rho_z_ = 0.0;
  double condition_ = 0.0;
};

}  // namespace singular
