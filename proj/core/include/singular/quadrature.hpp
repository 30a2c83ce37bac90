#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace singular {

/// Gauss-Legendre rule on [-1, 1] together with the matrix that maps nodal
/// values to Legendre coefficients, so that indefinite integrals of the
/// interpolant can be evaluated at any point of the panel.
class ReferenceRule {
 public:
  explicit ReferenceRule(int n);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Weights v_k with  sum_k v_k f(x_k) = int_{-1}^{t} f  for polynomials of
  /// degree < n.
  std::vector<double> partial_weights(double t) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> to_coeffs_;  // row-major (j, k)
};

struct PanelLayout {
  int grading_levels = 4;        // dyadic panels accumulating at the on-shell point
  double geometric_ratio = 2.0;  // width ratio of panels above 2p
  int endpoint_map_power = 4;    // q - p ~ s^power on the two panels touching p
};

/// A Gauss-Legendre panel. Panels touching the on-shell point use the map
/// q = a + (b - a) s^m (or its mirror), s = (1 + t)/2, which turns the
/// (q - p) ln|q - p| behaviour of the amplitude into a smooth integrand.
struct Panel {
  enum class Map { none, toward_lower, toward_upper };
  double a = 0.0;
  double b = 0.0;
  Map map = Map::none;
  int power = 1;
};

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double cutoff = 0.0;
  double onshell = 0.0;
  std::vector<double> panel_boundaries;  // sorted, starts at 0, ends at cutoff
  std::vector<Panel> panels;
  int nodes_per_panel = 0;
  std::shared_ptr<const ReferenceRule> rule;

  std::size_t size() const noexcept { return nodes.size(); }
  std::size_t panel_count() const noexcept {
    return panel_boundaries.empty() ? 0 : panel_boundaries.size() - 1;
  }

  /// Panel containing x (the lower one when x is a boundary).
  std::size_t panel_of(double x) const;

  /// Weights w with  sum_i w_i f(q_i) = int_0^x f(q) dq  (0 <= x <= cutoff).
  std::vector<double> left_weights(double x) const;

  double integrate(std::span<const double> values) const;
};

/// Composite Gauss-Legendre grid on [0, cutoff] with a panel boundary at the
/// on-shell momentum, dyadic grading towards it from both sides, geometric
/// panels above 2p and optional extra breakpoints. Throws DomainError unless
/// 0 < onshell < cutoff.
QuadratureGrid build_grid(double cutoff, double onshell, int nodes_per_panel,
                          std::span<const double> panel_splits = {},
                          const PanelLayout& layout = {});

/// Principal value of int_0^cutoff dq / (q^2 - p^2).
double pv_moment(double p, double cutoff);

/// int_a^b dq / (q^2 - p^2), principal value when p lies inside (a, b).
/// Neither endpoint may equal p.
double pole_moment(double p, double a, double b);

}  // namespace singular
