#include "singular/quadrature.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "singular/errors.hpp"

namespace singular {

ReferenceRule::ReferenceRule(int n) {
  if (n < 2) throw DomainError("Gauss-Legendre rule needs at least 2 nodes");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  std::vector<std::pair<double, double>> pts(n);
  for (int i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(-1.0, 1.0, i, &pts[i].first, &pts[i].second,
                                  table);
  }
  gsl_integration_glfixed_table_free(table);
  std::sort(pts.begin(), pts.end());

  // GSL computes untabulated orders to ~1e-11 only; polish with Newton on P_n.
  nodes_.resize(n);
  weights_.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = pts[i].first;
    double dp = 0.0;
    for (int iter = 0; iter < 3; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
    }
    nodes_[i] = x;
    weights_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  // Discrete orthogonality of P_0..P_{n-1} under the rule gives the
  // inverse Vandermonde: c_j = (2j+1)/2 sum_k w_k P_j(x_k) f_k.
  to_coeffs_.assign(std::size_t(n) * n, 0.0);
  std::vector<double> pl(n);
  for (int k = 0; k < n; ++k) {
    gsl_sf_legendre_Pl_array(n - 1, nodes_[k], pl.data());
    for (int j = 0; j < n; ++j) {
      to_coeffs_[std::size_t(j) * n + k] = 0.5 * (2 * j + 1) * weights_[k] * pl[j];
    }
  }
}

std::vector<double> ReferenceRule::partial_weights(double t) const {
  const int n = size();
  t = std::clamp(t, -1.0, 1.0);
  // Q_0 = t + 1,  Q_j = (P_{j+1} - P_{j-1}) / (2j+1)
  std::vector<double> pl(n + 1);
  gsl_sf_legendre_Pl_array(n, t, pl.data());
  std::vector<double> q(n);
  q[0] = t + 1.0;
  for (int j = 1; j < n; ++j) q[j] = (pl[j + 1] - pl[j - 1]) / (2 * j + 1);

  std::vector<double> v(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double* row = &to_coeffs_[std::size_t(j) * n];
    for (int k = 0; k < n; ++k) v[k] += q[j] * row[k];
  }
  return v;
}

namespace {

std::shared_ptr<const ReferenceRule> cached_rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const ReferenceRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const ReferenceRule>(n);
  return slot;
}

}  // namespace

std::size_t QuadratureGrid::panel_of(double x) const {
  auto it = std::lower_bound(panel_boundaries.begin() + 1,
                             panel_boundaries.end(), x);
  if (it == panel_boundaries.end()) return panel_count() - 1;
  return static_cast<std::size_t>(it - panel_boundaries.begin()) - 1;
}

namespace {

// Reference coordinate t in [-1, 1] of node k and dq/dt there.
struct MappedPoint {
  double q;
  double jac;
};

MappedPoint map_point(const Panel& panel, double t) {
  const double width = panel.b - panel.a;
  switch (panel.map) {
    case Panel::Map::none:
      return {panel.a + 0.5 * width * (t + 1.0), 0.5 * width};
    case Panel::Map::toward_lower: {
      const double s = 0.5 * (t + 1.0);
      return {panel.a + width * std::pow(s, panel.power),
              0.5 * width * panel.power * std::pow(s, panel.power - 1)};
    }
    case Panel::Map::toward_upper: {
      const double s = 0.5 * (t + 1.0);
      return {panel.b - width * std::pow(s, panel.power),
              0.5 * width * panel.power * std::pow(s, panel.power - 1)};
    }
  }
  return {0.0, 0.0};
}

// Reference node index of the i-th (ascending) node of a panel.
std::size_t reference_index(const Panel& panel, std::size_t i, std::size_t n) {
  return panel.map == Panel::Map::toward_upper ? n - 1 - i : i;
}

}  // namespace

std::vector<double> QuadratureGrid::left_weights(double x) const {
  std::vector<double> w(nodes.size(), 0.0);
  if (x <= 0.0) return w;
  if (x >= cutoff) return weights;

  const std::size_t index = panel_of(x);
  const std::size_t n = static_cast<std::size_t>(nodes_per_panel);
  const std::size_t first = index * n;
  std::copy(weights.begin(), weights.begin() + first, w.begin());

  const Panel& panel = panels[index];
  if (x >= panel.b) {
    std::copy(weights.begin() + first, weights.begin() + first + n,
              w.begin() + first);
    return w;
  }
  const double width = panel.b - panel.a;
  const auto& tr = rule->nodes();
  switch (panel.map) {
    case Panel::Map::none: {
      const auto local = rule->partial_weights(2.0 * (x - panel.a) / width - 1.0);
      for (std::size_t k = 0; k < n; ++k) w[first + k] = 0.5 * width * local[k];
      break;
    }
    case Panel::Map::toward_lower: {
      const double s = std::pow((x - panel.a) / width, 1.0 / panel.power);
      const auto local = rule->partial_weights(2.0 * s - 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        w[first + i] = local[i] * map_point(panel, tr[i]).jac;
      }
      break;
    }
    case Panel::Map::toward_upper: {
      // int_a^x = int_a^b - int_x^b, and int_x^b runs over s in [0, s(x)].
      const double s = std::pow((panel.b - x) / width, 1.0 / panel.power);
      const auto local = rule->partial_weights(2.0 * s - 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = reference_index(panel, i, n);
        w[first + i] = weights[first + i] - local[k] * map_point(panel, tr[k]).jac;
      }
      break;
    }
  }
  return w;
}

double QuadratureGrid::integrate(std::span<const double> values) const {
  return std::inner_product(weights.begin(), weights.end(), values.begin(), 0.0);
}

QuadratureGrid build_grid(double cutoff, double onshell, int nodes_per_panel,
                          std::span<const double> panel_splits,
                          const PanelLayout& layout) {
  if (!(onshell > 0.0) || !(onshell < cutoff)) {
    throw DomainError("grid needs 0 < p < cutoff, got p=" +
                      std::to_string(onshell) +
                      ", cutoff=" + std::to_string(cutoff));
  }
  if (layout.grading_levels < 1 || !(layout.geometric_ratio > 1.0) ||
      layout.endpoint_map_power < 1) {
    throw DomainError("invalid panel layout");
  }
  const double p = onshell;

  std::vector<double> bps{0.0, cutoff, p};
  for (int j = 1; j <= layout.grading_levels; ++j) {
    const double h = std::ldexp(p, -j);
    bps.push_back(p - h);
    bps.push_back(p + h);
  }
  bps.push_back(2.0 * p);
  for (double x = 2.0 * p * layout.geometric_ratio; x < cutoff;
       x *= layout.geometric_ratio) {
    bps.push_back(x);
  }
  for (double s : panel_splits) {
    if (s > 0.0 && s < cutoff) bps.push_back(s);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::remove_if(bps.begin(), bps.end(),
                           [&](double x) { return x < 0.0 || x > cutoff; }),
            bps.end());

  // Merge breakpoints that would create slivers, never removing 0, p or the
  // cutoff.
  std::vector<double> merged{bps.front()};
  const double min_rel = 1e-3;
  for (std::size_t i = 1; i < bps.size(); ++i) {
    const double x = bps[i];
    const double prev = merged.back();
    const double tol = min_rel * std::ldexp(p, -layout.grading_levels);
    if (x - prev > tol) {
      merged.push_back(x);
    } else if (x == p || x == cutoff) {
      merged.back() = x;
    }
  }
  // Avoid a short last panel against the cutoff.
  if (merged.size() > 3) {
    const std::size_t last = merged.size() - 1;
    const double prev = merged[last - 1];
    if (prev > 2.0 * p && cutoff / prev < std::sqrt(layout.geometric_ratio)) {
      merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(last - 1));
    }
  }

  QuadratureGrid grid;
  grid.cutoff = cutoff;
  grid.onshell = p;
  grid.panel_boundaries = std::move(merged);
  grid.nodes_per_panel = nodes_per_panel;
  grid.rule = cached_rule(nodes_per_panel);

  const auto& tr = grid.rule->nodes();
  const auto& wr = grid.rule->weights();
  const std::size_t n = static_cast<std::size_t>(nodes_per_panel);
  for (std::size_t k = 0; k + 1 < grid.panel_boundaries.size(); ++k) {
    Panel panel{grid.panel_boundaries[k], grid.panel_boundaries[k + 1]};
    if (layout.endpoint_map_power > 1 && (panel.a == p || panel.b == p)) {
      // Keep the node closest to p at least 1e-12 p away.
      const double s_min = 0.5 * (tr.front() + 1.0);
      int power = layout.endpoint_map_power;
      while (power > 1 &&
             (panel.b - panel.a) * std::pow(s_min, power) < 1e-12 * p) {
        --power;
      }
      panel.power = power;
      if (power > 1) {
        panel.map = panel.b == p ? Panel::Map::toward_upper : Panel::Map::toward_lower;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = reference_index(panel, i, n);
      const auto mp = map_point(panel, tr[r]);
      grid.nodes.push_back(mp.q);
      grid.weights.push_back(wr[r] * mp.jac);
    }
    grid.panels.push_back(panel);
  }
  for (double q : grid.nodes) {
    if (!(std::abs(q - p) > 1e-14 * p)) {
      throw DomainError("quadrature node collides with the on-shell point; "
                        "lower endpoint_map_power or nodes_per_panel");
    }
  }
  return grid;
}

namespace {

// Antiderivative of 1/(q^2 - p^2):  ln|(x-p)/(x+p)| / (2p)
double pole_antiderivative(double p, double x) {
  if (x <= 0.0) return 0.0;
  if (x > p) return -std::atanh(p / x) / p;
  return -std::atanh(x / p) / p;
}

}  // namespace

double pv_moment(double p, double cutoff) {
  if (!(p > 0.0) || !(p < cutoff)) {
    throw DomainError("pv_moment needs 0 < p < cutoff");
  }
  return pole_antiderivative(p, cutoff);
}

double pole_moment(double p, double a, double b) {
  return pole_antiderivative(p, b) - pole_antiderivative(p, a);
}

}  // namespace singular
