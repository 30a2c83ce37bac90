#include "singular/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace singular {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double condition_of(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

}  // namespace

// ---------------------------------------------------------------------------
// KernelOperator

KernelOperator::KernelOperator(Kernel kernel, QuadratureGrid grid)
    : kernel_(std::move(kernel)), grid_(std::move(grid)) {
  const double p = grid_.onshell;
  const std::size_t n = grid_.size();
  inv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = grid_.nodes[i];
    inv_[i] = 1.0 / ((q - p) * (q + p));
    sum_inv_ += grid_.weights[i] * inv_[i];
  }
  moment_ = pv_moment(p, grid_.cutoff);

  for (const auto& t : kernel_.terms()) {
    std::vector<double> pa(n), pb(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = std::pow(grid_.nodes[i], t.a);
      pb[i] = std::pow(grid_.nodes[i], t.b);
    }
    pow_a_.push_back(std::move(pa));
    pow_b_.push_back(std::move(pb));
  }
}

void KernelOperator::add_separable(const PowerTerm& t, std::size_t term,
                                   double x, Eigen::RowVectorXd& r) const {
  const double p = grid_.onshell;
  const std::size_t n = grid_.size();
  const double f = t.coef * std::pow(x, t.a);
  const auto& g = pow_b_[term];
  for (std::size_t j = 0; j < n; ++j) {
    r[Eigen::Index(j)] += f * grid_.weights[j] * g[j] * inv_[j];
  }
  r[Eigen::Index(n)] += f * std::pow(p, t.b) * (moment_ - sum_inv_);
}

void KernelOperator::add_split(const PowerTerm& t, std::size_t term, double x,
                               const std::vector<double>& left,
                               Eigen::RowVectorXd& r) const {
  // u(x, q) = coef * A(q) B(x) for q < x,  coef * A(x) B(q) for q > x
  const double p = grid_.onshell;
  const std::size_t n = grid_.size();
  const auto& aq = pow_a_[term];
  const auto& bq = pow_b_[term];
  const double ax = std::pow(x, t.a);
  const double bx = std::pow(x, t.b);
  const double ap = std::pow(p, t.a);
  const double bp = std::pow(p, t.b);

  double left_inv = 0.0;
  double right_inv = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lw = left[j];
    const double rw = grid_.weights[j] - lw;
    r[Eigen::Index(j)] += t.coef * (bx * lw * aq[j] + ax * rw * bq[j]) * inv_[j];
    left_inv += lw * inv_[j];
    right_inv += rw * inv_[j];
  }

  double at_pole;
  if (x == p) {
    at_pole = ap * bp * (moment_ - sum_inv_);
  } else {
    at_pole = bx * ap * (pole_moment(p, 0.0, x) - left_inv) +
              ax * bp * (pole_moment(p, x, grid_.cutoff) - right_inv);
  }
  r[Eigen::Index(n)] += t.coef * at_pole;
}

Eigen::RowVectorXd KernelOperator::row(double x) const {
  if (!(x > 0.0) || x > grid_.cutoff) {
    throw DomainError("kernel row requested outside (0, cutoff]: " +
                      std::to_string(x));
  }
  const std::size_t n = grid_.size();
  Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(Eigen::Index(n + 1));
  std::vector<double> left;
  const auto& terms = kernel_.terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (terms[t].kind == PowerTerm::Kind::separable) {
      add_separable(terms[t], t, x, r);
    } else {
      if (left.empty()) left = grid_.left_weights(x);
      add_split(terms[t], t, x, left, r);
    }
  }
  return r;
}

std::vector<double> KernelOperator::points() const {
  std::vector<double> pts = grid_.nodes;
  pts.push_back(grid_.onshell);
  return pts;
}

Eigen::MatrixXd KernelOperator::matrix() const {
  const auto pts = points();
  Eigen::MatrixXd m(Eigen::Index(pts.size()), Eigen::Index(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(Eigen::Index(i)) = row(pts[i]);
  return m;
}

// ---------------------------------------------------------------------------
// Solves

Eigen::VectorXd HalfOffShellK::phi() const {
  const auto& q = grid().nodes;
  Eigen::VectorXd v(Eigen::Index(q.size() + 1));
  for (std::size_t i = 0; i < q.size(); ++i) v[Eigen::Index(i)] = q[i] * q[i] * column[i];
  v[Eigen::Index(q.size())] = p * p * onshell_value;
  return v;
}

namespace {

// I + R diag(x^2): the Nystrom system for k at the grid points.
Eigen::MatrixXd system_matrix(const KernelOperator& op) {
  Eigen::MatrixXd a = op.matrix();
  const auto pts = op.points();
  for (std::size_t j = 0; j < pts.size(); ++j) a.col(Eigen::Index(j)) *= pts[j] * pts[j];
  a.diagonal().array() += 1.0;
  return a;
}

HalfOffShellK solve_with(std::shared_ptr<const KernelOperator> op, double p) {
  const auto pts = op->points();
  const Eigen::Index n = Eigen::Index(pts.size());
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs[i] = p * op->kernel()(pts[std::size_t(i)], p);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system_matrix(*op));
  const double cond = condition_of(lu);
  if (!(cond < kPoleCondition)) {
    throw PoleCondition("K-matrix equation is singular at cutoff " +
                            std::to_string(op->grid().cutoff) +
                            " (condition " + std::to_string(cond) + ")",
                        cond);
  }
  const Eigen::VectorXd k = lu.solve(rhs);

  HalfOffShellK sol;
  sol.op = std::move(op);
  sol.p = p;
  sol.condition = cond;
  sol.column.assign(k.data(), k.data() + n - 1);
  sol.onshell_value = k[n - 1];
  for (double v : sol.column) {
    if (!std::isfinite(v)) throw PoleCondition("non-finite K-matrix column", cond);
  }
  return sol;
}

}  // namespace

HalfOffShellK solve_k(const Kernel& kernel, double p, const QuadratureGrid& grid) {
  if (grid.onshell != p) {
    throw DomainError("grid was built for on-shell momentum " +
                      std::to_string(grid.onshell) + ", not " + std::to_string(p));
  }
  return solve_with(std::make_shared<const KernelOperator>(kernel, grid), p);
}

HalfOffShellK solve_k(const ModelParams& params, const CountertermSet& ct,
                      double p, const QuadratureGrid& grid,
                      const PotentialSelection& select) {
  params.validate();
  if (!(p < grid.cutoff)) throw DomainError("on-shell momentum must lie below the cutoff");
  auto sol = solve_k(assemble_kernel(params, ct, select), p, grid);
  sol.params = params;
  sol.counterterms = ct;
  sol.counterterms.cutoff = grid.cutoff;
  return sol;
}

double eval_offshell(const HalfOffShellK& sol, double p_out) {
  if (!(p_out > 0.0) || p_out > sol.grid().cutoff) {
    throw DomainError("off-shell momentum must lie in (0, cutoff]");
  }
  if (p_out == sol.p) return sol.onshell_value;
  const auto& nodes = sol.grid().nodes;
  auto it = std::lower_bound(nodes.begin(), nodes.end(), p_out);
  if (it != nodes.end() && *it == p_out) {
    return sol.column[std::size_t(it - nodes.begin())];
  }
  return sol.p * sol.op->kernel()(p_out, sol.p) - sol.op->row(p_out).dot(sol.phi());
}

double phase_shift(double onshell_value) {
  return std::atan(kPi2 * onshell_value);
}

double phase_shift(const HalfOffShellK& sol) { return phase_shift(sol.onshell_value); }

double pv_integral(const QuadratureGrid& grid, std::span<const double> values,
                   double value_at_p) {
  const double p = grid.onshell;
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = grid.nodes[i];
    sum += grid.weights[i] * (values[i] - value_at_p) / ((q - p) * (q + p));
  }
  return sum + value_at_p * pv_moment(p, grid.cutoff);
}

Eigen::MatrixXd solve_offshell_matrix(const Kernel& kernel, double p,
                                      const QuadratureGrid& grid,
                                      std::span<const double> momenta) {
  if (grid.onshell != p) throw DomainError("grid was built for a different on-shell momentum");
  const auto& bounds = grid.panel_boundaries;
  for (double y : momenta) {
    if (!(y > 0.0) || y > grid.cutoff || !std::binary_search(bounds.begin(), bounds.end(), y)) {
      throw DomainError("off-shell momentum " + std::to_string(y) +
                        " is not a panel boundary of the grid");
    }
  }
  KernelOperator op(kernel, grid);
  const auto pts = op.points();
  const Eigen::Index n = Eigen::Index(pts.size());
  const Eigen::Index m = Eigen::Index(momenta.size());
  Eigen::MatrixXd rhs(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index b = 0; b < m; ++b) {
      rhs(i, b) = kernel(pts[std::size_t(i)], momenta[std::size_t(b)]);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system_matrix(op));
  const double cond = condition_of(lu);
  if (!(cond < kPoleCondition)) throw PoleCondition("off-shell system is singular", cond);
  Eigen::MatrixXd phi = lu.solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) phi.row(i) *= pts[std::size_t(i)] * pts[std::size_t(i)];

  Eigen::MatrixXd out(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double ya = momenta[std::size_t(a)];
    const Eigen::RowVectorXd r = op.row(ya);
    for (Eigen::Index b = 0; b < m; ++b) {
      out(a, b) = kernel(ya, momenta[std::size_t(b)]) - r.dot(phi.col(b));
    }
  }
  return out;
}

double refinement_change(const Kernel& kernel, double p, double cutoff,
                         const GridOptions& options) {
  const auto coarse = solve_k(kernel, p, build_grid(cutoff, p, options.nodes_per_panel, {}, options.layout));
  const auto fine = solve_k(kernel, p, build_grid(cutoff, p, 2 * options.nodes_per_panel, {}, options.layout));
  const double scale = std::max(std::abs(fine.onshell_value), 1e-300);
  return std::abs(fine.onshell_value - coarse.onshell_value) / scale;
}

void require_converged(const Kernel& kernel, double p, double cutoff,
                       const GridOptions& options, double tolerance) {
  const auto coarse = solve_k(kernel, p, build_grid(cutoff, p, options.nodes_per_panel, {}, options.layout));
  const auto fine = solve_k(kernel, p, build_grid(cutoff, p, 2 * options.nodes_per_panel, {}, options.layout));
  const double change = std::abs(fine.onshell_value - coarse.onshell_value) /
                        std::max(std::abs(fine.onshell_value), 1e-300);
  if (!(change < tolerance)) {
    throw ConvergenceError("grid not converged at cutoff " + std::to_string(cutoff) +
                               ": relative change " + std::to_string(change) +
                               ", condition " + std::to_string(fine.condition),
                           change, fine.condition);
  }
}

// ---------------------------------------------------------------------------
// ContactFamily

ContactFamily::ContactFamily(const ModelParams& params, double p,
                             const QuadratureGrid& grid,
                             const PotentialSelection& background) {
  params.validate();
  PotentialSelection base = background;
  base.lo_contact = false;
  const CountertermSet none{};
  KernelOperator op(assemble_kernel(params, none, base), grid);

  const auto pts = op.points();
  const Eigen::Index n = Eigen::Index(pts.size());
  const double l = params.l;

  // Contact term C u(x) g(q) with u(x) = x^l/(2l+1), g(q) = q^l.
  Eigen::VectorXd u(n), b0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = pts[std::size_t(i)];
    u[i] = std::pow(x, l) / (2 * l + 1);
    b0[i] = p * op.kernel()(x, p);
  }
  Kernel unit;
  unit.add({PowerTerm::Kind::separable, 1.0, 0.0, l});
  const KernelOperator contact(unit, grid);
  Eigen::RowVectorXd rho = contact.row(p);  // x-independent for a = 0
  for (Eigen::Index j = 0; j < n; ++j) rho[j] *= pts[std::size_t(j)] * pts[std::size_t(j)];

  Eigen::MatrixXd a = op.matrix();
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) *= pts[std::size_t(j)] * pts[std::size_t(j)];
  a.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  condition_ = condition_of(lu);
  if (!(condition_ < kPoleCondition)) {
    throw PoleCondition("contact-free system is singular", condition_);
  }
  const Eigen::VectorXd y0 = lu.solve(b0);
  const Eigen::VectorXd z = lu.solve(u);
  y0_p_ = y0[n - 1];
  z_p_ = z[n - 1];
  sigma_ = std::pow(p, l + 1);
  rho_y0_ = rho.dot(y0);
  rho_z_ = rho.dot(z);
}

double ContactFamily::onshell(double c) const {
  return y0_p_ + c * z_p_ * (sigma_ - rho_y0_) / (1.0 + c * rho_z_);
}

double ContactFamily::pole_coupling() const { return -1.0 / rho_z_; }

double ContactFamily::onshell_at_infinity() const {
  return y0_p_ + z_p_ * (sigma_ - rho_y0_) / rho_z_;
}

double ContactFamily::invert(double target) const {
  const double dk = target - y0_p_;
  const double denom = z_p_ * (sigma_ - rho_y0_) - dk * rho_z_;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return dk / denom;
}

}  // namespace singular
