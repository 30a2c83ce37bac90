#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "singular/renorm.hpp"
#include "singular/solver.hpp"

using namespace singular;
using doctest::Approx;

namespace {

ModelParams channel(double lambda, int l) {
  ModelParams m;
  m.lambda = lambda;
  m.l = l;
  return m;
}

CountertermSet lo_counterterm(double c, double cutoff) {
  CountertermSet ct;
  ct.c_lo = c;
  ct.cutoff = cutoff;
  return ct;
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("free theory gives a vanishing amplitude") {
  const auto grid = build_grid(50.0, 0.3, 16);
  const auto sol = solve_k(channel(0.0, 0), lo_counterterm(0.0, 50.0), 0.3, grid);
  CHECK(sol.onshell_value == 0.0);
  for (double k : sol.column) CHECK(k == 0.0);
  CHECK(eval_offshell(sol, 7.0) == 0.0);
}

TEST_CASE("contact-only S wave reproduces the bubble sum") {
  for (double c : {-3.0, -0.05, 0.02, 0.7, 11.0}) {
    for (double cutoff : {1.0, 5.5, 100.0}) {
      for (double p : {0.01, 0.1}) {
        const auto grid = build_grid(cutoff, p, 24);
        const auto sol = solve_k(channel(0.0, 0), lo_counterterm(c, cutoff), p, grid);
        INFO("C " << c << " cutoff " << cutoff << " p " << p);
        CHECK(relative(sol.onshell_value, oracle::contact_bubble(c, p, cutoff)) < 1e-8);
      }
    }
  }
}

TEST_CASE("contact-only P wave reproduces its separable closed form") {
  const double p = 0.1;
  for (double cutoff : {2.0, 30.0}) {
    for (double c : {-0.2, 0.5}) {
      const double i4 = std::pow(cutoff, 3) / 3.0 + p * p * cutoff + std::pow(p, 4) * pv_moment(p, cutoff);
      const double a = (c / 3.0) * p * p / (1.0 + (c / 3.0) * i4);
      const auto grid = build_grid(cutoff, p, 24);
      const auto sol = solve_k(channel(0.0, 1), lo_counterterm(c, cutoff), p, grid);
      CHECK(relative(sol.onshell_value, p * a) < 1e-10);
      CHECK(relative(eval_offshell(sol, 0.7 * cutoff), 0.7 * cutoff * a) < 1e-10);
    }
  }
}

TEST_CASE("weak inverse-square potential follows the Born series") {
  const double p = 0.01;
  const double cutoff = 1e4 * p;
  for (int l : {0, 1, 2}) {
    const ModelParams m = channel(0.01, l);
    const auto grid = build_grid(cutoff, p, 24);
    PotentialSelection long_range;
    long_range.lo_contact = false;
    const double k = solve_k(m, CountertermSet{}, p, grid, long_range).onshell_value;
    const auto born = oracle::born_series(lo_long_range_kernel(m), p, cutoff);
    INFO("l = " << l << " k = " << k << " first " << born.first << " second " << born.second);
    CHECK(born.first == Approx(-m.lambda / (2 * l + 1)).epsilon(1e-14));
    CHECK(std::abs(k - born.first - born.second) < 10.0 * std::pow(m.lambda, 3));
    CHECK(std::abs(k - born.first) < 2.0 * m.lambda * m.lambda);
  }
}

TEST_CASE("PV integrals agree with adaptive Cauchy quadrature") {
  const double p = 0.35;
  const double cutoff = 9.0;
  const auto grid = build_grid(cutoff, p, 24);
  const auto f = [](double q) { return std::exp(-q) * q * q + std::cos(q); };
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.nodes[i]);
  CHECK(pv_integral(grid, values, f(p)) == Approx(oracle::pv_full(f, p, cutoff)).epsilon(1e-10));
}

TEST_CASE("Nystrom interpolation is consistent with the solved column") {
  const ModelParams m = channel(4.25, 1);
  const double p = 0.1;
  const double cutoff = 40.0;
  const auto grid = build_grid(cutoff, p, 24);
  const auto sol = solve_k(m, lo_counterterm(analytic_c0(m, cutoff, 0.2), cutoff), p, grid);
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    CHECK(eval_offshell(sol, grid.nodes[i]) ==
          Approx(sol.column[i]).epsilon(1e-11).scale(std::abs(sol.onshell_value)));
  }
  CHECK(eval_offshell(sol, p) == Approx(sol.onshell_value).epsilon(1e-11));
  CHECK(std::isfinite(eval_offshell(sol, cutoff)));
  CHECK_THROWS_AS(eval_offshell(sol, 1.01 * cutoff), DomainError);
  CHECK_THROWS_AS(eval_offshell(sol, 0.0), DomainError);
}

TEST_CASE("phase shifts") {
  CHECK(phase_shift(0.0) == 0.0);
  CHECK(phase_shift(1.0 / (std::numbers::pi * std::numbers::pi)) ==
        Approx(std::numbers::pi / 4.0));
  CHECK(phase_shift(-1.05) == Approx(-1.4746).epsilon(1e-4));
  CHECK(phase_shift(1e300) <= std::numbers::pi / 2.0);
}

TEST_CASE("off-shell K matrix is symmetric") {
  const ModelParams m = channel(4.25, 1);
  const double cutoff = 20.0;
  const double p = 0.1;
  const std::vector<double> splits{0.03, 0.5, 2.0, 7.0};
  const std::vector<double> momenta{0.03, p, 0.5, 2.0, 7.0};
  const auto grid = build_grid(cutoff, p, 24, splits);
  const Kernel kernel = assemble_kernel(m, lo_counterterm(analytic_c0(m, cutoff, 0.2), cutoff));
  const Eigen::MatrixXd k = solve_offshell_matrix(kernel, p, grid, momenta);
  const double scale = k.cwiseAbs().maxCoeff();
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() < 1e-8 * scale);

  // The on-shell column is the half-off-shell solution divided by p.
  const auto half = solve_k(kernel, p, grid);
  for (std::size_t a = 0; a < momenta.size(); ++a) {
    CHECK(k(Eigen::Index(a), 1) * p == Approx(eval_offshell(half, momenta[a])).epsilon(1e-10));
  }

  const std::vector<double> interior{0.3};
  CHECK_THROWS_AS(solve_offshell_matrix(kernel, p, grid, interior), DomainError);
  CHECK_THROWS_AS(solve_offshell_matrix(kernel, p, build_grid(cutoff, 0.2, 8), momenta),
                  DomainError);
}

TEST_CASE("doubling the resolution changes on-shell values by less than 1e-6") {
  struct Config {
    ModelParams m;
    CountertermSet ct;
    double p;
  };
  const ModelParams p_wave = channel(4.25, 1);
  const ModelParams s_wave = channel(2.0, 0);
  std::vector<Config> configs{
      {p_wave, lo_counterterm(0.0, 5.0), 0.1},
      {p_wave, lo_counterterm(0.0, 500.0), 0.1},
      {p_wave, lo_counterterm(analytic_c0(p_wave, 100.0, 0.2), 100.0), 0.1},
      {p_wave, lo_counterterm(analytic_c0(p_wave, 1e5, 0.2), 1e5), 0.1},
  };
  for (double cutoff : {5.5, 8.5}) {
    const double c = calibrate_c0(s_wave, cutoff, {0.1, -1.05}, NAN).c;
    for (double p : {0.02, 0.175, 0.45}) configs.push_back({s_wave, lo_counterterm(c, cutoff), p});
  }
  for (const auto& cfg : configs) {
    const double change = refinement_change(assemble_kernel(cfg.m, cfg.ct), cfg.p,
                                            cfg.ct.cutoff, GridOptions{});
    INFO("lambda " << cfg.m.lambda << " cutoff " << cfg.ct.cutoff << " p " << cfg.p);
    CHECK(change < 1e-6);
  }
  CHECK_NOTHROW(require_converged(assemble_kernel(p_wave, lo_counterterm(0.0, 50.0)), 0.1,
                                  50.0, GridOptions{}));
  GridOptions crude;
  crude.nodes_per_panel = 2;
  CHECK_THROWS_AS(require_converged(assemble_kernel(p_wave, lo_counterterm(0.0, 50.0)), 0.1,
                                    50.0, crude, 1e-12),
                  ConvergenceError);
}

TEST_CASE("contact family is the exact linear-fractional dependence on C") {
  const ModelParams m = channel(4.25, 1);
  const double p = 0.1;
  const double cutoff = 60.0;
  const auto grid = build_grid(cutoff, p, 24);
  const ContactFamily family(m, p, grid);
  for (double c : {-1e-4, -3e-6, 0.0, 2e-6, 5e-5}) {
    const double k = solve_k(m, lo_counterterm(c, cutoff), p, grid).onshell_value;
    CHECK(family.onshell(c) == Approx(k).epsilon(1e-10));
    CHECK(family.invert(k) == Approx(c).epsilon(1e-8).scale(1e-8));
  }
  CHECK(std::isinf(family.invert(family.onshell_at_infinity())));
}

TEST_CASE("a counterterm on a pole of the equation is reported, not solved") {
  const ModelParams m = channel(4.25, 1);
  const double p = 0.1;
  const double cutoff = 60.0;
  const auto grid = build_grid(cutoff, p, 24);
  const double pole = ContactFamily(m, p, grid).pole_coupling();
  try {
    solve_k(m, lo_counterterm(pole, cutoff), p, grid);
    FAIL("expected a pole condition");
  } catch (const PoleCondition& e) {
    CHECK(e.condition() > kPoleCondition);
  }
  CHECK_THROWS_AS(solve_k(m, lo_counterterm(0.0, cutoff), p, build_grid(cutoff, 0.2, 8)),
                  DomainError);
}

TEST_CASE("without a counterterm the P-wave amplitude does not converge in the cutoff") {
  const ModelParams m = channel(4.25, 1);
  const double p = 0.1;
  int sign_changes = 0;
  double previous = 0.0;
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i <= 20; ++i) {
    const double cutoff = 5.0 * std::pow(100.0, i / 20.0);
    const auto grid = build_grid(cutoff, p, 24);
    const double k = solve_k(m, lo_counterterm(0.0, cutoff), p, grid).onshell_value;
    if (i > 0 && k * previous < 0.0) ++sign_changes;
    previous = k;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  CHECK(sign_changes >= 2);
  CHECK(hi - lo > 1.0);
}
