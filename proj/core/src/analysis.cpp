#include "singular/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>

namespace singular {

namespace {

constexpr double kPi = std::numbers::pi;

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
};

Line least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw FitError("degenerate abscissae in line fit");
  Line l;
  l.slope = (n * sxy - sx * sy) / den;
  l.intercept = (sy - l.slope * sx) / n;
  return l;
}

double wrap_phase(double phi) {
  phi = std::remainder(phi, 2.0 * kPi);
  return phi <= -kPi ? phi + 2.0 * kPi : phi;
}

// Residuals (value - A x^w cos(nu ln x + phi)) / scale_i for the parameter
// vector (A, w, nu, phi).
struct OscillationFunctor {
  using Scalar = double;
  const std::vector<double>& lx;
  const std::vector<double>& v;
  const std::vector<double>& scale;

  int inputs() const { return 4; }
  int values() const { return int(lx.size()); }

  int operator()(const Eigen::VectorXd& a, Eigen::VectorXd& f) const {
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double m = a[0] * std::exp(a[1] * lx[i]) * std::cos(a[2] * lx[i] + a[3]);
      f[Eigen::Index(i)] = (v[i] - m) / scale[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& a, Eigen::MatrixXd& j) const {
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double env = std::exp(a[1] * lx[i]);
      const double th = a[2] * lx[i] + a[3];
      const double c = std::cos(th);
      const double s = std::sin(th);
      const Eigen::Index r = Eigen::Index(i);
      j(r, 0) = -env * c / scale[i];
      j(r, 1) = -a[0] * env * c * lx[i] / scale[i];
      j(r, 2) = a[0] * env * s * lx[i] / scale[i];
      j(r, 3) = a[0] * env * s / scale[i];
    }
    return 0;
  }
};

}  // namespace

OscillationFit fit_oscillation(std::vector<Sample> samples, double x_min, double x_max) {
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.x < b.x; });
  if (x_min == 0.0 && x_max == 0.0 && !samples.empty()) {
    x_min = samples.front().x;
    x_max = samples.back().x;
  }
  std::vector<double> lx, v;
  for (const auto& s : samples) {
    if (s.x >= x_min && s.x <= x_max) {
      if (!(s.x > 0.0) || !std::isfinite(s.value)) {
        throw FitError("oscillation samples need x > 0 and finite values");
      }
      lx.push_back(std::log(s.x));
      v.push_back(s.value);
    }
  }

  // Zero crossings, linearly interpolated in ln x.
  std::vector<double> cross;
  std::vector<std::size_t> cross_index;  // sample index just after the crossing
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] == 0.0 || v[i] * v[i + 1] < 0.0) {
      cross.push_back(lx[i] + (lx[i + 1] - lx[i]) * v[i] / (v[i] - v[i + 1]));
      cross_index.push_back(i + 1);
    }
  }
  if (cross.size() < 3) {
    throw FitError("fit window too small: " + std::to_string(cross.size()) +
                   " zero crossings in [" + std::to_string(x_min) + ", " +
                   std::to_string(x_max) + "], need 3");
  }

  OscillationFit fit;
  fit.x_min = x_min;
  fit.x_max = x_max;
  fit.crossings = int(cross.size());

  std::vector<double> idx(cross.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = double(k);
  const double nu0 = kPi / least_squares_line(idx, cross).slope;
  fit.nu_crossings = nu0;

  // Extrema of |value| between consecutive crossings, refined by a parabola
  // through the three samples around the largest one.
  std::vector<double> ext_x, ext_y;
  for (std::size_t k = 0; k + 1 < cross_index.size(); ++k) {
    std::size_t best = cross_index[k];
    for (std::size_t i = cross_index[k]; i < cross_index[k + 1]; ++i) {
      if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    double ex = lx[best];
    double ey = std::abs(v[best]);
    if (best > 0 && best + 1 < v.size()) {
      const double y0 = std::abs(v[best - 1]), y1 = ey, y2 = std::abs(v[best + 1]);
      const double h0 = lx[best] - lx[best - 1], h1 = lx[best + 1] - lx[best];
      // Parabola through three unevenly spaced points.
      const double d0 = (y1 - y0) / h0, d1 = (y2 - y1) / h1;
      const double c2 = (d1 - d0) / (h0 + h1);
      if (c2 < 0.0) {
        const double slope_mid = d0 + c2 * h0;  // derivative at lx[best]
        const double shift = -slope_mid / (2.0 * c2);
        if (std::abs(shift) < std::max(h0, h1)) {
          ex += shift;
          ey += slope_mid * shift + c2 * shift * shift;
        }
      }
    }
    ext_x.push_back(ex);
    ext_y.push_back(std::log(ey));
  }
  const Line env = least_squares_line(ext_x, ext_y);
  fit.power_extrema = env.slope;

  double phi0 = kPi / 2.0 - nu0 * cross.front();
  double amp0 = std::exp(env.intercept);
  if (v[cross_index.front()] > 0.0) phi0 += kPi;  // cos is negative just past pi/2

  std::vector<double> scale(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) scale[i] = amp0 * std::exp(env.slope * lx[i]);

  OscillationFunctor functor{lx, v, scale};
  Eigen::LevenbergMarquardt<OscillationFunctor> lm(functor);
  Eigen::VectorXd a(4);
  a << amp0, env.slope, nu0, phi0;
  lm.minimize(a);
  if (!a.allFinite()) throw FitError("oscillation least squares diverged");

  Eigen::VectorXd f(Eigen::Index(lx.size()));
  functor(a, f);
  fit.residual = std::sqrt(f.squaredNorm() / double(lx.size()));
  if (a[0] < 0.0) {
    a[0] = -a[0];
    a[3] += kPi;
  }
  fit.amplitude = a[0];
  fit.envelope_power = a[1];
  fit.nu_fit = a[2];
  fit.phase_fit = wrap_phase(a[3]);
  return fit;
}

double lambda_star_from_phase(const OscillationFit& fit, double p) {
  return p * std::exp(-fit.phase_fit / fit.nu_fit);
}

std::vector<Sample> sample_offshell(const HalfOffShellK& sol, double x_min,
                                    double x_max, int count) {
  if (count < 2 || !(x_min > 0.0) || !(x_max > x_min)) {
    throw DomainError("sampling needs count >= 2 and 0 < x_min < x_max");
  }
  std::vector<Sample> out;
  out.reserve(std::size_t(count));
  for (int j = 0; j < count; ++j) {
    const double x = x_min * std::pow(x_max / x_min, double(j) / (count - 1));
    out.push_back({x, eval_offshell(sol, std::min(sol.p * x, sol.grid().cutoff))});
  }
  return out;
}

BornReport born_check(const ModelParams& params, double p, double cutoff,
                      const GridOptions& options) {
  const auto grid = build_grid(cutoff, p, options.nodes_per_panel, {}, options.layout);
  PotentialSelection long_range_only;
  long_range_only.lo_contact = false;
  const CountertermSet none{};

  BornReport r;
  r.lambda = params.lambda;
  r.first_born = -params.lambda / (2.0 * params.l + 1.0);
  r.k = solve_k(params, none, p, grid, long_range_only).onshell_value;
  r.residual = r.k - r.first_born;

  ModelParams twice = params;
  twice.lambda *= 2.0;
  const double k2 = solve_k(twice, none, p, grid, long_range_only).onshell_value;
  r.residual_doubled = k2 + twice.lambda / (2.0 * params.l + 1.0);
  r.onset_power = std::log2(std::abs(r.residual_doubled / r.residual));
  return r;
}

RGVariation rg_variation(std::vector<Sample> sweep, double reference) {
  if (sweep.size() < 4) throw DomainError("RG variation needs at least four cutoffs");
  std::sort(sweep.begin(), sweep.end(),
            [](const Sample& a, const Sample& b) { return a.x < b.x; });
  const std::size_t n = sweep.size();

  RGVariation out;
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) {
    sorted[i] = sweep[i].value;
    if (i + 1 < n && sweep[i].value * sweep[i + 1].value < 0.0) ++out.sign_changes;
  }
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  out.spread = range == 0.0 ? 0.0
               : median != 0.0 ? range / std::abs(median)
                               : std::numeric_limits<double>::infinity();

  std::size_t used = n;
  if (std::isnan(reference)) {
    reference = sweep.back().value;
    used = n - 1;
  }
  out.limit = reference;
  out.residual_power = std::numeric_limits<double>::quiet_NaN();
  if (range == 0.0) return out;

  // Upper envelope of |value - reference| over all larger cutoffs.
  std::vector<double> lx, le;
  double env = 0.0;
  for (std::size_t i = used; i-- > 0;) {
    env = std::max(env, std::abs(sweep[i].value - reference));
    if (env > 0.0) {
      lx.push_back(std::log(sweep[i].x));
      le.push_back(std::log(env));
    }
  }
  if (lx.size() >= 2) {
    out.residual_power = -least_squares_line(lx, le).slope;
  }
  out.power_law = out.sign_changes == 0 && out.spread < 0.5 &&
                  std::isfinite(out.residual_power) && out.residual_power > 0.0;
  return out;
}

}  // namespace singular
