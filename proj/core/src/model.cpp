#include "singular/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "singular/errors.hpp"

namespace singular {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void require_positive_momenta(double p_out, double p_in) {
  if (!(p_out > 0.0) || !(p_in > 0.0)) {
    throw DomainError("partial-wave potential needs positive momenta, got p'=" +
                      std::to_string(p_out) + ", p=" + std::to_string(p_in));
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(reduced_mass > 0.0)) throw DomainError("reduced_mass must be positive");
  if (g != 0.0 && !(big_m > 0.0)) {
    throw DomainError("big_m must be positive when g is non-zero");
  }
  if (l < 0) throw DomainError("angular momentum must be non-negative");
}

double v_lo_partial(const ModelParams& params, double p_out, double p_in) {
  require_positive_momenta(p_out, p_in);
  const double lo = std::min(p_out, p_in);
  const double hi = std::max(p_out, p_in);
  const int l = params.l;
  return -kPi2 * params.lambda / (params.reduced_mass * (2 * l + 1)) *
         std::pow(lo / hi, l) / hi;
}

double v_nlo_partial(const ModelParams& params, double p_out, double p_in) {
  require_positive_momenta(p_out, p_in);
  if (params.g == 0.0) return 0.0;
  const double lo = std::min(p_out, p_in);
  const double hi = std::max(p_out, p_in);
  const int l = params.l;
  const double ratio = lo / hi;
  // p_<^l / p_>^(l-1) = p_> (p_</p_>)^l
  const double shape = hi * std::pow(ratio, l) *
                       (1.0 - double(2 * l - 1) / (2 * l + 3) * ratio * ratio);
  return -kPi2 * params.g /
         (2.0 * params.reduced_mass * params.big_m * params.big_m) /
         double((2 * l + 1) * (2 * l - 1)) * shape;
}

double v_contact_lo(const ModelParams& params, double c, double p_out,
                    double p_in) {
  const int l = params.l;
  return kPi2 / params.reduced_mass * c / (2 * l + 1) *
         std::pow(p_out * p_in, l);
}

double v_contact_nlo(const ModelParams& params, double c1, double d1,
                     double p_out, double p_in) {
  if (params.l != 0) {
    throw UnsupportedChannel("NLO contact terms are only defined for l = 0");
  }
  return kPi2 / params.reduced_mass * (c1 + d1 * (p_out * p_out + p_in * p_in));
}

NuIndex nu_l(const ModelParams& params) {
  const double barrier = (params.l + 0.5) * (params.l + 0.5);
  const double diff = params.lambda - barrier;
  return {std::sqrt(std::abs(diff)), diff >= 0.0};
}

double critical_l(const ModelParams& params) {
  return std::sqrt(params.lambda) - 0.5;
}

double perturbative_l(const ModelParams& params) {
  return params.lambda * std::numbers::pi / 4.0 - 0.5;
}

bool needs_counterterm(const ModelParams& params) {
  return params.l < critical_l(params);
}

}  // namespace singular
