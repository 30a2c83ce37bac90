#include "singular/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "singular/errors.hpp"

namespace singular {

double PowerTerm::operator()(double p_out, double q) const {
  if (kind == Kind::separable) {
    return coef * std::pow(p_out, a) * std::pow(q, b);
  }
  const double lo = std::min(p_out, q);
  const double hi = std::max(p_out, q);
  return coef * std::pow(lo, a) * std::pow(hi, b);
}

Kernel& Kernel::add(const PowerTerm& term) {
  if (term.coef != 0.0) terms_.push_back(term);
  return *this;
}

Kernel& Kernel::add(const Kernel& other, double scale) {
  for (PowerTerm t : other.terms_) {
    t.coef *= scale;
    add(t);
  }
  return *this;
}

double Kernel::operator()(double p_out, double q) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t(p_out, q);
  return sum;
}

Kernel lo_long_range_kernel(const ModelParams& params) {
  const double l = params.l;
  Kernel k;
  k.add({PowerTerm::Kind::split, -params.lambda / (2 * l + 1), l, -(l + 1)});
  return k;
}

Kernel nlo_long_range_kernel(const ModelParams& params) {
  Kernel k;
  if (params.g == 0.0) return k;
  const double l = params.l;
  const double pref = -params.g / (2.0 * params.big_m * params.big_m) /
                      ((2 * l + 1) * (2 * l - 1));
  k.add({PowerTerm::Kind::split, pref, l, 1 - l});
  k.add({PowerTerm::Kind::split, -pref * (2 * l - 1) / (2 * l + 3), l + 2,
         -(l + 1)});
  return k;
}

Kernel lo_contact_kernel(const ModelParams& params, double c) {
  const double l = params.l;
  Kernel k;
  k.add({PowerTerm::Kind::separable, c / (2 * l + 1), l, l});
  return k;
}

Kernel nlo_contact_kernel(const ModelParams& params, double c1, double d1) {
  if (params.l != 0) {
    throw UnsupportedChannel("NLO contact terms are only defined for l = 0");
  }
  Kernel k;
  k.add({PowerTerm::Kind::separable, c1, 0, 0});
  k.add({PowerTerm::Kind::separable, d1, 2, 0});
  k.add({PowerTerm::Kind::separable, d1, 0, 2});
  return k;
}

Kernel assemble_kernel(const ModelParams& params, const CountertermSet& ct,
                       const PotentialSelection& select) {
  Kernel k;
  if (select.lo_long_range) k.add(lo_long_range_kernel(params));
  if (select.lo_contact) k.add(lo_contact_kernel(params, ct.c_lo));
  if (select.nlo_long_range) k.add(nlo_long_range_kernel(params));
  if (select.nlo_contact) k.add(nlo_contact_kernel(params, ct.c_nlo, ct.d_nlo));
  return k;
}

}  // namespace singular
