#pragma once

#include <vector>

#include "singular/model.hpp"

namespace singular {

// Reduced partial-wave kernel  u(p', q) = m V_l(p', q) / pi^2,  written as a
// sum of power-law terms. Every potential in the model has this form:
//
//   separable:  coef * p'^a * q^b
//   split:      coef * p_<^a * p_>^b      (p_< = min(p', q), p_> = max)
//
// The split form carries the derivative kink on the diagonal q = p'; the
// solver integrates it piecewise so the kink never sits inside a quadrature
// panel.
struct PowerTerm {
  enum class Kind { separable, split };
  Kind kind = Kind::separable;
  double coef = 0.0;
  double a = 0.0;
  double b = 0.0;

  double operator()(double p_out, double q) const;
};

class Kernel {
 public:
  Kernel() = default;

  Kernel& add(const PowerTerm& term);
  Kernel& add(const Kernel& other, double scale = 1.0);

  double operator()(double p_out, double q) const;

  const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

 private:
  std::vector<PowerTerm> terms_;
};

/// Reduced inverse-square potential in wave params.l.
Kernel lo_long_range_kernel(const ModelParams& params);

/// Reduced inverse-quartic potential in wave params.l (delta shell dropped).
Kernel nlo_long_range_kernel(const ModelParams& params);

/// Reduced LO contact term C/(2l+1) p'^l q^l.
Kernel lo_contact_kernel(const ModelParams& params, double c);

/// Reduced S-wave NLO contact term C + D (p'^2 + q^2).
Kernel nlo_contact_kernel(const ModelParams& params, double c1, double d1);

/// Which pieces of the potential enter a non-perturbative solve.
struct PotentialSelection {
  bool lo_long_range = true;
  bool lo_contact = true;
  bool nlo_long_range = false;
  bool nlo_contact = false;
};


Kernel assemble_kernel(const ModelParams& params, const CountertermSet& ct,
                       const PotentialSelection& select = {});

}  // namespace singular
