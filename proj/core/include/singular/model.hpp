#pragma once

// Partial-wave matrix elements of the inverse-square (leading order) and
// inverse-quartic (next-to-leading order) potentials and of their contact
// counterterms. Momenta and masses are in units of the reduced mass.

namespace singular {

struct ModelParams {
  double lambda = 0.0;        // LO strength, attractive for lambda > 0
  double g = 0.0;             // NLO strength, either sign
  double big_m = 1.0;         // NLO mass scale M
  double reduced_mass = 1.0;  // m
  int l = 0;                  // orbital angular momentum

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

struct CountertermSet {
  double c_lo = 0.0;   // C_l^(0)
  double c_nlo = 0.0;  // C_0^(1)
  double d_nlo = 0.0;  // D_0^(1)
  double cutoff = 1.0;
};

/// -pi^2 lambda / (m (2l+1)) * p_<^l / p_>^(l+1)
double v_lo_partial(const ModelParams& params, double p_out, double p_in);

/// Partial-wave projection of -g/(2 m M^2 r^4) with the delta-shell constant
/// removed (it is absorbed by the S-wave contact term).
double v_nlo_partial(const ModelParams& params, double p_out, double p_in);

/// (pi^2/m) C/(2l+1) p'^l p^l
double v_contact_lo(const ModelParams& params, double c, double p_out,
                    double p_in);

/// (pi^2/m) [C + D (p^2 + p'^2)]; S wave only.
double v_contact_nlo(const ModelParams& params, double c1, double d1,
                     double p_out, double p_in);

struct NuIndex {
  double magnitude = 0.0;  // |nu_l|
  bool singular = false;   // nu_l real, lambda >= (l+1/2)^2
};

/// nu_l = sqrt(lambda - (l+1/2)^2), or its magnitude when imaginary.
NuIndex nu_l(const ModelParams& params);

/// Waves l < sqrt(lambda) - 1/2 overcome the centrifugal barrier.
double critical_l(const ModelParams& params);

/// Waves l > lambda pi/4 - 1/2 can be treated in perturbation theory.
double perturbative_l(const ModelParams& params);

/// True when integer wave `l` needs an LO counterterm.
bool needs_counterterm(const ModelParams& params);

}  // namespace singular
