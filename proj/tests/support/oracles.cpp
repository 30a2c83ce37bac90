#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace oracle {

namespace {

constexpr std::size_t kLimit = 2000;

double trampoline(double x, void* data) {
  return (*static_cast<const Function*>(data))(x);
}

class Workspace {
 public:
  Workspace() : w_(gsl_integration_workspace_alloc(kLimit)) {
    gsl_set_error_handler_off();
  }
  ~Workspace() { gsl_integration_workspace_free(w_); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  gsl_integration_workspace* get() const { return w_; }

 private:
  gsl_integration_workspace* w_;
};

void check(int status, const char* what) {
  if (status != GSL_SUCCESS && status != GSL_EROUND) {
    throw std::runtime_error(std::string(what) + ": " + gsl_strerror(status));
  }
}

}  // namespace

double integrate(const Function& f, double a, double b) {
  Workspace w;
  gsl_function g{&trampoline, const_cast<Function*>(&f)};
  double result = 0.0, error = 0.0;
  check(gsl_integration_qags(&g, a, b, 0.0, 1e-13, kLimit, w.get(), &result, &error),
        "qags");
  return result;
}

double pv(const Function& f, double p, double a, double b) {
  const Function reduced = [&](double q) { return f(q) / (q + p); };
  Workspace w;
  gsl_function g{&trampoline, const_cast<Function*>(&reduced)};
  double result = 0.0, error = 0.0;
  check(gsl_integration_qawc(&g, a, b, p, 0.0, 1e-12, kLimit, w.get(), &result, &error),
        "qawc");
  return result;
}

double pv_full(const Function& f, double p, double cutoff) {
  const Function outside = [&](double q) { return f(q) / (q * q - p * p); };
  const double hi = std::min(2.0 * p, 0.5 * (p + cutoff));
  return integrate(outside, 0.0, 0.5 * p) + pv(f, p, 0.5 * p, hi) +
         (hi < cutoff ? integrate(outside, hi, cutoff) : 0.0);
}

BornSeries born_series(const singular::Kernel& u, double p, double cutoff) {
  BornSeries s;
  s.first = p * u(p, p);
  const Function f = [&](double q) {
    const double v = u(p, q);
    return v * v * q * q;
  };
  s.second = -p * pv_full(f, p, cutoff);
  return s;
}

double contact_bubble(double c, double p, double cutoff) {
  const double bubble = cutoff + 0.5 * p * std::log((cutoff - p) / (cutoff + p));
  return p * c / (1.0 + c * bubble);
}

}  // namespace oracle
