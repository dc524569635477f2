#ifndef SHF_QUADRATURE_HPP
#define SHF_QUADRATURE_HPP

#include <functional>

namespace shf {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod 7/15 on [a, b]. Throws NumericsError when the
/// local error estimate cannot be met within max_depth bisections.
double adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& opts = {});

/// Integrand of the screened-decay integral; sin^4(phi)/phi^2, 0 at phi = 0.
double sin4_over_phi2(double phi);

/// Integral of sin^4(phi)/phi^2 over [a, b] (0 <= a <= b), split at the
/// integrand zeros phi = k*pi with a cached cumulative table so repeated
/// evaluations (fits) stay cheap.
double sin4_over_phi2_integral(double a, double b);

}  // namespace shf

#endif
