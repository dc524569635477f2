#include "shf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "shf/errors.hpp"

namespace shf {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct GkEstimate {
  double kronrod;
  double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = fc * kWg[3];
  double kron = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  return GkEstimate{kron, std::abs(kron - gauss)};
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, double abs_tol, int depth, int max_depth) {
  const auto est = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(est.kronrod));
  // (200*err)^1.5 is the usual sharpened Kronrod error model
  const double err = est.error > 0 ? std::pow(200.0 * est.error, 1.5) : 0.0;
  if (err <= tol || est.error <= abs_tol) return est.kronrod;
  if (depth >= max_depth)
    throw NumericsError("adaptive_gk15: tolerance not met (non-convergent quadrature)");
  const double m = 0.5 * (a + b);
  return adaptive_rec(f, a, m, rel_tol, abs_tol * 0.5, depth + 1, max_depth) +
         adaptive_rec(f, m, b, rel_tol, abs_tol * 0.5, depth + 1, max_depth);
}

}  // namespace

double adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  if (!(b > a)) throw ValidationError("adaptive_gk15: need b >= a");
  return adaptive_rec(f, a, b, opts.rel_tol, opts.abs_tol, 0, opts.max_depth);
}

double sin4_over_phi2(double phi) {
  if (phi == 0.0) return 0.0;
  const double s = std::sin(phi);
  const double s2 = s * s;
  return s2 * s2 / (phi * phi);
}

namespace {

// Cumulative integral of sin^4/phi^2 at multiples of pi (the integrand
// zeros), grown lazily; fit loops re-evaluate the integral thousands of
// times with shifting limits.
std::vector<double> g_cumulative{0.0};
std::mutex g_cumulative_mutex;

void grow_cumulative(std::size_t k_needed) {
  std::lock_guard<std::mutex> lock(g_cumulative_mutex);
  const QuadratureOptions tight{1e-10, 1e-16, 48};
  while (g_cumulative.size() <= k_needed) {
    const std::size_t k = g_cumulative.size() - 1;
    const double a = static_cast<double>(k) * std::numbers::pi;
    const double b = static_cast<double>(k + 1) * std::numbers::pi;
    g_cumulative.push_back(g_cumulative.back() + adaptive_gk15(sin4_over_phi2, a, b, tight));
  }
}

double cumulative_to(double x) {
  if (x <= 0.0) return 0.0;
  const auto k = static_cast<std::size_t>(std::floor(x / std::numbers::pi));
  grow_cumulative(k);
  double base;
  {
    std::lock_guard<std::mutex> lock(g_cumulative_mutex);
    base = g_cumulative[k];
  }
  const double a = static_cast<double>(k) * std::numbers::pi;
  if (x == a) return base;
  return base + adaptive_gk15(sin4_over_phi2, a, x, QuadratureOptions{1e-10, 1e-16, 48});
}

}  // namespace

double sin4_over_phi2_integral(double a, double b) {
  if (!(a >= 0.0) || !(b >= a))
    throw ValidationError("sin4_over_phi2_integral: need 0 <= a <= b");
  if (a == b) return 0.0;
  return cumulative_to(b) - cumulative_to(a);
}

}  // namespace shf
