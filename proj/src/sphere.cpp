#include "shf/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>

#include "shf/errors.hpp"
#include "shf/optim.hpp"
#include "shf/quadrature.hpp"

namespace shf {

SphereParams make_sphere_params(double delta0, double deltaS, double rho_bar,
                                double r0_ang, double n_Y_cm3) {
  if (!std::isfinite(delta0) || !std::isfinite(deltaS) || !std::isfinite(rho_bar))
    throw ValidationError("sphere params: non-finite value");
  if (!(delta0 > 0.0) || deltaS < 0.0 || deltaS > delta0)
    throw ValidationError("sphere params: need delta0 >= deltaS >= 0");
  if (rho_bar < 0.0 || rho_bar > 1.0)
    throw ValidationError("sphere params: rho_bar must lie in [0, 1]");
  if (!(r0_ang > 0.0)) throw ValidationError("sphere params: r0 must be positive");
  if (rho_bar > kRhoBarValidityBound)
    std::cerr << "warning: rho_bar = " << rho_bar
              << " exceeds the small-contrast validity bound " << kRhoBarValidityBound
              << "; spherical-model envelopes are unreliable\n";
  return SphereParams{delta0, deltaS, rho_bar, r0_ang, n_Y_cm3};
}

double splitting_profile(double r_ang, const SphereParams& p) {
  if (r_ang < p.r0_ang)
    throw ValidationError("splitting_profile: r below the nearest-neighbour distance r0");
  const double ratio = p.r0_ang / r_ang;
  return p.delta0 * ratio * ratio * ratio;
}

double screening_radius(const SphereParams& p) {
  if (p.deltaS <= 0.0)
    throw NumericsError("screening_radius: deltaS = 0 gives an infinite radius");
  return p.r0_ang * std::cbrt(p.delta0 / p.deltaS);
}

namespace {

/// Radial-integral exponent at one t; the integrand phase delta(r) t is
/// split at its zeros 2 k pi before adaptive quadrature.
double continuous_exponent(const SphereParams& p, double r_s, double t) {
  if (t == 0.0) return 0.0;
  const double n_ang3 = p.n_Y_cm3 * 1e-24;
  const double c = p.delta0 * t * p.r0_ang * p.r0_ang * p.r0_ang;  // phase = c / r^3
  auto integrand = [&](double r) {
    const double phase = c / (r * r * r);
    const double oneminus = 1.0 - std::cos(phase);
    return p.rho_bar * oneminus * oneminus * 4.0 * std::numbers::pi * r * r * n_ang3;
  };
  std::vector<double> cuts;
  cuts.push_back(p.r0_ang);
  // phase(r) = 2 k pi  =>  r = (c / (2 k pi))^(1/3), descending in k
  const int k_max = static_cast<int>(std::floor(c / (p.r0_ang * p.r0_ang * p.r0_ang) / kTwoPi));
  for (int k = k_max; k >= 1; --k) {
    const double r = std::cbrt(c / (kTwoPi * static_cast<double>(k)));
    if (r > p.r0_ang && r < r_s) cuts.push_back(r);
  }
  cuts.push_back(r_s);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  const QuadratureOptions opts{1e-9, 1e-15, 44};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_gk15(integrand, cuts[i], cuts[i + 1], opts);
  return total;
}

double screened_exponent(const SphereParams& p, double t) {
  if (t == 0.0) return 0.0;
  const double n_r03 = p.n_Y_cm3 * 1e-24 * p.r0_ang * p.r0_ang * p.r0_ang;
  const double prefactor = (8.0 * std::numbers::pi / 3.0) * n_r03 * p.rho_bar * p.delta0 * t;
  const double lo = 0.5 * p.deltaS * t;
  const double hi = 0.5 * p.delta0 * t;
  return prefactor * sin4_over_phi2_integral(lo, hi);
}

}  // namespace

std::vector<double> continuous_envelope(const SphereParams& p, const TimeGrid& grid) {
  if (p.deltaS <= 0.0)
    throw NumericsError("continuous_envelope: deltaS = 0 makes the integration range infinite");
  const double r_s = screening_radius(p);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = std::exp(-continuous_exponent(p, r_s, grid[i]));
  return out;
}

std::vector<double> screened_decay(const SphereParams& p, const TimeGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = std::exp(-screened_exponent(p, grid[i]));
  return out;
}

namespace {

// Bounded parametrisation: logistic map from R^3 onto the search box, with
// deltaS capped just below delta0 so the box stays admissible.
struct BoundMap {
  const SphereFitOptions& o;
  double r0_ang, n_Y_cm3;

  SphereParams unpack(const std::vector<double>& z) const {
    auto squash = [](double v) { return 1.0 / (1.0 + std::exp(-std::clamp(v, -40.0, 40.0))); };
    const double l_d0 = std::log(o.delta0_lo) +
                        squash(z[0]) * (std::log(o.delta0_hi) - std::log(o.delta0_lo));
    const double d0 = std::exp(l_d0);
    const double ds_hi = 0.999 * d0;
    const double l_ds = std::log(o.deltaS_lo) +
                        squash(z[1]) * (std::log(ds_hi) - std::log(o.deltaS_lo));
    const double l_rho = std::log(o.rho_lo) +
                         squash(z[2]) * (std::log(o.rho_hi) - std::log(o.rho_lo));
    return SphereParams{d0, std::exp(l_ds), std::exp(l_rho), r0_ang, n_Y_cm3};
  }

  std::vector<double> pack(const SphereParams& p) const {
    auto unsquash = [](double s) {
      s = std::clamp(s, 1e-9, 1.0 - 1e-9);
      return std::log(s / (1.0 - s));
    };
    const double s0 = (std::log(p.delta0) - std::log(o.delta0_lo)) /
                      (std::log(o.delta0_hi) - std::log(o.delta0_lo));
    const double d0 = std::exp(std::log(o.delta0_lo) +
                               std::clamp(s0, 1e-9, 1.0 - 1e-9) *
                                   (std::log(o.delta0_hi) - std::log(o.delta0_lo)));
    const double s1 = (std::log(std::max(p.deltaS, o.deltaS_lo)) - std::log(o.deltaS_lo)) /
                      (std::log(0.999 * d0) - std::log(o.deltaS_lo));
    const double s2 = (std::log(std::clamp(p.rho_bar, o.rho_lo, o.rho_hi)) - std::log(o.rho_lo)) /
                      (std::log(o.rho_hi) - std::log(o.rho_lo));
    return {unsquash(s0), unsquash(s1), unsquash(s2)};
  }
};

}  // namespace

SphereFitResult fit_sphere(const DecayCurve& curve, const SphereParams& init,
                           const SphereFitOptions& options) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve.valid[i]) {
      t.push_back(curve.t12[i]);
      y.push_back(curve.intensity[i]);
    }
  if (t.size() < 10)
    throw ValidationError("fit_sphere: need at least 10 valid samples");

  const BoundMap bounds{options, init.r0_ang, init.n_Y_cm3};

  auto model_at = [&](const SphereParams& p, std::vector<double>& m) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      double v = std::exp(-screened_exponent(p, t[i]));
      if (options.include_t2) v *= std::exp(-4.0 * t[i] / options.t2);
      m[i] = v;
    }
  };

  std::vector<double> m(t.size());
  auto scale_for = [&](const std::vector<double>& model) {
    double md = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
      md += model[i] * y[i];
      mm += model[i] * model[i];
    }
    return mm > 0.0 ? md / mm : 0.0;
  };
  auto residuals_z = [&](const std::vector<double>& z) {
    const SphereParams p = bounds.unpack(z);
    model_at(p, m);
    const double s = scale_for(m);
    std::vector<double> r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = y[i] - s * m[i];
    return r;
  };
  auto objective_z = [&](const std::vector<double>& z) {
    const auto r = residuals_z(z);
    double sum = 0.0;
    for (double v : r) sum += v * v;
    return sum;
  };

  // multi-start: the supplied init plus seeded spread over the box
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(-2.5, 2.5);
  std::vector<std::vector<double>> starts;
  starts.push_back(bounds.pack(init));
  for (int s = 1; s < std::max(1, options.starts); ++s)
    starts.push_back({uni(rng), uni(rng), uni(rng)});

  std::vector<double> best_z;
  double best_f = 0.0;
  int total_iters = 0;
  bool any_converged = false;
  for (const auto& z0 : starts) {
    auto nm = nelder_mead(objective_z, z0, 0.6, options.max_iterations, 1e-16, 1e-10);
    auto lm = levenberg_marquardt(residuals_z, nm.x, 120);
    total_iters += nm.iterations + lm.iterations;
    const double f = lm.cost;
    if (best_z.empty() || f < best_f) {
      best_z = lm.x;
      best_f = f;
      any_converged = nm.converged || lm.converged;
    }
  }

  SphereFitResult out;
  out.params = bounds.unpack(best_z);
  model_at(out.params, m);
  out.scale = scale_for(m);
  out.rms = std::sqrt(best_f / static_cast<double>(t.size()));
  out.iterations = total_iters;
  out.converged = any_converged;
  out.rho_at_lower_bound = out.params.rho_bar <= options.rho_lo * 1.05;
  if (out.params.rho_bar > kRhoBarValidityBound)
    std::cerr << "warning: fitted rho_bar " << out.params.rho_bar
              << " exceeds the small-contrast validity bound\n";
  if (!out.converged)
    throw NumericsError("fit_sphere: no start converged within the iteration budget");
  return out;
}

}  // namespace shf
