#include "shf/echo.hpp"

#include <algorithm>
#include <cmath>

#include "shf/errors.hpp"
#include "shf/optim.hpp"
#include "shf/parallel.hpp"

namespace shf {

double single_modulation(const ModulationParams& p, double t12) {
  return 1.0 - 0.5 * p.rho * (1.0 - std::cos(p.delta_g * t12)) * (1.0 - std::cos(p.delta_e * t12));
}

std::vector<double> total_envelope(const std::vector<ModulationParams>& params,
                                   const TimeGrid& grid) {
  if (params.empty()) throw ValidationError("total_envelope: empty parameter list");
  std::vector<double> v(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    double prod = 1.0;
    for (const auto& p : params) prod *= single_modulation(p, t);
    v[i] = prod;
  });
  return v;
}

std::vector<double> echo_intensity(const std::vector<double>& v_tot, double t2,
                                   const TimeGrid& grid) {
  if (!(t2 > 0.0)) throw ValidationError("echo_intensity: T2 must be positive");
  if (v_tot.size() != grid.size())
    throw ValidationError("echo_intensity: envelope/grid length mismatch");
  std::vector<double> out(v_tot.size());
  for (std::size_t i = 0; i < v_tot.size(); ++i)
    out[i] = v_tot[i] * v_tot[i] * std::exp(-4.0 * grid[i] / t2);
  return out;
}

EnvelopeResult envelope_result(std::vector<double> v_tot, double t2, const TimeGrid& grid) {
  auto intensity = echo_intensity(v_tot, t2, grid);
  return EnvelopeResult{std::move(v_tot), std::move(intensity)};
}

std::vector<double> two_subsite_envelope(const std::vector<double>& v_I,
                                         const std::vector<double>& v_II) {
  if (v_I.size() != v_II.size())
    throw ValidationError("two_subsite_envelope: length mismatch");
  std::vector<double> out(v_I.size());
  for (std::size_t i = 0; i < v_I.size(); ++i) out[i] = 0.5 * (v_I[i] + v_II[i]);
  return out;
}

std::vector<double> two_subsite_envelope(const std::vector<ModulationParams>& params_I,
                                         const std::vector<ModulationParams>& params_II,
                                         const TimeGrid& grid) {
  return two_subsite_envelope(total_envelope(params_I, grid),
                              total_envelope(params_II, grid));
}

double apparent_decay_time(const DecayCurve& curve, std::pair<double, double> window) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!curve.valid[i]) continue;
    if (curve.t12[i] < window.first || curve.t12[i] > window.second) continue;
    t.push_back(curve.t12[i]);
    y.push_back(curve.intensity[i]);
  }
  if (t.size() < 3)
    throw ValidationError("apparent_decay_time: fewer than 3 valid samples in window");

  const bool all_positive = std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; });
  if (all_positive) {
    // linear regression of log-intensity
    const double n = static_cast<double>(t.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double l = std::log(y[i]);
      st += t[i];
      sl += l;
      stt += t[i] * t[i];
      stl += t[i] * l;
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw NumericsError("apparent_decay_time: degenerate time samples");
    const double slope = (n * stl - st * sl) / denom;
    const double span = t.back() - t.front();
    if (!(slope < 0.0) || -1.0 / slope > 1e6 * span)
      throw NumericsError("apparent_decay_time: curve does not decay over the window");
    return -1.0 / slope;
  }

  // direct nonlinear fit of A exp(-t/tau); seeded from endpoint decade
  const double ymax = *std::max_element(y.begin(), y.end());
  if (!(ymax > 0.0))
    throw NumericsError("apparent_decay_time: no positive intensity in window");
  const double span = t.back() - t.front();
  auto objective = [&](const std::vector<double>& x) {
    const double amp = x[0], tau = x[1];
    if (!(tau > 0.0) || !(amp > 0.0)) return 1e300;
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = y[i] - amp * std::exp(-(t[i] - t.front()) / tau);
      s += r * r;
    }
    return s;
  };
  NelderMeadResult best{};
  bool have = false;
  for (double tau0 : {span / 8.0, span / 2.0, span * 2.0}) {
    auto r = nelder_mead(objective, {std::max(y.front(), 0.1 * ymax), tau0}, 0.4, 400);
    if (!have || r.f < best.f) {
      best = r;
      have = true;
    }
  }
  const double tau = best.x[1];
  if (!(tau > 0.0) || tau > 1e6 * span)
    throw NumericsError("apparent_decay_time: time constant unbounded (no decay)");
  return tau;
}

}  // namespace shf
