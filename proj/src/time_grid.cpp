#include "shf/time_grid.hpp"

#include <cmath>

#include "shf/errors.hpp"

namespace shf {

TimeGrid make_time_grid(std::vector<double> t) {
  if (t.empty()) throw ValidationError("time grid: empty");
  double prev = -1.0;
  for (double x : t) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError("time grid: samples must be finite and >= 0");
    if (x <= prev) throw ValidationError("time grid: samples must be strictly increasing");
    prev = x;
  }
  return TimeGrid{std::move(t)};
}

TimeGrid uniform_grid(double t_max, std::size_t n) {
  if (n < 2 || !(t_max > 0.0)) throw ValidationError("uniform grid: need n >= 2 and t_max > 0");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  return TimeGrid{std::move(t)};
}

TimeGrid default_grid() { return uniform_grid(150e-6, 1501); }

}  // namespace shf
