#ifndef SHF_TIME_GRID_HPP
#define SHF_TIME_GRID_HPP

#include <cstddef>
#include <vector>

namespace shf {

/// Pulse-delay samples t12 [s], strictly increasing, t12 >= 0.
struct TimeGrid {
  std::vector<double> t;

  std::size_t size() const { return t.size(); }
  double operator[](std::size_t i) const { return t[i]; }
};

TimeGrid make_time_grid(std::vector<double> t);

/// n uniform samples on [0, t_max].
TimeGrid uniform_grid(double t_max, std::size_t n);

/// 0 to 150 us in 0.1 us steps; resolves MHz-scale modulations.
TimeGrid default_grid();

}  // namespace shf

#endif
