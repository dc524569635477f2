#include "shf/decay_curve.hpp"

#include <cmath>

#include "shf/errors.hpp"

namespace shf {

std::size_t DecayCurve::valid_count() const {
  std::size_t n = 0;
  for (char v : valid) n += (v != 0);
  return n;
}

DecayCurve make_decay_curve(std::string label, std::vector<double> t12,
                            std::vector<double> intensity, double min_valid_t12) {
  if (t12.size() != intensity.size())
    throw ValidationError("decay curve '" + label + "': t12 and intensity lengths differ");
  if (t12.empty()) throw ValidationError("decay curve '" + label + "': empty");
  double prev = -1.0;
  for (std::size_t i = 0; i < t12.size(); ++i) {
    if (!std::isfinite(t12[i]) || t12[i] <= prev)
      throw ValidationError("decay curve '" + label + "': t12 must be finite and strictly increasing");
    prev = t12[i];
    if (!std::isfinite(intensity[i]) || intensity[i] < 0.0)
      throw ValidationError("decay curve '" + label + "': intensities must be finite and >= 0");
  }
  std::vector<char> valid(t12.size());
  for (std::size_t i = 0; i < t12.size(); ++i) valid[i] = (t12[i] >= min_valid_t12) ? 1 : 0;
  return DecayCurve{std::move(label), std::move(t12), std::move(intensity), std::move(valid)};
}

}  // namespace shf
