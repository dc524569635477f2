#ifndef SHF_DECAY_CURVE_HPP
#define SHF_DECAY_CURVE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace shf {

/// Echo intensity at t12 < 2 us is swamped by pulse free-induction decay;
/// such samples are masked out by default when curves are ingested.
inline constexpr double kDefaultMinValidT12 = 2e-6;

/// Sampled echo-intensity decay with a validity mask.
struct DecayCurve {
  std::string label;             // e.g. field magnitude in mT
  std::vector<double> t12;       // seconds, strictly increasing
  std::vector<double> intensity; // arbitrary units, finite, >= 0
  std::vector<char> valid;       // per-sample mask

  std::size_t size() const { return t12.size(); }
  std::size_t valid_count() const;
};

/// Validates monotonicity/finiteness and applies the t12 >= min_valid_t12
/// mask (pass 0 to keep every sample).
DecayCurve make_decay_curve(std::string label, std::vector<double> t12,
                            std::vector<double> intensity,
                            double min_valid_t12 = kDefaultMinValidT12);

}  // namespace shf

#endif
