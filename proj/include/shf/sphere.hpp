#ifndef SHF_SPHERE_HPP
#define SHF_SPHERE_HPP

#include <cstdint>
#include <vector>

#include "shf/constants.hpp"
#include "shf/decay_curve.hpp"
#include "shf/time_grid.hpp"

namespace shf {

/// Small-contrast expansion loses validity above this; a warning is issued.
inline constexpr double kRhoBarValidityBound = 0.3;

/// Parameters of the angular-averaged (spherical) decay model.
struct SphereParams {
  double delta0 = 0.0;    ///< splitting at r0 [rad/s]
  double deltaS = 0.0;    ///< screening splitting [rad/s], < delta0
  double rho_bar = 0.0;   ///< effective branching contrast
  double r0_ang = 3.4;    ///< nearest-neighbour distance [Å]
  double n_Y_cm3 = 1.83e22;  ///< yttrium density [atoms/cm^3]
};

/// Validates delta0 > deltaS >= 0, rho_bar in (0,1], r0 > 0; warns (stderr)
/// when rho_bar exceeds the small-contrast bound.
SphereParams make_sphere_params(double delta0, double deltaS, double rho_bar,
                                double r0_ang = 3.4, double n_Y_cm3 = 1.83e22);

/// 1/r^3 splitting profile: delta0 * (r0/r)^3 for r >= r0.
double splitting_profile(double r_ang, const SphereParams& p);

/// r_S = r0 * (delta0/deltaS)^(1/3); throws for deltaS = 0 (infinite radius).
double screening_radius(const SphereParams& p);

/// Squared envelope as the radial integral
///   exp( - int_{r0}^{rS} rho [1 - cos(delta(r) t)]^2 4 pi r^2 n_Y dr ),
/// adaptive quadrature split at the integrand phase zeros.
std::vector<double> continuous_envelope(const SphereParams& p, const TimeGrid& grid);

/// Same quantity through the change of variable phi = (delta0 t/2)(r0/r)^3:
///   exp( -(8 pi/3) n_Y r0^3 rho delta0 t * int_{deltaS t/2}^{delta0 t/2}
///        sin^4(phi)/phi^2 dphi ).
std::vector<double> screened_decay(const SphereParams& p, const TimeGrid& grid);

struct SphereFitOptions {
  bool include_t2 = true;   ///< multiply model by exp(-4 t / t2)
  double t2 = 58e-6;        ///< fixed coherence time when include_t2
  int starts = 8;           ///< multi-start count (>= 1)
  std::uint64_t seed = 2026;
  int max_iterations = 600; ///< per Nelder-Mead start
  // Search bounds (rad/s); deltaS is additionally capped just below delta0.
  double delta0_lo = kTwoPi * 100e3;
  double delta0_hi = kTwoPi * 5e6;
  double deltaS_lo = kTwoPi * 1e3;
  double rho_lo = 1e-4;
  double rho_hi = kRhoBarValidityBound;
};

struct SphereFitResult {
  SphereParams params;
  double scale = 0.0;
  double rms = 0.0;             ///< intensity-domain RMS residual
  bool converged = false;
  int iterations = 0;
  bool rho_at_lower_bound = false;  ///< flat-curve indicator
};

/// Least-squares (delta0, deltaS, rho_bar) plus closed-form scale against the
/// valid samples of a curve. Multi-start Nelder-Mead with a final
/// Levenberg-Marquardt polish. Throws when the curve has < 10 valid samples.
SphereFitResult fit_sphere(const DecayCurve& curve, const SphereParams& init,
                           const SphereFitOptions& options = {});

}  // namespace shf

#endif
