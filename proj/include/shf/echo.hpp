#ifndef SHF_ECHO_HPP
#define SHF_ECHO_HPP

#include <utility>
#include <vector>

#include "shf/decay_curve.hpp"
#include "shf/spincore.hpp"
#include "shf/time_grid.hpp"

namespace shf {

/// Envelope and normalised intensity on a common grid.
struct EnvelopeResult {
  std::vector<double> v_tot;      // dimensionless
  std::vector<double> intensity;  // = v_tot^2 * exp(-4 t / T2), 1 at t = 0
};

/// Single-nucleus echo modulation:
///   V(t12) = 1 - (rho/2) [1 - cos(Delta t12)] [1 - cos(Delta' t12)]
double single_modulation(const ModulationParams& p, double t12);

/// Product of single modulations, accumulated in list order.
std::vector<double> total_envelope(const std::vector<ModulationParams>& params,
                                   const TimeGrid& grid);

/// Intensity decay: V_tot^2 * exp(-4 t12 / T2).
std::vector<double> echo_intensity(const std::vector<double>& v_tot, double t2,
                                   const TimeGrid& grid);

/// Envelope and its intensity decay bundled on one grid.
EnvelopeResult envelope_result(std::vector<double> v_tot, double t2, const TimeGrid& grid);

/// Coherent two-subsite average (V_I + V_II)/2, sample-wise.
std::vector<double> two_subsite_envelope(const std::vector<ModulationParams>& params_I,
                                         const std::vector<ModulationParams>& params_II,
                                         const TimeGrid& grid);
std::vector<double> two_subsite_envelope(const std::vector<double>& v_I,
                                         const std::vector<double>& v_II);

/// Least-squares single-exponential time constant tau of the intensity over
/// [window.first, window.second]: I ~ exp(-t12/tau). This is the *apparent*
/// time; for a pure coherence decay exp(-4 t12/T2) it equals T2/4.
/// Log-domain fit when all windowed samples are positive, otherwise a direct
/// nonlinear fit. Throws when fewer than 3 valid samples fall in the window
/// or the windowed curve does not decay.
double apparent_decay_time(const DecayCurve& curve, std::pair<double, double> window);

}  // namespace shf

#endif
