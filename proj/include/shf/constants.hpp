#ifndef SHF_CONSTANTS_HPP
#define SHF_CONSTANTS_HPP

#include <numbers>

namespace shf {

/// Fixed physical inputs of the model. Values are set at construction and
/// the defaults match the material system (Er3+ in Y2SiO5, 89Y ligands).
struct PhysicalConstants {
  double mu_Y_over_h = 2.1e6;        ///< 89Y nuclear moment over h [Hz/T]
  double mu0 = 4.0e-7 * std::numbers::pi;  ///< vacuum permeability [T m/A]
  double mu_B = 9.2740100783e-24;    ///< Bohr magneton [J/T]
  double n_Y_cm3 = 1.83e22;          ///< yttrium density [atoms/cm^3]

  constexpr double mu0_over_4pi() const { return mu0 / (4.0 * std::numbers::pi); }
  /// Density in ångström^-3 (1 cm^3 = 1e24 Å^3).
  constexpr double n_Y_ang3() const { return n_Y_cm3 * 1e-24; }
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAngstrom = 1e-10;  // metres

}  // namespace shf

#endif
