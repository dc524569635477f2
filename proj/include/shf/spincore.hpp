#ifndef SHF_SPINCORE_HPP
#define SHF_SPINCORE_HPP

#include <string>
#include <vector>

#include "shf/constants.hpp"
#include "shf/geometry.hpp"
#include "shf/vec3.hpp"

namespace shf {

enum class Level { ground, excited };

/// Effective spin-1/2 g-tensor in the (D1, D2, b) frame.
/// Convention: H = mu_B * B . g . S, splitting mu_B * |g^T Bhat| * B.
struct GTensor {
  Mat3 g;
  Level level = Level::ground;
  Orientation orientation = Orientation::I;
};

/// Validates finiteness and invertibility (g_eff(u) > 0 for every direction).
GTensor make_gtensor(const Mat3& g, Level level, Orientation orientation);

/// Orientation-II tensor: conjugation by the C2 rotation about b.
/// Implemented as exact sign flips of the (d1,b) and (d2,b) couplings.
GTensor c2_conjugate(const GTensor& t);

/// Ground and excited orientation-I tensors; II derived on demand.
struct GTensorSet {
  GTensor ground_I;
  GTensor excited_I;

  GTensor ground(Orientation o) const;
  GTensor excited(Orientation o) const;
};

/// Named-matrix file: lines "ground_I <9 numbers row-major>" etc.
GTensorSet load_gtensors(const std::string& path);

/// Bias field: magnitude [T] and unit direction in (D1, D2, b).
struct FieldConfig {
  double magnitude = 0.0;  // tesla
  Vec3 direction{1.0, 0.0, 0.0};
};

FieldConfig make_field(double magnitude_T, const Vec3& direction);

/// Field direction at `angle_deg` from D1 in the (D1,D2) plane, tilted
/// towards b by `out_of_plane_deg`.
Vec3 field_direction(double angle_deg, double out_of_plane_deg = 0.0);

/// Er3+ electron-spin dipole moment expectations [J/T].
struct ErMoment {
  Vec3 mu_g;  // ground
  Vec3 mu_e;  // excited
};

/// Per-nucleus modulation parameters.
struct ModulationParams {
  double rho = 0.0;      ///< branching contrast, sin^2(theta) in [0,1]
  double delta_g = 0.0;  ///< ground-state splitting [rad/s]
  double delta_e = 0.0;  ///< excited-state splitting [rad/s]
};

/// Moment expectation of the lowest spin state:
///   <mu> = (mu_B/2) g g^T Bhat / |g^T Bhat|, sign fixed by minimising -mu.B.
/// Throws for B = 0 (direction undefined; see ZeroFieldPolicy).
Vec3 er_moment(const GTensor& g, const FieldConfig& field,
               const PhysicalConstants& consts = {});

/// Effective g-factor |g^T Bhat| for a unit direction.
double effective_g(const GTensor& g, const Vec3& direction);

/// Dipolar field of moment mu [J/T] at displacement r [Å]:
///   B = -(mu0/4pi) [ mu/r^3 - 3 (mu.r) r / r^5 ]   (SI, returns tesla)
Vec3 dipolar_field(const Vec3& mu, const Vec3& r_ang,
                   const PhysicalConstants& consts = {});

/// (rho, Delta, Delta') for one site: nuclear Zeeman splittings in the two
/// total fields B + B_dip(mu_g), B + B_dip(mu_e), and rho = sin^2 of the
/// angle between them.
ModulationParams modulation_params(const NucleusSite& site, const ErMoment& moments,
                                   const FieldConfig& field,
                                   const PhysicalConstants& consts = {});

/// One ModulationParams per site, cluster order preserved.
std::vector<ModulationParams> cluster_params(const Cluster& cluster,
                                             const ErMoment& moments,
                                             const FieldConfig& field,
                                             const PhysicalConstants& consts = {});

/// At B = 0 the moment expectation is ill-defined; the direction is then
/// frozen from a small reference field. Explicit, never silent.
struct ZeroFieldPolicy {
  Vec3 reference_direction{1.0, 0.0, 0.0};
  double reference_T = 1e-6;
};

/// Moments for both levels honouring the zero-field policy.
ErMoment compute_moments(const GTensor& ground, const GTensor& excited,
                         const FieldConfig& field, const ZeroFieldPolicy& policy,
                         const PhysicalConstants& consts = {});

}  // namespace shf

#endif
