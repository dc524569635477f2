#include "shf/spincore.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "shf/errors.hpp"

namespace shf {

GTensor make_gtensor(const Mat3& g, Level level, Orientation orientation) {
  if (!g.finite()) throw ValidationError("g-tensor has non-finite entries");
  const auto sv = singular_values(g);
  if (sv[0] <= 0.0)
    throw ValidationError("singular g-tensor: effective g-factor vanishes for some direction");
  return GTensor{g, level, orientation};
}

GTensor c2_conjugate(const GTensor& t) {
  // R g R with R = diag(-1,-1,1): flips the (d1,b) and (d2,b) couplings.
  Mat3 g = t.g;
  g(0, 2) = -g(0, 2);
  g(1, 2) = -g(1, 2);
  g(2, 0) = -g(2, 0);
  g(2, 1) = -g(2, 1);
  const Orientation o = t.orientation == Orientation::I ? Orientation::II : Orientation::I;
  return GTensor{g, t.level, o};
}

GTensor GTensorSet::ground(Orientation o) const {
  return o == Orientation::I ? ground_I : c2_conjugate(ground_I);
}

GTensor GTensorSet::excited(Orientation o) const {
  return o == Orientation::I ? excited_I : c2_conjugate(excited_I);
}

GTensorSet load_gtensors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open g-tensor file: " + path);

  bool have_g = false, have_e = false;
  Mat3 mg, me;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string name;
    if (!(ss >> name)) continue;
    Mat3 m;
    for (int k = 0; k < 9; ++k)
      if (!(ss >> m.a[static_cast<std::size_t>(k)]))
        throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 9 numbers after '" + name + "'");
    if (name == "ground_I") {
      mg = m;
      have_g = true;
    } else if (name == "excited_I") {
      me = m;
      have_e = true;
    } else {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown matrix name '" + name + "'");
    }
  }
  if (!have_g || !have_e)
    throw ValidationError(path + ": need both ground_I and excited_I matrices");
  return GTensorSet{make_gtensor(mg, Level::ground, Orientation::I),
                    make_gtensor(me, Level::excited, Orientation::I)};
}

FieldConfig make_field(double magnitude_T, const Vec3& direction) {
  if (!(magnitude_T >= 0.0) || !std::isfinite(magnitude_T))
    throw ValidationError("field magnitude must be finite and >= 0");
  if (!direction.finite()) throw ValidationError("field direction not finite");
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw ValidationError("field direction must be a unit vector (|u| - 1 within 1e-12)");
  return FieldConfig{magnitude_T, direction};
}

Vec3 field_direction(double angle_deg, double out_of_plane_deg) {
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double o = out_of_plane_deg * std::numbers::pi / 180.0;
  Vec3 u{std::cos(a) * std::cos(o), std::sin(a) * std::cos(o), std::sin(o)};
  // keep the in-plane case exact so the two subsites stay bit-identical
  if (out_of_plane_deg == 0.0) u.b = 0.0;
  return u.normalized();
}

double effective_g(const GTensor& g, const Vec3& direction) {
  return g.g.tmul(direction).norm();
}

Vec3 er_moment(const GTensor& g, const FieldConfig& field, const PhysicalConstants& consts) {
  if (field.magnitude <= 0.0)
    throw ValidationError(
        "er_moment: zero bias field leaves the spin direction undefined; "
        "use a ZeroFieldPolicy reference direction (compute_moments)");
  const Vec3 w = g.g.tmul(field.direction);
  const double geff = w.norm();
  if (geff <= 0.0) throw NumericsError("er_moment: g^T B vanished");
  const Vec3 m = g.g.mul(w / geff) * (0.5 * consts.mu_B);
  // lowest Zeeman level: moment projection on B positive (minimises -mu.B)
  return m.dot(field.direction) >= 0.0 ? m : -m;
}

Vec3 dipolar_field(const Vec3& mu, const Vec3& r_ang, const PhysicalConstants& consts) {
  const Vec3 r = r_ang * kAngstrom;
  const double rn2 = r.norm2();
  if (rn2 <= 0.0) throw ValidationError("dipolar_field: r = 0 is singular");
  const double rn = std::sqrt(rn2);
  const double rn3 = rn2 * rn;
  const double rn5 = rn3 * rn2;
  return (mu / rn3 - r * (3.0 * mu.dot(r) / rn5)) * (-consts.mu0_over_4pi());
}

ModulationParams modulation_params(const NucleusSite& site, const ErMoment& moments,
                                   const FieldConfig& field, const PhysicalConstants& consts) {
  const Vec3 bias = field.direction * field.magnitude;
  const Vec3 bg = bias + dipolar_field(moments.mu_g, site.position, consts);
  const Vec3 be = bias + dipolar_field(moments.mu_e, site.position, consts);
  const double ng2 = bg.norm2();
  const double ne2 = be.norm2();
  if (ng2 <= 0.0 || ne2 <= 0.0)
    throw NumericsError("modulation_params: total field vanished, branching contrast undefined");
  // rho = sin^2(theta) via |Bg x Be|^2 / (|Bg|^2 |Be|^2); robust at small angles
  const double rho = bg.cross(be).norm2() / (ng2 * ne2);
  const double delta_g = kTwoPi * consts.mu_Y_over_h * std::sqrt(ng2);
  const double delta_e = kTwoPi * consts.mu_Y_over_h * std::sqrt(ne2);
  return ModulationParams{rho, delta_g, delta_e};
}

std::vector<ModulationParams> cluster_params(const Cluster& cluster, const ErMoment& moments,
                                             const FieldConfig& field,
                                             const PhysicalConstants& consts) {
  if (cluster.sites.empty()) throw ValidationError("cluster_params: empty cluster");
  std::vector<ModulationParams> out;
  out.reserve(cluster.sites.size());
  for (const auto& s : cluster.sites)
    out.push_back(modulation_params(s, moments, field, consts));
  return out;
}

ErMoment compute_moments(const GTensor& ground, const GTensor& excited,
                         const FieldConfig& field, const ZeroFieldPolicy& policy,
                         const PhysicalConstants& consts) {
  FieldConfig eff = field;
  if (field.magnitude <= 0.0) {
    eff = make_field(policy.reference_T, policy.reference_direction.normalized());
  }
  return ErMoment{er_moment(ground, eff, consts), er_moment(excited, eff, consts)};
}

}  // namespace shf
