#ifndef SHF_GEOMETRY_HPP
#define SHF_GEOMETRY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "shf/vec3.hpp"

namespace shf {

/// Magnetic subsite orientation; II is the C2-about-b image of I.
enum class Orientation { I, II };

inline const char* to_string(Orientation o) { return o == Orientation::I ? "I" : "II"; }

/// Closest allowed Y3+ distance from the dopant [Å].
inline constexpr double kNearestNeighbourAng = 3.40;

/// Tabulated distances carry two decimals; consistency checked to 0.01 Å.
inline constexpr double kDistanceToleranceAng = 0.01;

/// One Y3+ lattice site. Positions and distances in ångström.
struct NucleusSite {
  int index = 0;
  Vec3 position;      // optical frame (D1, D2, b)
  double distance = 0.0;
  Orientation orientation = Orientation::I;
};

/// Validating constructor; distance is recomputed from the position.
NucleusSite make_site(int index, const Vec3& position, Orientation orientation);

/// Validating constructor keeping a tabulated distance (file loads).
NucleusSite make_site_tabulated(int index, const Vec3& position, double distance,
                                Orientation orientation);

/// Ordered cluster of sites, ascending by distance (ties by index).
struct Cluster {
  std::vector<NucleusSite> sites;
  Orientation orientation = Orientation::I;

  std::size_t size() const { return sites.size(); }
};

/// Sorts, checks index uniqueness and the shared orientation tag.
Cluster make_cluster(std::vector<NucleusSite> sites, Orientation orientation);

/// Loads a position file (one site per line: index, distance, D1, D2, b;
/// comma or whitespace separated, '#' comments). The file holds orientation-I
/// coordinates; requesting Orientation::II applies the C2 rotation per site.
Cluster load_cluster(const std::string& path, Orientation orientation);

/// C2 rotation about b: (d1, d2, b) -> (-d1, -d2, b). Exact involution.
NucleusSite c2_about_b(const NucleusSite& site);
Vec3 c2_about_b(const Vec3& v);

/// C2 image of a whole cluster (orientation I -> II).
Cluster c2_about_b(const Cluster& cluster);

/// First n sites by distance.
Cluster truncate_cluster(const Cluster& cluster, std::size_t n);

}  // namespace shf

#endif
