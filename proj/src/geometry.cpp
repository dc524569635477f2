#include "shf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "shf/errors.hpp"

namespace shf {

namespace {

void check_site_basics(int index, const Vec3& position, double distance) {
  if (index <= 0) throw ValidationError("site index must be positive");
  if (!position.finite() || !std::isfinite(distance))
    throw ValidationError("non-finite site coordinates (index " + std::to_string(index) + ")");
  if (distance < kNearestNeighbourAng - kDistanceToleranceAng - 1e-12)
    throw ValidationError("site " + std::to_string(index) + " closer than the nearest-neighbour bound " +
                          std::to_string(kNearestNeighbourAng) + " A");
}

bool site_order(const NucleusSite& a, const NucleusSite& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.index < b.index;
}

}  // namespace

NucleusSite make_site(int index, const Vec3& position, Orientation orientation) {
  const double d = position.norm();
  check_site_basics(index, position, d);
  return NucleusSite{index, position, d, orientation};
}

NucleusSite make_site_tabulated(int index, const Vec3& position, double distance,
                                Orientation orientation) {
  check_site_basics(index, position, distance);
  const double recomputed = position.norm();
  if (std::abs(recomputed - distance) > kDistanceToleranceAng) {
    std::ostringstream msg;
    msg << "site " << index << ": tabulated distance " << distance
        << " A deviates from recomputed " << recomputed << " A by more than "
        << kDistanceToleranceAng << " A";
    throw ValidationError(msg.str());
  }
  return NucleusSite{index, position, distance, orientation};
}

Cluster make_cluster(std::vector<NucleusSite> sites, Orientation orientation) {
  std::stable_sort(sites.begin(), sites.end(), site_order);
  std::unordered_set<int> seen;
  for (const auto& s : sites) {
    if (s.orientation != orientation)
      throw ValidationError("site " + std::to_string(s.index) + " orientation differs from cluster");
    if (!seen.insert(s.index).second)
      throw ValidationError("duplicate site index " + std::to_string(s.index));
  }
  return Cluster{std::move(sites), orientation};
}

Cluster load_cluster(const std::string& path, Orientation orientation) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cluster file: " + path);

  std::vector<NucleusSite> sites;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // commas behave as separators; '#' starts a comment
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double idx_raw, d, x, y, z;
    if (!(ss >> idx_raw)) continue;  // blank line
    if (!(ss >> d >> x >> y >> z)) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed row (need index, distance, D1, D2, b)");
    }
    double trailing;
    if (ss >> trailing)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": extra column");
    const int idx = static_cast<int>(idx_raw);
    if (static_cast<double>(idx) != idx_raw)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": non-integer index");
    try {
      sites.push_back(make_site_tabulated(idx, Vec3{x, y, z}, d, Orientation::I));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (sites.empty()) throw ValidationError(path + ": empty cluster");

  Cluster cluster = make_cluster(std::move(sites), Orientation::I);
  if (orientation == Orientation::II) cluster = c2_about_b(cluster);
  return cluster;
}

Vec3 c2_about_b(const Vec3& v) { return Vec3{-v.d1, -v.d2, v.b}; }

NucleusSite c2_about_b(const NucleusSite& site) {
  if (site.orientation != Orientation::I)
    throw ValidationError("c2_about_b expects an orientation-I site");
  NucleusSite out = site;
  out.position = c2_about_b(site.position);
  out.orientation = Orientation::II;
  return out;  // distance unchanged: the rotation is an exact isometry
}

Cluster c2_about_b(const Cluster& cluster) {
  if (cluster.orientation != Orientation::I)
    throw ValidationError("c2_about_b expects an orientation-I cluster");
  Cluster out;
  out.orientation = Orientation::II;
  out.sites.reserve(cluster.sites.size());
  for (const auto& s : cluster.sites) out.sites.push_back(c2_about_b(s));
  return out;
}

Cluster truncate_cluster(const Cluster& cluster, std::size_t n) {
  if (n == 0) throw ValidationError("truncation size must be positive");
  if (n > cluster.sites.size())
    throw ValidationError("requested " + std::to_string(n) + " sites but cluster has " +
                          std::to_string(cluster.sites.size()));
  Cluster out;
  out.orientation = cluster.orientation;
  out.sites.assign(cluster.sites.begin(), cluster.sites.begin() + static_cast<long>(n));
  return out;
}

}  // namespace shf
