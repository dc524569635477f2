#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "shf/errors.hpp"
#include "shf/geometry.hpp"
#include "testutil.hpp"

using namespace shf;

namespace {

std::string write_temp(const std::string& dir, const std::string& name,
                       const std::string& content) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_cluster: shipped position file") {
  const auto cluster = load_cluster(test::data_file("positions_I.txt"), Orientation::I);
  CHECK(cluster.size() == 500);
  CHECK(cluster.orientation == Orientation::I);

  // nearest neighbour
  const auto& first = cluster.sites.front();
  CHECK(first.index == 1);
  CHECK(first.distance == doctest::Approx(3.40));
  CHECK(first.position.d1 == doctest::Approx(-0.66));
  CHECK(first.position.d2 == doctest::Approx(3.23));
  CHECK(first.position.b == doctest::Approx(-0.81));
  CHECK(first.position.norm() == doctest::Approx(3.397).epsilon(1e-3));

  // row 20 and the file-wide distance anchors
  const auto& s20 = cluster.sites[19];
  CHECK(s20.distance == doctest::Approx(6.48));
  CHECK(std::abs(std::sqrt(5.71 * 5.71 + 2.52 * 2.52 + 1.72 * 1.72) - 6.48) < 0.01);
  CHECK(cluster.sites[99].distance == doctest::Approx(8.6).epsilon(0.01));
  CHECK(cluster.sites[499].distance == doctest::Approx(18.5).epsilon(0.01));

  // sorted ascending; consistent tabulated distances
  for (std::size_t i = 0; i + 1 < cluster.size(); ++i)
    CHECK(cluster.sites[i].distance <= cluster.sites[i + 1].distance);
  for (const auto& s : cluster.sites)
    CHECK(std::abs(s.position.norm() - s.distance) <= kDistanceToleranceAng);
}

TEST_CASE("load_cluster: parsing and failure modes") {
  const auto dir = test::scratch_dir("geometry");

  SUBCASE("mixed separators, comments, blank lines") {
    const auto path = write_temp(dir, "ok.txt",
                                 "# comment line\n"
                                 "1, 3.40, -0.66, 3.23, -0.81\n"
                                 "\n"
                                 "2 3.46 -3.45 0.28 0.00   \n"
                                 "3,3.51,-1.66,-1.88,2.45 # trailing comment\n");
    const auto c = load_cluster(path, Orientation::I);
    CHECK(c.size() == 3);
    CHECK(c.sites[1].position.d1 == doctest::Approx(-3.45));
  }

  SUBCASE("empty file") {
    const auto path = write_temp(dir, "empty.txt", "# nothing here\n\n");
    CHECK_THROWS_WITH_AS(load_cluster(path, Orientation::I),
                         doctest::Contains("empty cluster"), ValidationError);
  }

  SUBCASE("malformed row reports the line number") {
    const auto path = write_temp(dir, "bad.txt", "1, 3.40, -0.66, 3.23, -0.81\n2, 3.46, oops\n");
    CHECK_THROWS_WITH_AS(load_cluster(path, Orientation::I), doctest::Contains(":2:"),
                         ValidationError);
  }

  SUBCASE("distance inconsistency beyond 0.01 A") {
    const auto path = write_temp(dir, "incons.txt", "1, 3.40, 3.00, 3.00, 3.00\n");
    CHECK_THROWS_AS(load_cluster(path, Orientation::I), ValidationError);
  }

  SUBCASE("duplicate index") {
    const auto path =
        write_temp(dir, "dup.txt", "1, 3.40, -0.66, 3.23, -0.81\n1, 3.46, -3.45, 0.28, 0.00\n");
    CHECK_THROWS_WITH_AS(load_cluster(path, Orientation::I),
                         doctest::Contains("duplicate"), ValidationError);
  }

  SUBCASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_cluster(dir + "/no_such_file.txt", Orientation::I), IoError);
  }

  SUBCASE("nearest-neighbour bound enforced") {
    const auto path = write_temp(dir, "close.txt", "1, 2.00, 2.00, 0.00, 0.00\n");
    CHECK_THROWS_AS(load_cluster(path, Orientation::I), ValidationError);
  }
}

TEST_CASE("c2_about_b: tabulated image vectors") {
  // first rows of the two orientation tables
  const auto s1 = make_site_tabulated(1, {-0.66, 3.23, -0.81}, 3.40, Orientation::I);
  const auto i1 = c2_about_b(s1);
  CHECK(i1.position.d1 == 0.66);
  CHECK(i1.position.d2 == -3.23);
  CHECK(i1.position.b == -0.81);
  CHECK(i1.orientation == Orientation::II);
  CHECK(i1.distance == s1.distance);

  const auto s2 = make_site_tabulated(2, {-3.45, 0.28, 0.00}, 3.46, Orientation::I);
  const auto i2 = c2_about_b(s2);
  CHECK(i2.position.d1 == 3.45);
  CHECK(i2.position.d2 == -0.28);
  CHECK(i2.position.b == 0.00);

  // fixed point on the rotation axis
  const auto axial = make_site(7, {0.0, 0.0, 5.0}, Orientation::I);
  const auto ia = c2_about_b(axial);
  CHECK(ia.position.d1 == 0.0);
  CHECK(ia.position.d2 == 0.0);
  CHECK(ia.position.b == 5.0);

  // orientation-II input rejected
  CHECK_THROWS_AS(c2_about_b(i1), ValidationError);
}

TEST_CASE("c2_about_b: involution and isometry, exactly") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  for (int k = 0; k < 1000; ++k) {
    Vec3 p{coord(rng), coord(rng), coord(rng)};
    if (p.norm() < kNearestNeighbourAng) continue;
    const auto site = make_site(k + 1, p, Orientation::I);
    const auto back = c2_about_b(make_site(k + 1, c2_about_b(p), Orientation::I));
    CHECK(back.position.d1 == p.d1);  // two applications give the exact original
    const Vec3 twice = c2_about_b(c2_about_b(p));
    CHECK(twice.d1 == p.d1);
    CHECK(twice.d2 == p.d2);
    CHECK(twice.b == p.b);
    CHECK(c2_about_b(site).position.norm() == p.norm());  // bitwise isometry
  }
}

TEST_CASE("load_cluster orientation II equals the C2 image of orientation I") {
  const auto path = test::data_file("positions_I.txt");
  const auto ci = load_cluster(path, Orientation::I);
  const auto cii = load_cluster(path, Orientation::II);
  REQUIRE(ci.size() == cii.size());
  CHECK(cii.orientation == Orientation::II);
  for (std::size_t i = 0; i < ci.size(); ++i) {
    CHECK(cii.sites[i].position.d1 == -ci.sites[i].position.d1);
    CHECK(cii.sites[i].position.d2 == -ci.sites[i].position.d2);
    CHECK(cii.sites[i].position.b == ci.sites[i].position.b);
    CHECK(cii.sites[i].distance == ci.sites[i].distance);
  }
}

TEST_CASE("truncate_cluster") {
  const auto cluster = load_cluster(test::data_file("positions_I.txt"), Orientation::I);

  const auto c100 = truncate_cluster(cluster, 100);
  CHECK(c100.size() == 100);
  CHECK(c100.sites.back().distance == doctest::Approx(8.6).epsilon(0.01));

  const auto c1 = truncate_cluster(cluster, 1);
  CHECK(c1.sites.front().distance == doctest::Approx(3.40));

  const auto all = truncate_cluster(cluster, cluster.size());
  CHECK(all.size() == cluster.size());
  CHECK(all.sites.back().index == cluster.sites.back().index);

  CHECK_THROWS_AS(truncate_cluster(cluster, cluster.size() + 1), ValidationError);
  CHECK_THROWS_AS(truncate_cluster(cluster, 0), ValidationError);
}

TEST_CASE("make_cluster sorts stably by (distance, index)") {
  std::vector<NucleusSite> sites;
  sites.push_back(make_site_tabulated(12, {1.01, 5.11, 1.64}, 5.46, Orientation::I));
  sites.push_back(make_site_tabulated(11, {-1.01, -5.11, 1.64}, 5.46, Orientation::I));
  sites.push_back(make_site_tabulated(1, {-0.66, 3.23, -0.81}, 3.40, Orientation::I));
  const auto c = make_cluster(sites, Orientation::I);
  CHECK(c.sites[0].index == 1);
  CHECK(c.sites[1].index == 11);  // tie broken by index
  CHECK(c.sites[2].index == 12);

  // sorting an already sorted cluster is the identity
  const auto again = make_cluster(c.sites, Orientation::I);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(again.sites[i].index == c.sites[i].index);
}
