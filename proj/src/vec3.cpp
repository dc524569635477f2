#include "shf/vec3.hpp"

#include <algorithm>
#include <cmath>

namespace shf {

std::array<double, 3> symmetric_eigenvalues(const Mat3& m) {
  // Cyclic Jacobi on a copy; 3x3 converges in a handful of sweeps.
  double a[3][3] = {{m(0, 0), m(0, 1), m(0, 2)},
                    {m(1, 0), m(1, 1), m(1, 2)},
                    {m(2, 0), m(2, 1), m(2, 2)}};
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-15 * (std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + 1e-300))
      break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::array<double, 3> singular_values(const Mat3& m) {
  const Mat3 mtm = m.transpose().mul(m);
  auto ev = symmetric_eigenvalues(mtm);
  for (double& x : ev) x = std::sqrt(std::max(x, 0.0));
  return ev;
}

}  // namespace shf
