#include "shf/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shf/errors.hpp"

namespace shf {

ScalarMinResult minimize_scalar_bounded(const std::function<double(double)>& f,
                                        double lo, double hi, double xtol, int max_iter) {
  if (!(hi > lo)) throw ValidationError("minimize_scalar_bounded: need hi > lo");
  // Brent's method (golden section + successive parabolic interpolation).
  const double golden = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + golden * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = xtol * 0.5 + 1e-18 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
      converged = true;
      break;
    }
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // parabola through (x,fx), (w,fw), (v,fv)
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etmp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etmp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m >= x) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= m) ? a - x : b - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + ((d >= 0) ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  // Parabolic refinement rounds: smooth noiseless minima land far inside xtol.
  for (double shrink : {1.0, 1.0 / 64.0, 1.0 / 4096.0}) {
    const double h = std::max(xtol * shrink, 1e-12 * std::abs(x));
    const double xl = std::max(lo, x - h), xr = std::min(hi, x + h);
    if (xr > x && x > xl) {
      const double fl = f(xl), fr = f(xr);
      const double denom = (x - xl) * (fx - fr) - (x - xr) * (fx - fl);
      if (denom != 0.0) {
        const double vx = x - 0.5 *
                                ((x - xl) * (x - xl) * (fx - fr) -
                                 (x - xr) * (x - xr) * (fx - fl)) /
                                denom;
        if (std::isfinite(vx) && vx > lo && vx < hi) {
          const double fvx = f(vx);
          if (fvx < fx) {
            x = vx;
            fx = fvx;
          }
        }
      }
    }
  }
  return ScalarMinResult{x, fx, iter, converged};
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, int max_iter,
                             double ftol, double xtol) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> fvals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fvals[i] = f(simplex[i]);

  int iter = 0;
  bool converged = false;
  std::vector<std::size_t> order(n + 1);
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      spread = std::max(spread, std::abs(simplex[worst][i] - simplex[best][i]));
    if (std::abs(fvals[worst] - fvals[best]) <= ftol * (std::abs(fvals[best]) + 1e-300) ||
        spread <= xtol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto point = [&](double coeff) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i)
        p[i] = centroid[i] + coeff * (simplex[worst][i] - centroid[i]);
      return p;
    };

    auto reflect = point(-1.0);
    const double fr = f(reflect);
    if (fr < fvals[best]) {
      auto expand = point(-2.0);
      const double fe = f(expand);
      if (fe < fr) {
        simplex[worst] = std::move(expand);
        fvals[worst] = fe;
      } else {
        simplex[worst] = std::move(reflect);
        fvals[worst] = fr;
      }
    } else if (fr < fvals[second]) {
      simplex[worst] = std::move(reflect);
      fvals[worst] = fr;
    } else {
      auto contract = point(fr < fvals[worst] ? -0.5 : 0.5);
      const double fc = f(contract);
      if (fc < std::min(fr, fvals[worst])) {
        simplex[worst] = std::move(contract);
        fvals[worst] = fc;
      } else {
        // shrink towards the best vertex
        for (std::size_t k = 0; k <= n; ++k) {
          if (k == best) continue;
          for (std::size_t i = 0; i < n; ++i)
            simplex[k][i] = simplex[best][i] + 0.5 * (simplex[k][i] - simplex[best][i]);
          fvals[k] = f(simplex[k]);
        }
      }
    }
  }
  std::size_t ibest = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fvals[i] < fvals[ibest]) ibest = i;
  return NelderMeadResult{simplex[ibest], fvals[ibest], iter, converged};
}

namespace {

bool solve_spd(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  // Gaussian elimination with partial pivoting; tiny systems only.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri * n + c] * b[c];
    b[ri] = s / a[ri * n + ri];
  }
  return true;
}

}  // namespace

LevMarResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residuals,
    std::vector<double> x0, int max_iter, double ftol, double xtol) {
  const std::size_t n = x0.size();
  auto r = residuals(x0);
  const std::size_t m = r.size();
  auto cost_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  };
  double cost = cost_of(r);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = false;

  std::vector<double> jac(m * n);
  for (; iter < max_iter; ++iter) {
    // forward-difference Jacobian
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x0[j]));
      auto xp = x0;
      xp[j] += h;
      const auto rp = residuals(xp);
      for (std::size_t i = 0; i < m; ++i) jac[i * n + j] = (rp[i] - r[i]) / h;
    }
    std::vector<double> jtj(n * n, 0.0), jtr(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < n; ++a) {
        jtr[a] += jac[i * n + a] * r[i];
        for (std::size_t b = a; b < n; ++b) jtj[a * n + b] += jac[i * n + a] * jac[i * n + b];
      }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < a; ++b) jtj[a * n + b] = jtj[b * n + a];

    bool stepped = false;
    for (int tries = 0; tries < 24; ++tries) {
      auto a_sys = jtj;
      for (std::size_t d = 0; d < n; ++d) a_sys[d * n + d] += lambda * jtj[d * n + d] + 1e-300;
      auto step = jtr;  // solves (JtJ + lambda diag) dx = Jt r
      if (!solve_spd(a_sys, step, n)) {
        lambda *= 10.0;
        continue;
      }
      auto x_new = x0;
      double step_norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        x_new[j] -= step[j];
        step_norm = std::max(step_norm, std::abs(step[j]));
      }
      const auto r_new = residuals(x_new);
      const double cost_new = cost_of(r_new);
      if (cost_new < cost) {
        const bool small_f = (cost - cost_new) <= ftol * cost;
        const bool small_x = step_norm <= xtol;
        x0 = std::move(x_new);
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        if (small_f || small_x) converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
    if (!stepped || converged) {
      if (!stepped) converged = true;  // no descent direction left
      break;
    }
  }
  return LevMarResult{std::move(x0), cost, iter, converged};
}

}  // namespace shf
