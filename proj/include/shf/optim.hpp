#ifndef SHF_OPTIM_HPP
#define SHF_OPTIM_HPP

#include <functional>
#include <vector>

namespace shf {

struct ScalarMinResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bounded 1-D minimisation (golden section with parabolic steps, Brent) on
/// [lo, hi] to absolute tolerance xtol, followed by one parabolic refinement
/// so smooth noiseless minima are located well below xtol.
ScalarMinResult minimize_scalar_bounded(const std::function<double(double)>& f,
                                        double lo, double hi, double xtol,
                                        int max_iter = 200);

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step = 0.5,
                             int max_iter = 600, double ftol = 1e-15,
                             double xtol = 1e-10);

struct LevMarResult {
  std::vector<double> x;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

/// Small dense Levenberg-Marquardt with forward-difference Jacobian, for
/// polishing low-dimensional least-squares problems.
LevMarResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residuals,
    std::vector<double> x0, int max_iter = 200, double ftol = 1e-12,
    double xtol = 1e-12);

}  // namespace shf

#endif
