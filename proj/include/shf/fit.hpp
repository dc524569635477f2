#ifndef SHF_FIT_HPP
#define SHF_FIT_HPP

#include <string>
#include <vector>

#include "shf/decay_curve.hpp"
#include "shf/echo.hpp"
#include "shf/geometry.hpp"
#include "shf/spincore.hpp"
#include "shf/time_grid.hpp"

namespace shf {

/// Shared-T2 multi-curve fit output.
struct FitResult {
  double t2 = 0.0;                 // seconds, shared across curves
  std::vector<double> scales;      // one positive factor per curve
  std::vector<double> rms;         // per-curve intensity-domain RMS residual
  double objective = 0.0;          // summed squared residuals at the optimum
  int iterations = 0;
  bool converged = false;
};

/// Full forward model at one field: two-subsite-averaged envelope squared
/// times exp(-4 t12/T2), equal to 1 at t12 = 0. The cluster holds
/// orientation-I sites; orientation II is derived internally.
std::vector<double> forward_model(const FieldConfig& field, const Cluster& cluster,
                                  const GTensorSet& gset, double t2,
                                  const TimeGrid& grid,
                                  const ZeroFieldPolicy& policy = {},
                                  const PhysicalConstants& consts = {});

/// Two-subsite-averaged envelope only (no T2 factor).
std::vector<double> forward_envelope(const FieldConfig& field, const Cluster& cluster,
                                     const GTensorSet& gset, const TimeGrid& grid,
                                     const ZeroFieldPolicy& policy = {},
                                     const PhysicalConstants& consts = {});

struct SharedT2Options {
  double t2_lo = 5e-6;
  double t2_hi = 500e-6;
  double t2_tol = 0.1e-6;
  bool log_residuals = false;  ///< optimise on log-intensity instead
  ZeroFieldPolicy policy{};
  PhysicalConstants consts{};
};

/// Joint fit of one T2 shared by every curve, per-curve scale eliminated in
/// closed form (scale = sum(model*data)/sum(model^2) over valid samples).
/// The model is evaluated exactly at each curve's t12 values.
FitResult fit_shared_t2(const std::vector<DecayCurve>& curves,
                        const std::vector<FieldConfig>& fields, const Cluster& cluster,
                        const GTensorSet& gset, const SharedT2Options& options = {});

/// Per-curve diagnostics after a fit.
struct ResidualReport {
  struct CurveEntry {
    std::string label;
    double scale = 0.0;
    double rms = 0.0;
    std::vector<double> t12;                  // valid samples only
    std::vector<double> normalized_residual;  // (data - scale*model)/scale
  };
  std::vector<CurveEntry> curves;
  double total_rms = 0.0;
  double t2 = 0.0;
};

/// Builds the report from fitted scales and per-curve model traces (full
/// sample vectors, same length as each curve). Throws on length mismatch.
ResidualReport residual_report(const FitResult& result,
                               const std::vector<DecayCurve>& curves,
                               const std::vector<std::vector<double>>& models);

}  // namespace shf

#endif
