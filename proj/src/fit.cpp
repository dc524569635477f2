#include "shf/fit.hpp"

#include <cmath>

#include "shf/errors.hpp"
#include "shf/optim.hpp"

namespace shf {

std::vector<double> forward_envelope(const FieldConfig& field, const Cluster& cluster,
                                     const GTensorSet& gset, const TimeGrid& grid,
                                     const ZeroFieldPolicy& policy,
                                     const PhysicalConstants& consts) {
  if (cluster.orientation != Orientation::I)
    throw ValidationError("forward_envelope: pass the orientation-I cluster");
  const Cluster cluster_II = c2_about_b(cluster);

  const ErMoment mom_I =
      compute_moments(gset.ground(Orientation::I), gset.excited(Orientation::I), field, policy, consts);
  const ErMoment mom_II =
      compute_moments(gset.ground(Orientation::II), gset.excited(Orientation::II), field, policy, consts);

  const auto params_I = cluster_params(cluster, mom_I, field, consts);
  const auto params_II = cluster_params(cluster_II, mom_II, field, consts);
  return two_subsite_envelope(params_I, params_II, grid);
}

std::vector<double> forward_model(const FieldConfig& field, const Cluster& cluster,
                                  const GTensorSet& gset, double t2, const TimeGrid& grid,
                                  const ZeroFieldPolicy& policy,
                                  const PhysicalConstants& consts) {
  return echo_intensity(forward_envelope(field, cluster, gset, grid, policy, consts), t2, grid);
}

namespace {

struct CurveData {
  std::vector<double> t;     // valid samples
  std::vector<double> y;
  std::vector<double> env2;  // squared two-subsite envelope at t (T2-free)
};

}  // namespace

FitResult fit_shared_t2(const std::vector<DecayCurve>& curves,
                        const std::vector<FieldConfig>& fields, const Cluster& cluster,
                        const GTensorSet& gset, const SharedT2Options& options) {
  if (curves.empty()) throw ValidationError("fit_shared_t2: no curves");
  if (curves.size() != fields.size())
    throw ValidationError("fit_shared_t2: one field configuration per curve required");

  // The envelope does not depend on T2: evaluate it once per curve, exactly
  // at the curve's own valid t12 values (no resampling).
  std::vector<CurveData> data(curves.size());
  for (std::size_t c = 0; c < curves.size(); ++c) {
    auto& d = data[c];
    for (std::size_t i = 0; i < curves[c].size(); ++i)
      if (curves[c].valid[i]) {
        d.t.push_back(curves[c].t12[i]);
        d.y.push_back(curves[c].intensity[i]);
      }
    if (d.t.size() < 5)
      throw ValidationError("fit_shared_t2: curve '" + curves[c].label +
                            "' has fewer than 5 valid samples");
    const TimeGrid grid = make_time_grid(d.t);
    const auto env =
        forward_envelope(fields[c], cluster, gset, grid, options.policy, options.consts);
    d.env2.resize(env.size());
    for (std::size_t i = 0; i < env.size(); ++i) d.env2[i] = env[i] * env[i];
  }

  auto model_value = [](const CurveData& d, double t2, std::size_t i) {
    return d.env2[i] * std::exp(-4.0 * d.t[i] / t2);
  };

  // For fixed T2 the best scale has the closed form sum(m y)/sum(m m); the
  // outer problem is a smooth 1-D search in T2. In the log domain the scale
  // becomes an additive offset, eliminated by centring.
  auto objective = [&](double t2) {
    double total = 0.0;
    for (const auto& d : data) {
      const std::size_t n = d.t.size();
      if (options.log_residuals) {
        double off = 0.0;
        std::vector<double> diff(n);
        for (std::size_t i = 0; i < n; ++i) {
          diff[i] = std::log(std::max(d.y[i], 1e-300)) -
                    std::log(std::max(model_value(d, t2, i), 1e-300));
          off += diff[i];
        }
        off /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) total += (diff[i] - off) * (diff[i] - off);
      } else {
        double my = 0.0, mm = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double mv = model_value(d, t2, i);
          my += mv * d.y[i];
          mm += mv * mv;
          yy += d.y[i] * d.y[i];
        }
        const double scale = mm > 0.0 ? my / mm : 0.0;
        total += yy - 2.0 * scale * my + scale * scale * mm;
      }
    }
    return total;
  };

  const auto opt = minimize_scalar_bounded(objective, options.t2_lo, options.t2_hi,
                                           options.t2_tol);

  FitResult result;
  result.t2 = opt.x;
  result.iterations = opt.iterations;
  result.converged = opt.converged;
  result.objective = opt.f;
  for (const auto& d : data) {
    double my = 0.0, mm = 0.0;
    std::vector<double> mv(d.t.size());
    for (std::size_t i = 0; i < d.t.size(); ++i) {
      mv[i] = model_value(d, result.t2, i);
      my += mv[i] * d.y[i];
      mm += mv[i] * mv[i];
    }
    const double scale = mm > 0.0 ? my / mm : 0.0;
    if (!(scale > 0.0))
      throw NumericsError("fit_shared_t2: non-positive optimal scale (data incompatible with model)");
    double ss = 0.0;
    for (std::size_t i = 0; i < d.t.size(); ++i) {
      const double r = d.y[i] - scale * mv[i];
      ss += r * r;
    }
    result.scales.push_back(scale);
    result.rms.push_back(std::sqrt(ss / static_cast<double>(d.t.size())));
  }
  if (!result.converged)
    throw NumericsError("fit_shared_t2: T2 search did not converge");
  return result;
}

ResidualReport residual_report(const FitResult& result,
                               const std::vector<DecayCurve>& curves,
                               const std::vector<std::vector<double>>& models) {
  if (curves.size() != models.size() || curves.size() != result.scales.size())
    throw ValidationError("residual_report: curves/models/scales count mismatch");
  ResidualReport report;
  report.t2 = result.t2;
  double total_ss = 0.0;
  std::size_t total_n = 0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (models[c].size() != curves[c].size())
      throw ValidationError("residual_report: model trace length differs from curve '" +
                            curves[c].label + "'");
    ResidualReport::CurveEntry entry;
    entry.label = curves[c].label;
    entry.scale = result.scales[c];
    double ss = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < curves[c].size(); ++i) {
      if (!curves[c].valid[i]) continue;
      const double r = curves[c].intensity[i] - entry.scale * models[c][i];
      entry.t12.push_back(curves[c].t12[i]);
      entry.normalized_residual.push_back(r / entry.scale);
      ss += r * r;
      ++n;
    }
    entry.rms = n > 0 ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
    total_ss += ss;
    total_n += n;
    report.curves.push_back(std::move(entry));
  }
  report.total_rms = total_n > 0 ? std::sqrt(total_ss / static_cast<double>(total_n)) : 0.0;
  return report;
}

}  // namespace shf
