#include <doctest.h>

#include <cmath>
#include <random>

#include "shf/curve_io.hpp"
#include "shf/errors.hpp"
#include "shf/fit.hpp"
#include "testutil.hpp"

using namespace shf;

namespace {

const PhysicalConstants kC{};

struct Fixture {
  Cluster cluster;
  GTensorSet gset;

  Fixture()
      : cluster(truncate_cluster(load_cluster(test::data_file("positions_I.txt"), Orientation::I),
                                 100)),
        gset(load_gtensors(test::data_file("gtensors_site1.txt"))) {}

  FieldConfig field(double mT) const { return make_field(mT * 1e-3, field_direction(50.0)); }
};

}  // namespace

TEST_CASE("forward_model: neutral limit is constant one") {
  Fixture fx;
  GTensorSet same = fx.gset;
  same.excited_I = make_gtensor(fx.gset.ground_I.g, Level::excited, Orientation::I);
  const TimeGrid grid = uniform_grid(100e-6, 101);
  const auto I = forward_model(fx.field(133.0), fx.cluster, same, 1e6 /* ~infinite T2 */, grid);
  for (double v : I) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("forward_model: normalised at t = 0 and bounded") {
  Fixture fx;
  const TimeGrid grid = uniform_grid(150e-6, 301);
  for (double mT : {0.0, 50.0, 133.0}) {
    ZeroFieldPolicy policy;
    policy.reference_direction = field_direction(50.0);
    const auto I = forward_model(fx.field(mT), fx.cluster, fx.gset, 58e-6, grid, policy);
    CHECK(I[0] == 1.0);
    for (double v : I) {
      CHECK(v <= 1.0 + 1e-12);
      CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("forward_model: cluster-size self-convergence at 133 mT") {
  Fixture fx;
  const auto full = load_cluster(test::data_file("positions_I.txt"), Orientation::I);
  const TimeGrid grid = default_grid();
  const auto i100 = forward_model(fx.field(133.0), truncate_cluster(full, 100), fx.gset, 58e-6, grid);
  const auto i120 = forward_model(fx.field(133.0), truncate_cluster(full, 120), fx.gset, 58e-6, grid);
  double ss = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = i100[i] - i120[i];
    ss += d * d;
  }
  const double rms = std::sqrt(ss / static_cast<double>(grid.size()));
  CHECK(rms < 0.01);
  CHECK(rms > 0.0);
}

TEST_CASE("fit_shared_t2: noiseless single-curve round trip within 0.1%") {
  Fixture fx;
  const TimeGrid grid = default_grid();
  const auto model = forward_model(fx.field(50.0), fx.cluster, fx.gset, 40e-6, grid);
  const auto curve = make_decay_curve("50mT", grid.t, model);

  const auto result = fit_shared_t2({curve}, {fx.field(50.0)}, fx.cluster, fx.gset);
  CHECK(result.converged);
  CHECK(result.t2 == doctest::Approx(40e-6).epsilon(1e-3));
  CHECK(result.scales[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(result.rms[0] < 1e-6);
}

TEST_CASE("fit_shared_t2: scales match the closed form and scale with the data") {
  Fixture fx;
  const TimeGrid grid = uniform_grid(120e-6, 241);
  const auto model = forward_model(fx.field(133.0), fx.cluster, fx.gset, 58e-6, grid);

  std::vector<double> scaled(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) scaled[i] = 2.6 * model[i];
  const auto c1 = make_decay_curve("a", grid.t, model);
  const auto c2 = make_decay_curve("b", grid.t, scaled);

  const auto r1 = fit_shared_t2({c1}, {fx.field(133.0)}, fx.cluster, fx.gset);
  const auto r2 = fit_shared_t2({c2}, {fx.field(133.0)}, fx.cluster, fx.gset);
  CHECK(r2.t2 == doctest::Approx(r1.t2).epsilon(1e-9));
  CHECK(r2.scales[0] == doctest::Approx(2.6 * r1.scales[0]).epsilon(1e-6));

  // closed form: scale = sum(model*data)/sum(model^2) over valid samples
  const auto refit_model = forward_model(fx.field(133.0), fx.cluster, fx.gset, r1.t2, grid);
  double my = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!c1.valid[i]) continue;
    my += refit_model[i] * c1.intensity[i];
    mm += refit_model[i] * refit_model[i];
  }
  CHECK(r1.scales[0] == doctest::Approx(my / mm).epsilon(1e-12));
}

TEST_CASE("fit_shared_t2: duplicated curve leaves T2 unchanged") {
  Fixture fx;
  const TimeGrid grid = uniform_grid(100e-6, 201);
  const auto model = forward_model(fx.field(50.0), fx.cluster, fx.gset, 58e-6, grid);
  const auto curve = make_decay_curve("50mT", grid.t, model);
  const auto one = fit_shared_t2({curve}, {fx.field(50.0)}, fx.cluster, fx.gset);
  const auto two = fit_shared_t2({curve, curve}, {fx.field(50.0), fx.field(50.0)}, fx.cluster,
                                 fx.gset);
  CHECK(two.t2 == doctest::Approx(one.t2).epsilon(1e-12));
  CHECK(two.scales[0] == doctest::Approx(two.scales[1]).epsilon(1e-12));
}

TEST_CASE("fit_shared_t2: the 2 us mask is a no-op when no early samples exist") {
  Fixture fx;
  std::vector<double> t;
  for (int i = 0; i < 200; ++i) t.push_back(2.5e-6 + 0.5e-6 * i);
  const TimeGrid grid = make_time_grid(t);
  const auto model = forward_model(fx.field(50.0), fx.cluster, fx.gset, 58e-6, grid);
  const auto masked = make_decay_curve("m", grid.t, model);            // default cutoff
  const auto unmasked = make_decay_curve("u", grid.t, model, 0.0);     // keep everything
  CHECK(masked.valid_count() == unmasked.valid_count());
  const auto r1 = fit_shared_t2({masked}, {fx.field(50.0)}, fx.cluster, fx.gset);
  const auto r2 = fit_shared_t2({unmasked}, {fx.field(50.0)}, fx.cluster, fx.gset);
  CHECK(r1.t2 == r2.t2);
}

TEST_CASE("fit_shared_t2: validation") {
  Fixture fx;
  CHECK_THROWS_AS(fit_shared_t2({}, {}, fx.cluster, fx.gset), ValidationError);

  const auto tiny = make_decay_curve("tiny", {3e-6, 4e-6, 5e-6}, {1.0, 0.9, 0.8});
  CHECK_THROWS_WITH_AS(fit_shared_t2({tiny}, {fx.field(50.0)}, fx.cluster, fx.gset),
                       doctest::Contains("fewer than 5"), ValidationError);

  const TimeGrid grid = uniform_grid(50e-6, 21);
  const auto zero = make_decay_curve("zero", grid.t, std::vector<double>(grid.size(), 0.0));
  CHECK_THROWS_AS(fit_shared_t2({zero}, {fx.field(50.0)}, fx.cluster, fx.gset), NumericsError);
}

TEST_CASE("fit_shared_t2: log-domain option lands on the same answer for clean data") {
  Fixture fx;
  const TimeGrid grid = uniform_grid(100e-6, 101);
  const auto model = forward_model(fx.field(133.0), fx.cluster, fx.gset, 58e-6, grid);
  std::vector<double> scaled(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) scaled[i] = 1.7 * model[i];
  const auto curve = make_decay_curve("133mT", grid.t, scaled);
  SharedT2Options options;
  options.log_residuals = true;
  const auto r = fit_shared_t2({curve}, {fx.field(133.0)}, fx.cluster, fx.gset, options);
  CHECK(r.t2 == doctest::Approx(58e-6).epsilon(0.01));
}

TEST_CASE("residual_report") {
  Fixture fx;
  const TimeGrid grid = uniform_grid(80e-6, 161);
  const auto model = forward_model(fx.field(50.0), fx.cluster, fx.gset, 58e-6, grid);

  SUBCASE("perfect fit has zero residuals") {
    const auto curve = make_decay_curve("50mT", grid.t, model);
    const auto result = fit_shared_t2({curve}, {fx.field(50.0)}, fx.cluster, fx.gset);
    const auto fitted_model = forward_model(fx.field(50.0), fx.cluster, fx.gset, result.t2, grid);
    const auto report = residual_report(result, {curve}, {fitted_model});
    CHECK(report.curves.size() == 1);
    CHECK(report.curves[0].rms < 1e-6);
    CHECK(report.total_rms < 1e-6);
    CHECK(report.curves[0].t12.size() == curve.valid_count());
  }

  SUBCASE("noise level is recovered by the per-curve RMS") {
    std::mt19937_64 rng(404);
    const double scale = 1.4, sigma = 0.01 * scale;
    std::vector<double> noisy(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
      noisy[i] = std::max(scale * model[i] + sigma * test::normal(rng), 0.0);
    const auto curve = make_decay_curve("noisy", grid.t, noisy);
    const auto result = fit_shared_t2({curve}, {fx.field(50.0)}, fx.cluster, fx.gset);
    const auto fitted_model = forward_model(fx.field(50.0), fx.cluster, fx.gset, result.t2, grid);
    const auto report = residual_report(result, {curve}, {fitted_model});
    CHECK(report.curves[0].rms == doctest::Approx(sigma).epsilon(0.2));
  }

  SUBCASE("mismatched trace length is a structural error") {
    const auto curve = make_decay_curve("50mT", grid.t, model);
    const auto result = fit_shared_t2({curve}, {fx.field(50.0)}, fx.cluster, fx.gset);
    std::vector<double> short_model(model.begin(), model.end() - 3);
    CHECK_THROWS_AS(residual_report(result, {curve}, {short_model}), ValidationError);
  }
}

TEST_CASE("forward_model: the 133 mT curve is visibly modulated") {
  Fixture fx;
  const TimeGrid grid = uniform_grid(50e-6, 501);
  const auto I = forward_model(fx.field(133.0), fx.cluster, fx.gset, 58e-6, grid);
  int extrema = 0;
  for (std::size_t i = 1; i + 1 < I.size(); ++i)
    if ((I[i] - I[i - 1]) * (I[i + 1] - I[i]) < 0.0) ++extrema;
  CHECK(extrema >= 10);  // beats on top of the coherence decay
}

TEST_CASE("forward_envelope composes both subsite orientations") {
  Fixture fx;
  // out of plane the orientations differ, exposing the averaging wiring
  const auto field = make_field(0.05, field_direction(50.0, 4.0));
  const TimeGrid grid = uniform_grid(40e-6, 161);

  const auto mom_I = compute_moments(fx.gset.ground(Orientation::I),
                                     fx.gset.excited(Orientation::I), field, {});
  const auto mom_II = compute_moments(fx.gset.ground(Orientation::II),
                                      fx.gset.excited(Orientation::II), field, {});
  const auto v_I = total_envelope(cluster_params(fx.cluster, mom_I, field), grid);
  const auto v_II =
      total_envelope(cluster_params(c2_about_b(fx.cluster), mom_II, field), grid);

  const auto v = forward_envelope(field, fx.cluster, fx.gset, grid);
  double distinct = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(v[i] == doctest::Approx(0.5 * (v_I[i] + v_II[i])).epsilon(1e-14));
    distinct = std::max(distinct, std::abs(v_I[i] - v_II[i]));
  }
  CHECK(distinct > 1e-3);  // the average is not a degenerate copy of either
}

TEST_CASE("forward_model: frozen anchors at the 50 mT default configuration") {
  // values cross-checked to 12 digits against an independent implementation
  Fixture fx;
  const TimeGrid grid = make_time_grid({1e-6, 5e-6, 20e-6, 100e-6});
  const auto I = forward_model(fx.field(50.0), fx.cluster, fx.gset, 58e-6, grid);
  CHECK(I[0] == doctest::Approx(0.392284128295).epsilon(1e-9));
  CHECK(I[1] == doctest::Approx(0.00432170563287).epsilon(1e-9));
  CHECK(I[2] == doctest::Approx(0.0242998379784).epsilon(1e-9));
  CHECK(I[3] == doctest::Approx(0.000225982561429).epsilon(1e-9));
}
