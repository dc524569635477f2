#include "shf/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <regex>
#include <sstream>

#include "shf/config.hpp"
#include "shf/curve_io.hpp"
#include "shf/echo.hpp"
#include "shf/errors.hpp"
#include "shf/fit.hpp"
#include "shf/geometry.hpp"
#include "shf/sphere.hpp"
#include "shf/spincore.hpp"
#include "shf/version.hpp"

namespace shf::cli {

namespace {

using nlohmann::json;

std::string format_field(double mT) {
  std::ostringstream ss;
  ss << mT << "mT";
  return ss.str();
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["field_mT"] = cfg.field_mT;
  j["field_angle_deg"] = cfg.field_angle_deg;
  j["field_out_of_plane_deg"] = cfg.field_out_of_plane_deg;
  j["cluster_file"] = cfg.cluster_file;
  j["cluster_n"] = cfg.cluster_n;
  j["gtensor_file"] = cfg.gtensor_file;
  if (cfg.t2_us) j["t2_us"] = *cfg.t2_us;
  else j["t2_us"] = "fit";
  j["grid_t_max_us"] = cfg.grid_t_max_us;
  j["grid_samples"] = cfg.grid_samples;
  j["sphere_include_t2"] = cfg.sphere_include_t2;
  j["zero_field_reference_uT"] = cfg.zero_field_reference_uT;
  j["zero_field_reference"] = cfg.zero_field_reference;
  j["output_dir"] = cfg.output_dir;
  return j;
}

struct LoadedModel {
  Cluster cluster_I;  // truncated, orientation I
  GTensorSet gset;
  FieldConfig field;
  ZeroFieldPolicy policy;
};

LoadedModel load_model(const RunConfig& cfg, std::size_t n_sites, double field_mT) {
  LoadedModel m{load_cluster(cfg.cluster_file, Orientation::I), load_gtensors(cfg.gtensor_file),
                field_from_config(cfg, field_mT), zero_field_policy_from_config(cfg)};
  if (n_sites > m.cluster_I.size())
    throw ValidationError("cluster file has " + std::to_string(m.cluster_I.size()) +
                          " sites but " + std::to_string(n_sites) + " were requested");
  m.cluster_I = truncate_cluster(m.cluster_I, n_sites);
  return m;
}

std::vector<ParamsRow> params_rows(const LoadedModel& m, const PhysicalConstants& consts) {
  std::vector<ParamsRow> rows;
  const Cluster cluster_II = c2_about_b(m.cluster_I);
  for (Orientation o : {Orientation::I, Orientation::II}) {
    const Cluster& cl = o == Orientation::I ? m.cluster_I : cluster_II;
    const ErMoment mom =
        compute_moments(m.gset.ground(o), m.gset.excited(o), m.field, m.policy, consts);
    const auto params = cluster_params(cl, mom, m.field, consts);
    for (std::size_t i = 0; i < cl.sites.size(); ++i) {
      rows.push_back(ParamsRow{cl.sites[i].index, cl.sites[i].distance, params[i].rho,
                               params[i].delta_g / kTwoPi / 1e3,
                               params[i].delta_e / kTwoPi / 1e3, o});
    }
  }
  return rows;
}

double require_t2(const RunConfig& cfg) {
  if (!cfg.t2_us)
    throw ValidationError("this command needs a numeric t2_us in the config (not 'fit')");
  return *cfg.t2_us * 1e-6;
}

int cmd_simulate(const RunConfig& cfg) {
  validate_run_config(cfg);
  const double t2 = require_t2(cfg);
  const auto model = load_model(cfg, cfg.cluster_n, cfg.field_mT);
  const TimeGrid grid = grid_from_config(cfg);
  const PhysicalConstants consts{};

  const auto result = envelope_result(
      forward_envelope(model.field, model.cluster_I, model.gset, grid, model.policy, consts),
      t2, grid);
  const auto& intensity = result.intensity;

  const std::string tag = format_field(cfg.field_mT);
  const auto out_dir = std::filesystem::path(cfg.output_dir);
  const std::string curve_path = (out_dir / ("curve_" + tag + ".csv")).string();
  const std::string params_path = (out_dir / ("params_" + tag + ".csv")).string();
  write_curve_csv(curve_path, grid.t, intensity);
  write_params_csv(params_path, params_rows(model, consts));
  std::cout << "wrote " << curve_path << "\n";
  std::cout << "wrote " << params_path << "\n";
  return kExitOk;
}

std::optional<double> field_from_filename(const std::string& path) {
  const std::string stem = std::filesystem::path(path).stem().string();
  static const std::regex pat(R"(([0-9]+(?:\.[0-9]+)?)mT)");
  std::smatch match;
  std::optional<double> found;
  auto begin = std::sregex_iterator(stem.begin(), stem.end(), pat);
  for (auto it = begin; it != std::sregex_iterator(); ++it)
    found = std::stod((*it)[1].str());
  return found;
}

/// "133=path.csv" or a path whose name carries "<value>mT". A missing file
/// is an I/O error regardless of how the field would have been inferred.
std::pair<double, std::string> parse_curve_arg(const std::string& arg) {
  const auto eq = arg.find('=');
  std::optional<double> field;
  std::string path = arg;
  if (eq != std::string::npos) {
    try {
      field = std::stod(arg.substr(0, eq));
      path = arg.substr(eq + 1);
    } catch (const std::exception&) {
      throw ValidationError("curve argument '" + arg + "': expected '<field_mT>=<path>'");
    }
  }
  if (!std::filesystem::exists(path)) throw IoError("cannot open curve file: " + path);
  if (!field) field = field_from_filename(path);
  if (!field)
    throw ValidationError("cannot infer the field for '" + path +
                          "'; pass '<field_mT>=<path>' or name the file like curve_50mT.csv");
  return {*field, path};
}

int cmd_fit(const RunConfig& cfg, const std::vector<std::string>& curve_args,
            double min_t12_us) {
  validate_run_config(cfg);
  if (curve_args.empty()) throw ValidationError("fit: at least one curve file required");

  std::vector<DecayCurve> curves;
  std::vector<FieldConfig> fields;
  for (const auto& arg : curve_args) {
    const auto [field_mT, path] = parse_curve_arg(arg);
    auto curve = read_curve_csv(path, format_field(field_mT), min_t12_us * 1e-6);
    if (curve.valid_count() == 0)
      throw ValidationError(path + ": no valid samples (all below the 2 us cutoff)");
    curves.push_back(std::move(curve));
    fields.push_back(field_from_config(cfg, field_mT));
  }

  auto cluster = load_cluster(cfg.cluster_file, Orientation::I);
  if (cfg.cluster_n > cluster.size())
    throw ValidationError("cluster file smaller than cluster_n");
  cluster = truncate_cluster(cluster, cfg.cluster_n);
  const auto gset = load_gtensors(cfg.gtensor_file);

  SharedT2Options options;
  options.policy = zero_field_policy_from_config(cfg);
  const auto result = fit_shared_t2(curves, fields, cluster, gset, options);

  json j;
  j["t2_us"] = result.t2 * 1e6;
  j["scales"] = result.scales;
  j["rms"] = result.rms;
  json labels = json::array();
  for (const auto& c : curves) labels.push_back(c.label);
  j["curves"] = labels;
  j["iterations"] = result.iterations;
  j["config"] = config_to_json(cfg);
  j["version"] = kVersion;

  const std::string out_path =
      (std::filesystem::path(cfg.output_dir) / "fit_result.json").string();
  atomic_write_text(out_path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sphere(const RunConfig& cfg, const std::string& curve_file, double min_t12_us) {
  validate_run_config(cfg);
  auto curve = read_curve_csv(curve_file, "", min_t12_us * 1e-6);
  const PhysicalConstants consts{};

  SphereFitOptions options;
  options.include_t2 = cfg.sphere_include_t2;
  options.t2 = cfg.t2_us ? *cfg.t2_us * 1e-6 : 58e-6;

  const double b_T = cfg.field_mT * 1e-3;
  const double deltaS_guess =
      b_T > 0.0 ? 0.8 * kTwoPi * consts.mu_Y_over_h * b_T : kTwoPi * 50e3;
  const auto init = make_sphere_params(kTwoPi * 600e3, deltaS_guess, 0.1);

  const auto result = fit_sphere(curve, init, options);

  json j;
  j["delta0_khz"] = result.params.delta0 / kTwoPi / 1e3;
  j["deltaS_khz"] = result.params.deltaS / kTwoPi / 1e3;
  j["rho_bar"] = result.params.rho_bar;
  j["r_s_A"] = screening_radius(result.params);
  j["scale"] = result.scale;
  j["rms"] = result.rms;
  j["iterations"] = result.iterations;
  j["rho_at_lower_bound"] = result.rho_at_lower_bound;
  j["config"] = config_to_json(cfg);
  j["version"] = kVersion;

  const std::string out_path =
      (std::filesystem::path(cfg.output_dir) / "sphere_result.json").string();
  atomic_write_text(out_path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_params(const RunConfig& cfg, std::size_t n_sites) {
  validate_run_config(cfg);
  const auto model = load_model(cfg, n_sites, cfg.field_mT);
  const PhysicalConstants consts{};
  const std::string tag = format_field(cfg.field_mT);
  const std::string path =
      (std::filesystem::path(cfg.output_dir) / ("params_" + tag + ".csv")).string();
  write_params_csv(path, params_rows(model, consts));
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_figures(const RunConfig& cfg) {
  validate_run_config(cfg);
  const double t2 = require_t2(cfg);
  const TimeGrid grid = grid_from_config(cfg);
  const PhysicalConstants consts{};
  const auto out_dir = std::filesystem::path(cfg.output_dir);

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(cfg);
  json files = json::array();

  const std::vector<double> fields_mT = {0.0, 17.0, 50.0, 83.0, 133.0};
  for (double f : fields_mT) {
    const auto model = load_model(cfg, cfg.cluster_n, f);
    const auto intensity =
        forward_model(model.field, model.cluster_I, model.gset, t2, grid, model.policy, consts);
    const std::string tag = format_field(f);
    const std::string curve_path = (out_dir / ("decay_" + tag + ".csv")).string();
    write_curve_csv(curve_path, grid.t, intensity);
    files.push_back(curve_path);
  }

  // parameter-vs-distance bundle over the whole shipped cluster
  {
    const auto full = load_cluster(cfg.cluster_file, Orientation::I);
    for (double f : {0.0, 50.0, 133.0}) {
      LoadedModel model{full, load_gtensors(cfg.gtensor_file), field_from_config(cfg, f),
                        zero_field_policy_from_config(cfg)};
      const std::string path =
          (out_dir / ("params_" + format_field(f) + ".csv")).string();
      write_params_csv(path, params_rows(model, consts));
      files.push_back(path);
    }
  }

  // screened spherical model against the 50 mT simulation
  {
    const auto model = load_model(cfg, cfg.cluster_n, 50.0);
    const auto intensity =
        forward_model(model.field, model.cluster_I, model.gset, t2, grid, model.policy, consts);
    DecayCurve curve = make_decay_curve("50mT", grid.t, intensity);
    SphereFitOptions options;
    options.include_t2 = cfg.sphere_include_t2;
    options.t2 = t2;
    const double deltaS_guess = 0.8 * kTwoPi * consts.mu_Y_over_h * 0.05;
    const auto fitres =
        fit_sphere(curve, make_sphere_params(kTwoPi * 600e3, deltaS_guess, 0.1), options);
    auto screened = screened_decay(fitres.params, grid);
    for (std::size_t i = 0; i < screened.size(); ++i) {
      screened[i] *= fitres.scale;
      if (cfg.sphere_include_t2) screened[i] *= std::exp(-4.0 * grid[i] / t2);
    }
    const std::string path = (out_dir / "sphere_model_50mT.csv").string();
    write_curve_csv(path, grid.t, screened);
    files.push_back(path);
    manifest["sphere_fit"] = {{"delta0_khz", fitres.params.delta0 / kTwoPi / 1e3},
                              {"deltaS_khz", fitres.params.deltaS / kTwoPi / 1e3},
                              {"rho_bar", fitres.params.rho_bar},
                              {"r_s_A", screening_radius(fitres.params)}};
  }

  manifest["files"] = files;
  const std::string manifest_path = (out_dir / "manifest.json").string();
  atomic_write_text(manifest_path, manifest.dump(2) + "\n");
  std::cout << "wrote " << manifest_path << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"superhyperfine photon-echo decay simulator and fitter"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> field_override;
  std::optional<double> t2_override;
  std::optional<std::string> out_override;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--field-mT", field_override, "override the config field magnitude");
    sub->add_option("--t2-us", t2_override, "override the config T2");
    sub->add_option("--out", out_override, "override the output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "forward-simulate a decay curve");
  add_common(simulate);

  auto* fit = app.add_subcommand("fit", "shared-T2 fit of one or more curves");
  add_common(fit);
  std::vector<std::string> curve_args;
  fit->add_option("curves", curve_args, "curve files ('<field_mT>=<path>' or *mT.csv names)");
  double fit_min_t12_us = 2.0;
  fit->add_option("--min-t12-us", fit_min_t12_us,
                  "validity cutoff for ingested samples (default 2)");

  auto* sphere = app.add_subcommand("sphere", "spherical screened-model fit of one curve");
  add_common(sphere);
  std::string sphere_curve;
  sphere->add_option("curve", sphere_curve, "curve CSV")->required();
  double sphere_min_t12_us = 2.0;
  sphere->add_option("--min-t12-us", sphere_min_t12_us,
                     "validity cutoff for ingested samples (default 2); early samples "
                     "separate delta0 from rho_bar in synthetic round trips");

  auto* params = app.add_subcommand("params", "per-nucleus (rho, Delta, Delta') diagnostics");
  add_common(params);
  std::size_t params_n = 500;
  params->add_option("--n", params_n, "number of sites (default 500)");

  auto* figures = app.add_subcommand("figures", "emit plot-ready data bundles");
  add_common(figures);

  std::vector<std::string> argv_like{"echo-collapse"};
  argv_like.insert(argv_like.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_like.size());
  for (auto& s : argv_like) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    RunConfig cfg = parse_run_config(config_path);
    if (field_override) cfg.field_mT = *field_override;
    if (t2_override) cfg.t2_us = *t2_override;
    if (out_override) cfg.output_dir = *out_override;

    if (simulate->parsed()) return cmd_simulate(cfg);
    if (fit->parsed()) return cmd_fit(cfg, curve_args, fit_min_t12_us);
    if (sphere->parsed()) return cmd_sphere(cfg, sphere_curve, sphere_min_t12_us);
    if (params->parsed()) return cmd_params(cfg, params_n);
    if (figures->parsed()) return cmd_figures(cfg);
    std::cerr << "error: no subcommand\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericsError& e) {
    std::cerr << "numerics error: " << e.what() << "\n";
    return kExitNumerics;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace shf::cli
