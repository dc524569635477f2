#include "shf/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "shf/errors.hpp"

namespace shf {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value, int lineno,
                 const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(path + ":" + std::to_string(lineno) + ": key '" + key +
                          "' needs a number, got '" + value + "'");
  }
}

std::size_t to_size(const std::string& key, const std::string& value, int lineno,
                    const std::string& path) {
  const double v = to_double(key, value, lineno, path);
  if (v < 1 || v != std::floor(v))
    throw ValidationError(path + ":" + std::to_string(lineno) + ": key '" + key +
                          "' needs a positive integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& value, int lineno,
             const std::string& path) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError(path + ":" + std::to_string(lineno) + ": key '" + key +
                        "' needs true/false");
}

}  // namespace

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);

  RunConfig cfg;
  cfg.source_path = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError(path + ":" + std::to_string(lineno) + ": unterminated section header");
      continue;  // sections are cosmetic; keys are globally unique
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty())
      throw ValidationError(path + ":" + std::to_string(lineno) + ": empty value for '" + key + "'");

    if (key == "field_mT") cfg.field_mT = to_double(key, value, lineno, path);
    else if (key == "field_angle_deg") cfg.field_angle_deg = to_double(key, value, lineno, path);
    else if (key == "field_out_of_plane_deg") cfg.field_out_of_plane_deg = to_double(key, value, lineno, path);
    else if (key == "cluster_file") cfg.cluster_file = value;
    else if (key == "cluster_n") cfg.cluster_n = to_size(key, value, lineno, path);
    else if (key == "gtensor_file") cfg.gtensor_file = value;
    else if (key == "t2_us") {
      if (value == "fit") cfg.t2_us.reset();
      else cfg.t2_us = to_double(key, value, lineno, path);
    }
    else if (key == "grid_t_max_us") cfg.grid_t_max_us = to_double(key, value, lineno, path);
    else if (key == "grid_samples") cfg.grid_samples = to_size(key, value, lineno, path);
    else if (key == "sphere_include_t2") cfg.sphere_include_t2 = to_bool(key, value, lineno, path);
    else if (key == "zero_field_reference_uT") cfg.zero_field_reference_uT = to_double(key, value, lineno, path);
    else if (key == "zero_field_reference") cfg.zero_field_reference = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else
      throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }

  // relative data paths resolve against the config location
  const auto base = std::filesystem::path(path).parent_path();
  auto fix = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative() && !base.empty())
      p = (base / p).string();
  };
  fix(cfg.cluster_file);
  fix(cfg.gtensor_file);
  return cfg;
}

void validate_run_config(const RunConfig& cfg) {
  auto check_angle = [](const char* name, double v) {
    if (!(v >= -180.0 && v <= 180.0))
      throw ValidationError(std::string("config: ") + name + " must lie in [-180, 180] degrees");
  };
  check_angle("field_angle_deg", cfg.field_angle_deg);
  check_angle("field_out_of_plane_deg", cfg.field_out_of_plane_deg);
  if (cfg.field_mT < 0.0) throw ValidationError("config: field_mT must be >= 0");
  if (!std::filesystem::exists(cfg.cluster_file))
    throw ValidationError("config: cluster_file does not exist: " + cfg.cluster_file);
  if (!std::filesystem::exists(cfg.gtensor_file))
    throw ValidationError("config: gtensor_file does not exist: " + cfg.gtensor_file);
  if (cfg.cluster_n == 0) throw ValidationError("config: cluster_n must be positive");
  if (cfg.t2_us && !(*cfg.t2_us > 0.0)) throw ValidationError("config: t2_us must be positive");
  if (!(cfg.grid_t_max_us > 0.0) || cfg.grid_samples < 2)
    throw ValidationError("config: invalid time grid");
  if (!(cfg.zero_field_reference_uT > 0.0))
    throw ValidationError("config: zero_field_reference_uT must be positive");
}

FieldConfig field_from_config(const RunConfig& cfg) {
  return field_from_config(cfg, cfg.field_mT);
}

FieldConfig field_from_config(const RunConfig& cfg, double field_mT) {
  return make_field(field_mT * 1e-3,
                    field_direction(cfg.field_angle_deg, cfg.field_out_of_plane_deg));
}

ZeroFieldPolicy zero_field_policy_from_config(const RunConfig& cfg) {
  ZeroFieldPolicy policy;
  policy.reference_T = cfg.zero_field_reference_uT * 1e-6;
  const std::string& ref = cfg.zero_field_reference;
  if (ref == "field") {
    policy.reference_direction =
        field_direction(cfg.field_angle_deg, cfg.field_out_of_plane_deg);
  } else if (ref == "d1") {
    policy.reference_direction = Vec3{1, 0, 0};
  } else if (ref == "d2") {
    policy.reference_direction = Vec3{0, 1, 0};
  } else if (ref == "b") {
    policy.reference_direction = Vec3{0, 0, 1};
  } else {
    // explicit "x,y,z" components
    std::string s = ref;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream ss(s);
    Vec3 v;
    if (!(ss >> v.d1 >> v.d2 >> v.b) || v.norm() <= 0.0)
      throw ValidationError("config: zero_field_reference must be field/d1/d2/b or 'x,y,z'");
    policy.reference_direction = v.normalized();
  }
  return policy;
}

TimeGrid grid_from_config(const RunConfig& cfg) {
  return uniform_grid(cfg.grid_t_max_us * 1e-6, cfg.grid_samples);
}

}  // namespace shf
