#ifndef SHF_CONFIG_HPP
#define SHF_CONFIG_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "shf/spincore.hpp"
#include "shf/time_grid.hpp"

namespace shf {

/// Run configuration. File format: key = value lines, '#' comments,
/// optional [section] headers (cosmetic); physical keys carry unit suffixes.
struct RunConfig {
  // [field]
  double field_mT = 50.0;
  double field_angle_deg = 50.0;        // from D1 in the (D1,D2) plane
  double field_out_of_plane_deg = 0.0;  // tilt towards b

  // [cluster]
  std::string cluster_file = "data/positions_I.txt";
  std::size_t cluster_n = 100;

  // [gtensors]
  std::string gtensor_file = "data/gtensors_site1.txt";

  // [model]
  std::optional<double> t2_us = 58.0;  // empty => "fit"
  double grid_t_max_us = 150.0;
  std::size_t grid_samples = 1501;
  bool sphere_include_t2 = true;

  // [zero_field]
  double zero_field_reference_uT = 1.0;
  std::string zero_field_reference = "field";  // or "d1","d2","b","x,y,z"

  // [output]
  std::string output_dir = "out";

  std::string source_path;  // where this config was loaded from, if any
};

RunConfig parse_run_config(const std::string& path);

/// Referenced files must exist; angles within [-180, 180]; counts positive.
void validate_run_config(const RunConfig& cfg);

FieldConfig field_from_config(const RunConfig& cfg);
FieldConfig field_from_config(const RunConfig& cfg, double field_mT);
ZeroFieldPolicy zero_field_policy_from_config(const RunConfig& cfg);
TimeGrid grid_from_config(const RunConfig& cfg);

}  // namespace shf

#endif
