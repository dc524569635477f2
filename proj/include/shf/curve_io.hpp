#ifndef SHF_CURVE_IO_HPP
#define SHF_CURVE_IO_HPP

#include <string>
#include <vector>

#include "shf/decay_curve.hpp"
#include "shf/spincore.hpp"

namespace shf {

/// Curve CSV wire format: header "t12_us,intensity", decimal point, LF line
/// endings, 12 significant digits (lossless round trip).
void write_curve_csv(const std::string& path, const std::vector<double>& t12_s,
                     const std::vector<double>& intensity);

DecayCurve read_curve_csv(const std::string& path, std::string label = "",
                          double min_valid_t12 = kDefaultMinValidT12);

/// Per-nucleus parameter dump, header
/// "index,distance_A,rho,delta_g_kHz,delta_e_kHz,orientation".
struct ParamsRow {
  int index;
  double distance_ang;
  double rho;
  double delta_g_khz;  // Delta/2pi
  double delta_e_khz;  // Delta'/2pi
  Orientation orientation;
};

void write_params_csv(const std::string& path, const std::vector<ParamsRow>& rows);

/// Writes text atomically (temp file + rename).
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace shf

#endif
