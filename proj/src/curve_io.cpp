#include "shf/curve_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shf/errors.hpp"

namespace shf {

namespace {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move into place: " + path);
  }
}

void write_curve_csv(const std::string& path, const std::vector<double>& t12_s,
                     const std::vector<double>& intensity) {
  if (t12_s.size() != intensity.size())
    throw ValidationError("write_curve_csv: column length mismatch");
  std::ostringstream out;
  out << "t12_us,intensity\n";
  for (std::size_t i = 0; i < t12_s.size(); ++i)
    out << format_g12(t12_s[i] * 1e6) << ',' << format_g12(intensity[i]) << '\n';
  atomic_write_text(path, out.str());
}

DecayCurve read_curve_csv(const std::string& path, std::string label,
                          double min_valid_t12) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t12_us,intensity")
    throw ValidationError(path + ":1: expected header 't12_us,intensity'");
  std::vector<double> t, y;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 't12_us,intensity'");
    auto parse_field = [&](std::string tok) {
      const auto first = tok.find_first_not_of(" \t");
      const auto last = tok.find_last_not_of(" \t");
      if (first == std::string::npos)
        throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed number");
      tok = tok.substr(first, last - first + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed number");
      }
      if (used != tok.size())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed number");
      return v;
    };
    t.push_back(parse_field(line.substr(0, comma)) * 1e-6);
    y.push_back(parse_field(line.substr(comma + 1)));
  }
  if (label.empty()) label = std::filesystem::path(path).stem().string();
  try {
    return make_decay_curve(std::move(label), std::move(t), std::move(y), min_valid_t12);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_params_csv(const std::string& path, const std::vector<ParamsRow>& rows) {
  std::ostringstream out;
  out << "index,distance_A,rho,delta_g_kHz,delta_e_kHz,orientation\n";
  for (const auto& r : rows) {
    out << r.index << ',' << format_g12(r.distance_ang) << ',' << format_g12(r.rho) << ','
        << format_g12(r.delta_g_khz) << ',' << format_g12(r.delta_e_khz) << ','
        << to_string(r.orientation) << '\n';
  }
  atomic_write_text(path, out.str());
}

}  // namespace shf
