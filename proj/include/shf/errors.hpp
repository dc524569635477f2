#ifndef SHF_ERRORS_HPP
#define SHF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace shf {

// Exit-code mapping for the CLI: validation 2, numerics 3, I/O 4.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shf

#endif
