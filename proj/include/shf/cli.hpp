#ifndef SHF_CLI_HPP
#define SHF_CLI_HPP

#include <string>
#include <vector>

namespace shf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerics = 3;
inline constexpr int kExitIo = 4;

/// Entry point shared by the binary and the tests.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace shf::cli

#endif
