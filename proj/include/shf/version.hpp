#ifndef SHF_VERSION_HPP
#define SHF_VERSION_HPP

namespace shf {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
