#pragma once

namespace distinfo {

inline constexpr const char* kVersion = "distinfo 0.1.0";

}  // namespace distinfo
