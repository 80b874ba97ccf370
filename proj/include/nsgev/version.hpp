#pragma once

namespace nsgev {

inline constexpr const char* kToolName = "nsgev";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace nsgev
