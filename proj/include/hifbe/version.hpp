#pragma once

namespace hifb {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "hifbe";

}  // namespace hifb
