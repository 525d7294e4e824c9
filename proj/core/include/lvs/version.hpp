#pragma once

namespace lvs {

inline constexpr const char* kToolName = "lvs";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace lvs
