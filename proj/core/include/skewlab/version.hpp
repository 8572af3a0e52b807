#pragma once

namespace skewlab {

inline constexpr const char* kToolName = "skewlab";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace skewlab
