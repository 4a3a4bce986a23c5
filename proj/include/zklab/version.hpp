#pragma once

namespace zklab {

inline constexpr const char* kToolName = "zklab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace zklab
