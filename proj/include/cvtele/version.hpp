#pragma once

namespace cvtele {

inline constexpr const char* kToolName = "cvtele";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cvtele
