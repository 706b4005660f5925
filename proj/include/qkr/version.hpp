#pragma once

namespace qkr {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qkr
