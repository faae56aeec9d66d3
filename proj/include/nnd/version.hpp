#pragma once

namespace nnd {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace nnd
