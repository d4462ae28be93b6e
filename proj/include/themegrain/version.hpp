#pragma once

namespace themegrain {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace themegrain
