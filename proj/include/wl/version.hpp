#pragma once

namespace wl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wl
