#pragma once

namespace treesir {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace treesir
