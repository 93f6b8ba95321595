#pragma once

namespace mobkit {

inline constexpr const char* kVersion = "1.0.0";

// Bumped when any on-disk CSV/JSON layout changes incompatibly.
inline constexpr int kFormatVersion = 1;

}  // namespace mobkit
