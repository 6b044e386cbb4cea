#pragma once

namespace maxsub {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace maxsub
