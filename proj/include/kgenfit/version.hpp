#pragma once

namespace kgenfit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kgenfit
