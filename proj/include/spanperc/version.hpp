#pragma once

namespace spanperc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spanperc
