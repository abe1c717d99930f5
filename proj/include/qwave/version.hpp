#pragma once

#include <string_view>

namespace qwave {

inline constexpr std::string_view engine_name = "qwave";
inline constexpr std::string_view engine_version = "0.1.0";

} // namespace qwave
