#pragma once

#include <string_view>

namespace sgnm {

// Recorded in every persisted table and trend file.
inline constexpr std::string_view kVersion = "0.3.0";

}  // namespace sgnm
