#pragma once

#include <string_view>

namespace tentative {

/// Bumped whenever the random streams or any report value could change.
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace tentative
