#pragma once

namespace thinlayer {

inline constexpr const char* version = "0.1.0";

}  // namespace thinlayer
