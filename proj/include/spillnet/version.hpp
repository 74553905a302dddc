#pragma once

namespace spillnet {

inline constexpr const char* version = "0.1.0";

}  // namespace spillnet
