#pragma once

namespace revlink {

inline constexpr const char* version = "0.1.0";

} // namespace revlink
