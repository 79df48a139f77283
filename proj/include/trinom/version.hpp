#pragma once

namespace trinom {
inline constexpr const char* kVersion = "0.1.0";
}
