#pragma once

namespace dirmix {
inline constexpr const char* kVersion = "0.1.0";
}
