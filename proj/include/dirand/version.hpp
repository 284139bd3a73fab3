#pragma once

namespace dirand {
inline constexpr const char* kVersion = "0.1.0";
}
