#pragma once

namespace execbench {
inline constexpr const char* kVersion = "0.1.0";
}
