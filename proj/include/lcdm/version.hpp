#pragma once

namespace lcdm {
inline constexpr const char* kVersion = "0.1.0";
}
