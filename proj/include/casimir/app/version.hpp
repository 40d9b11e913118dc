#pragma once

namespace casimir {
inline constexpr const char* version = "0.1.0";
}
