#pragma once

namespace mvlle {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mvlle
