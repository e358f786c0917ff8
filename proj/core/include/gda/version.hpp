#pragma once

namespace gda {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gda
