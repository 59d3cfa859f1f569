#pragma once

namespace spol {

inline constexpr const char* tool_name = "spolsim";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace spol
