#pragma once

namespace mgmc {

inline constexpr const char* kToolName = "mgmc_sim";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace mgmc
