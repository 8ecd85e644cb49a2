#pragma once

namespace mfpt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mfpt
