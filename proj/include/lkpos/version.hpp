#pragma once

namespace lkpos {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lkpos
