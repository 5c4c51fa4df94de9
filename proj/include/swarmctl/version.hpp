#pragma once

namespace swarmctl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace swarmctl
