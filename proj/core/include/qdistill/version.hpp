#pragma once

namespace qdistill {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qdistill
