#pragma once

namespace parnn {

inline constexpr const char *kVersion = "0.1.0";

} // namespace parnn
