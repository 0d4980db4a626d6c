#pragma once

namespace lnc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lnc
