#pragma once

namespace lnec {

inline constexpr const char* kToolVersion = "lnec 0.1.0";

}  // namespace lnec
