#pragma once

namespace formaldisc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace formaldisc
