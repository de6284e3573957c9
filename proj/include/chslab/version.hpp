#pragma once

namespace chslab {

inline constexpr const char* kVersion = "0.1.0";

}
