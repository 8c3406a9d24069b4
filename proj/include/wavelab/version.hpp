#pragma once

namespace wavelab {

inline constexpr const char* kVersion = "0.1.0";

}
