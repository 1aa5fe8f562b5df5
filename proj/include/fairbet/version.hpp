#pragma once

namespace fairbet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairbet
