#pragma once

namespace pmelab {

inline constexpr const char* kVersion = "pmelab 0.1.0";

}  // namespace pmelab
