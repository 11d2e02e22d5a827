#pragma once

#define LEVYFIT_VERSION_MAJOR 0
#define LEVYFIT_VERSION_MINOR 1
#define LEVYFIT_VERSION_PATCH 0

namespace levyfit {

inline constexpr const char* version_string = "0.1.0";

}  // namespace levyfit
