#pragma once

namespace dgtd::constants {

inline constexpr double eps0 = 8.8541878128e-12;  // F/m
inline constexpr double mu0 = 1.25663706212e-6;   // H/m (4*pi*1e-7)
inline constexpr double c0 = 2.99792458e8;        // m/s
inline constexpr double eta0 = 376.730313668;     // ohm, sqrt(mu0/eps0)

}  // namespace dgtd::constants
