#pragma once

// Constants shared by the scalar and vector exponential. Changing any of
// them changes results in every variant at once, which is the point.

namespace qda::kernels::detail {

inline constexpr double kLog2e = 1.4426950408889634074;
// ln 2 split so that n * kLn2Hi is exact for |n| < 2^11.
inline constexpr double kLn2Hi = 6.93145751953125e-1;
inline constexpr double kLn2Lo = 1.42860682030941723212e-6;
inline constexpr double kUnderflow = -745.2;
inline constexpr double kClampLow = -746.0;

// 1/k! for k = 13 down to 2; Horner finishes with r + 1.
inline constexpr double kTaylor[] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0};

}  // namespace qda::kernels::detail
