#pragma once

// Data-parallel inner loops of the discretization pipeline.
//
// Every kernel has a scalar reference and (on x86-64) an AVX2 variant chosen
// at runtime. The variants are bit-identical, not merely close: reductions
// use a fixed four-lane interleaved order in both, multiplies and adds are
// never fused, and the exponential is a shared Cody-Waite + degree-13
// polynomial evaluated with the same operation sequence. Outputs therefore
// do not depend on the machine's instruction set.
//
// Reduction order for n values x_0..x_{n-1}, with B = 4*floor(n/4):
//   lane_l = sum over i < B, i = l (mod 4), ascending
//   total  = ((lane_0 + lane_1) + (lane_2 + lane_3)) + x_B + ... + x_{n-1}

#include <cstddef>
#include <string_view>

namespace qda::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  /// max_i x_i; -inf for n = 0. NaN-free input assumed.
  double (*max)(const double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  /// sum_i a_i * b_i
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i w_i * ((x_i - mx) * (y_i - my))
  double (*centered_cross)(const double* w, const double* x, double mx, const double* y,
                           double my, std::size_t n);
  /// out_i = exp(g_i - shift). Requires g_i - shift <= 709; values below
  /// about -745.2 (including -inf) give exactly 0.
  void (*exp_shift)(const double* g, double shift, double* out, std::size_t n);
  /// out_i = x_i / divisor
  void (*divide)(const double* x, double divisor, double* out, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();
bool isa_available(Isa isa);
const KernelTable& table(Isa isa);

/// The table used by the library. Chosen once from CPU support, overridable
/// with QDA_SIMD=scalar|avx2|auto or set_active().
const KernelTable& active();
void set_active(Isa isa);

/// Scalar exp used by all variants; exposed for tests.
double exp_nonpos(double x);

}  // namespace qda::kernels
