// Compiled with -mavx2 only. Every operation mirrors the scalar reference in
// kernels_scalar.cpp step for step; see kernels.hpp for the reduction order.

#include <immintrin.h>

#include <cstdint>
#include <limits>

#include "exp_constants.hpp"
#include "qda/kernels.hpp"

namespace qda::kernels {
namespace {

using namespace detail;

double finish(__m256d acc, const double* tail_a, std::size_t tail) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = 0; i < tail; ++i) total += tail_a[i];
  return total;
}

double max_avx2(const double* x, std::size_t n) {
  __m256d m = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double out = lane[0];
  for (int l = 1; l < 4; ++l) out = lane[l] > out ? lane[l] : out;
  for (; i < n; ++i) out = x[i] > out ? x[i] : out;
  return out;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return finish(acc, x + i, n - i);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double centered_cross_avx2(const double* w, const double* x, double mx, const double* y,
                           double my, std::size_t n) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(dx, dy)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += w[i] * ((x[i] - mx) * (y[i] - my));
  return total;
}

__m256d pow2_avx2(__m128i k) {
  const __m256i wide = _mm256_add_epi64(_mm256_cvtepi32_epi64(k), _mm256_set1_epi64x(1023));
  return _mm256_castsi256_pd(_mm256_slli_epi64(wide, 52));
}

__m256d exp_nonpos_avx2(__m256d x) {
  const __m256d dead = _mm256_cmp_pd(x, _mm256_set1_pd(kUnderflow), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(kClampLow));
  const __m256d nd = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(_mm256_sub_pd(x, _mm256_mul_pd(nd, _mm256_set1_pd(kLn2Hi))),
                                  _mm256_mul_pd(nd, _mm256_set1_pd(kLn2Lo)));
  __m256d p = _mm256_set1_pd(kTaylor[0]);
  for (std::size_t k = 1; k < std::size(kTaylor); ++k) {
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kTaylor[k]));
  }
  const __m256d one = _mm256_set1_pd(1.0);
  p = _mm256_add_pd(_mm256_mul_pd(p, r), one);
  p = _mm256_add_pd(_mm256_mul_pd(p, r), one);
  const __m128i n = _mm256_cvtpd_epi32(nd);
  const __m128i n1 = _mm_srai_epi32(n, 1);
  const __m128i n2 = _mm_sub_epi32(n, n1);
  const __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2_avx2(n1)), pow2_avx2(n2));
  return _mm256_andnot_pd(dead, result);
}

void exp_shift_avx2(const double* g, double shift, double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, exp_nonpos_avx2(_mm256_sub_pd(_mm256_loadu_pd(g + i), s)));
  }
  for (; i < n; ++i) out[i] = exp_nonpos(g[i] - shift);
}

void divide_avx2(const double* x, double divisor, double* out, std::size_t n) {
  const __m256d d = _mm256_set1_pd(divisor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(x + i), d));
  for (; i < n; ++i) out[i] = x[i] / divisor;
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable t{Isa::avx2,          max_avx2,       sum_avx2,   dot_avx2,
                             centered_cross_avx2, exp_shift_avx2, divide_avx2};
  return t;
}

}  // namespace qda::kernels
