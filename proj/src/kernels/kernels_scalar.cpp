#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "exp_constants.hpp"
#include "qda/kernels.hpp"

namespace qda::kernels {
namespace {

using namespace detail;

double pow2(int k) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
}

double max_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double sum_scalar(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) lane[l] += x[i + l];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) lane[l] += a[i + l] * b[i + l];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double centered_cross_scalar(const double* w, const double* x, double mx, const double* y,
                             double my, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) lane[l] += w[i + l] * ((x[i + l] - mx) * (y[i + l] - my));
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += w[i] * ((x[i] - mx) * (y[i] - my));
  return total;
}

void exp_shift_scalar(const double* g, double shift, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_nonpos(g[i] - shift);
}

void divide_scalar(const double* x, double divisor, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / divisor;
}

}  // namespace

double exp_nonpos(double x) {
  if (x < kUnderflow) return 0.0;
  const double nd = std::nearbyint(x * kLog2e);
  const double r = (x - nd * kLn2Hi) - nd * kLn2Lo;
  double p = kTaylor[0];
  for (std::size_t k = 1; k < std::size(kTaylor); ++k) p = p * r + kTaylor[k];
  p = p * r + 1.0;
  p = p * r + 1.0;
  const int n = static_cast<int>(nd);
  const int n1 = n >> 1;
  const int n2 = n - n1;
  return (p * pow2(n1)) * pow2(n2);
}

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar,          max_scalar,       sum_scalar, dot_scalar,
                             centered_cross_scalar, exp_shift_scalar, divide_scalar};
  return t;
}

}  // namespace qda::kernels
