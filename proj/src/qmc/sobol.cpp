#include <array>
#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

#include "qda/errors.hpp"
#include "qda/qmc.hpp"

namespace qda {
namespace {

struct DirectionEntry {
  int dim;
  int degree;
  std::uint32_t coeffs;
  std::array<std::uint32_t, 9> m;
};

constexpr DirectionEntry kJoeKuo[] = {
#include "joe_kuo_d100.inc"
};

static_assert(std::size(kJoeKuo) == kSobolMaxDim - 1);

constexpr int kBits = 32;
using DirectionTable = std::array<std::uint32_t, kBits>;

DirectionTable direction_numbers(std::size_t j) {
  DirectionTable v{};
  if (j == 0) {
    for (int k = 0; k < kBits; ++k) v[k] = std::uint32_t{1} << (kBits - 1 - k);
    return v;
  }
  const auto& e = kJoeKuo[j - 1];
  const int s = e.degree;
  for (int k = 0; k < s && k < kBits; ++k) v[k] = e.m[k] << (kBits - 1 - k);
  for (int k = s; k < kBits; ++k) {
    v[k] = v[k - s] ^ (v[k - s] >> s);
    for (int i = 1; i < s; ++i) {
      if ((e.coeffs >> (s - 1 - i)) & 1u) v[k] ^= v[k - i];
    }
  }
  return v;
}

}  // namespace

SupportPointSet sobol_points(std::size_t M, std::size_t d, std::uint64_t skip) {
  if (M == 0 || d == 0) throw std::invalid_argument("sobol_points: M and d must be positive");
  if (d > kSobolMaxDim) {
    throw CapacityError("sobol_points: dimension " + std::to_string(d) +
                        " exceeds the direction-number table (max " +
                        std::to_string(kSobolMaxDim) + ")");
  }
  constexpr std::uint64_t capacity = std::uint64_t{1} << kBits;
  if (skip >= capacity || M > capacity - skip) {
    throw CapacityError("sobol_points: skip + M exceeds 2^32 points");
  }

  std::vector<DirectionTable> dirs(d);
  for (std::size_t j = 0; j < d; ++j) dirs[j] = direction_numbers(j);

  // State for index `skip` from its Gray code, then step with Gray-code updates.
  std::vector<std::uint32_t> state(d, 0);
  const std::uint64_t gray = skip ^ (skip >> 1);
  for (int k = 0; k < kBits; ++k) {
    if ((gray >> k) & 1u) {
      for (std::size_t j = 0; j < d; ++j) state[j] ^= dirs[j][k];
    }
  }

  constexpr double scale = 1.0 / static_cast<double>(capacity);
  SupportPointSet out;
  out.generator = Generator::sobol;
  out.skip = skip;
  out.points.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  std::uint64_t index = skip;
  for (std::size_t i = 0; i < M; ++i, ++index) {
    for (std::size_t j = 0; j < d; ++j) {
      out.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(state[j]) * scale;
    }
    if (i + 1 < M) {
      const int c = std::countr_one(index);
      for (std::size_t j = 0; j < d; ++j) state[j] ^= dirs[j][c];
    }
  }
  return out;
}

}  // namespace qda
