#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qda/errors.hpp"
#include "qda/qmc.hpp"

namespace qda {
namespace {

constexpr int kPrimes[kHaltonMaxDim] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,
    61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229};

double radical_inverse(std::uint64_t i, int base) {
  // Accumulate digits in integers; a single division at the end keeps
  // exactly representable values (e.g. 1/2, 3/4) exact.
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  const auto b = static_cast<std::uint64_t>(base);
  while (i > 0) {
    numerator = numerator * b + i % b;
    denominator *= b;
    i /= b;
    if (denominator > (std::uint64_t{1} << 53) / b) break;
  }
  double value = static_cast<double>(numerator) / static_cast<double>(denominator);
  // Digits beyond 2^53 resolution: finish in floating point.
  double weight = 1.0 / static_cast<double>(denominator);
  while (i > 0) {
    weight /= static_cast<double>(b);
    value += static_cast<double>(i % b) * weight;
    i /= b;
  }
  return value;
}

}  // namespace

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::sobol: return "sobol";
    case Generator::halton: return "halton";
    case Generator::midpoint1d: return "midpoint1d";
    case Generator::user: return "user";
  }
  return "user";
}

Generator generator_from_string(std::string_view name) {
  if (name == "sobol") return Generator::sobol;
  if (name == "halton") return Generator::halton;
  if (name == "midpoint1d" || name == "midpoint") return Generator::midpoint1d;
  if (name == "user") return Generator::user;
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

SupportPointSet halton_points(std::size_t M, std::size_t d, std::uint64_t skip) {
  if (M == 0 || d == 0) throw std::invalid_argument("halton_points: M and d must be positive");
  if (d > kHaltonMaxDim) {
    throw CapacityError("halton_points: dimension " + std::to_string(d) + " exceeds " +
                        std::to_string(kHaltonMaxDim) + " prime bases");
  }
  SupportPointSet out;
  out.generator = Generator::halton;
  out.skip = skip;
  out.points.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          radical_inverse(skip + i + 1, kPrimes[j]);
    }
  }
  return out;
}

SupportPointSet midpoint_grid_1d(std::size_t M) {
  if (M == 0) throw std::invalid_argument("midpoint_grid_1d: M must be positive");
  SupportPointSet out;
  out.generator = Generator::midpoint1d;
  out.points.resize(static_cast<Eigen::Index>(M), 1);
  const double denom = 2.0 * static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) {
    out.points(static_cast<Eigen::Index>(i), 0) = static_cast<double>(2 * i + 1) / denom;
  }
  return out;
}

SupportPointSet generate_points(Generator g, std::size_t M, std::size_t d, std::uint64_t skip) {
  switch (g) {
    case Generator::sobol: return sobol_points(M, d, skip);
    case Generator::halton: return halton_points(M, d, skip);
    case Generator::midpoint1d:
      if (d != 1 || skip != 0) throw std::invalid_argument("midpoint1d points need d = 1 and skip = 0");
      return midpoint_grid_1d(M);
    case Generator::user: break;
  }
  throw std::invalid_argument("user points cannot be generated");
}

SupportPointSet user_points(SupportPointSet::Matrix points) {
  if (points.rows() == 0 || points.cols() == 0) {
    throw std::invalid_argument("user_points: empty point set");
  }
  if ((points.array() < 0.0).any() || (points.array() >= 1.0).any()) {
    throw std::domain_error("user_points: coordinates must lie in [0,1)");
  }
  SupportPointSet out;
  out.points = std::move(points);
  out.generator = Generator::user;
  return out;
}

void write_csv(std::ostream& out, const SupportPointSet& pts) {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.points.cols(); ++j) {
      if (j) out << ',';
      out << pts.points(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qda
