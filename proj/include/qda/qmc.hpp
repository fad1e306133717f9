#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>

#include <Eigen/Core>

namespace qda {

enum class Generator { sobol, halton, midpoint1d, user };

std::string_view to_string(Generator g);
Generator generator_from_string(std::string_view name);

/// Points in the unit hypercube, one per row, plus where they came from.
///
/// Rows are stored contiguously (row-major) so that a single point can be
/// handed to a proposal as a span without copying.
struct SupportPointSet {
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Matrix points;
  Generator generator = Generator::user;
  std::uint64_t skip = 0;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
};

inline constexpr std::size_t kSobolMaxDim = 100;
inline constexpr std::size_t kHaltonMaxDim = 50;

/// Points skip .. skip+M-1 of the (unscrambled) Sobol' sequence built from
/// Joe-Kuo direction numbers. skip=1 drops the origin.
/// Throws CapacityError if d > 100 or skip+M exceeds 2^32.
SupportPointSet sobol_points(std::size_t M, std::size_t d, std::uint64_t skip = 1);

/// Points skip+1..skip+M of the Halton sequence; coordinate j is the
/// radical inverse in the j-th prime.
SupportPointSet halton_points(std::size_t M, std::size_t d, std::uint64_t skip = 0);

/// {(2i-1)/(2M)}, i = 1..M.
SupportPointSet midpoint_grid_1d(std::size_t M);

/// Dispatch on the generator name. midpoint1d needs d = 1 and skip = 0;
/// user points cannot be generated.
SupportPointSet generate_points(Generator g, std::size_t M, std::size_t d, std::uint64_t skip);
/// Wraps user points; every coordinate must lie in [0,1).
SupportPointSet user_points(SupportPointSet::Matrix points);

/// One row per point, d columns, 17 significant digits.
void write_csv(std::ostream& out, const SupportPointSet& pts);

}  // namespace qda
