#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qda/dacore.hpp"

namespace qda {

struct Draws {
  Eigen::MatrixXd points;              // N x d
  std::vector<std::size_t> atoms;      // atom index of each draw
};

/// N i.i.d. draws from the categorical distribution on the atoms, by binary
/// search of a uniform variate in the cumulative masses. Reproducible for a
/// fixed (dp, N, seed).
Draws draw(const DiscretePosterior& dp, std::size_t N, std::uint64_t seed);

/// Deterministic representation points.
///
/// With q_0 = 0 and q_i = p_1 + ... + p_i, the j-th point (j = 1..N) is the
/// atom i_j, the smallest index >= i_{j-1} with (2j-1)/(2N) in [q_{i-1}, q_i).
/// Zero-mass atoms have empty intervals and are never chosen. If rounding
/// leaves u_j >= q_M, the last positive-mass atom is used.
struct RepresentationPointSet {
  Eigen::MatrixXd points;              // N x d, in construction order
  std::vector<std::size_t> atoms;      // i_1 <= i_2 <= ... <= i_N
  std::vector<std::size_t> counts;     // per-atom multiplicity, size M
  std::size_t N = 0;
  double jitter_scale = 0.0;

  /// Multiplicity map restricted to atoms that were used.
  std::vector<std::pair<std::size_t, std::size_t>> multiplicities() const;
};

/// jitter_seed set: add independent Uniform(-1/(2N), 1/(2N)) noise to every
/// coordinate, clipped to the target's support.
RepresentationPointSet representation_points(const DiscretePosterior& dp, std::size_t N,
                                             std::optional<std::uint64_t> jitter_seed = std::nullopt);

/// Columns y_1..y_d, atom, multiplicity (one row per distinct atom unless
/// jitter is on, in which case one row per point with multiplicity 1).
void write_csv(std::ostream& out, const RepresentationPointSet& rp);
void write_csv(std::ostream& out, const Draws& draws);

}  // namespace qda
