#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qda/dacore.hpp"
#include "qda/sampling.hpp"

namespace qda {

/// A finite weighted point set: rows of `points` with weights summing to 1.
struct WeightedPoints {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;

  static WeightedPoints from(const DiscretePosterior& dp);
  /// Equal weights 1/N.
  static WeightedPoints empirical(const Eigen::MatrixXd& points);
  static WeightedPoints from(const RepresentationPointSet& rp);

  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
};

/// Reference CDF at the box (-inf, x] (origin-anchored boxes for targets on
/// the unit cube coincide with these).
struct CdfOracle {
  std::function<double(std::span<const double>)> cdf;
  std::size_t dim = 1;
};

struct KolmogorovResult {
  double value = 0.0;
  /// false for d >= 2: the sup is taken over a capped grid and is a lower bound.
  bool exact = true;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kKolmogorovGridCap = 10000;

/// sup_x |F_hat(x) - F(x)|. In 1D both one-sided limits at every atom are
/// checked, which is exact for a continuous F. For d >= 2 the sup is taken
/// over the grid spanned by the atoms' coordinates, thinned evenly so that at
/// most 10^4 boxes are evaluated.
KolmogorovResult kolmogorov_discrete(const WeightedPoints& points, const CdfOracle& oracle);

/// Exact sup distance between two 1D discrete distributions.
double kolmogorov_between(const WeightedPoints& a, const WeightedPoints& b);

struct ErrorStats {
  std::vector<double> squared_errors;
  double mse = 0.0;
  double sd = 0.0;
  /// false when there is a single run (sd reported as 0).
  bool sd_defined = false;
};

/// Squared Euclidean error per run, its mean and sample standard deviation.
ErrorStats error_stats(const std::vector<Eigen::VectorXd>& estimates, const Eigen::VectorXd& truth);
ErrorStats error_stats(const std::vector<double>& estimates, double truth);

}  // namespace qda
