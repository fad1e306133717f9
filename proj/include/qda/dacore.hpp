#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qda/proposal.hpp"
#include "qda/qmc.hpp"

namespace qda {

/// Per-coordinate support of a target density.
struct SupportKind {
  enum class Type { real, positive, interval };
  Type type = Type::real;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static SupportKind real() { return {}; }
  static SupportKind positive() { return {Type::positive, 0.0, std::numeric_limits<double>::infinity()}; }
  static SupportKind interval(double lo, double hi) { return {Type::interval, lo, hi}; }
};

/// An unnormalized posterior given through its negative log-density
/// l(x) = -log f(x) + const. l must return +inf exactly where f vanishes and
/// must be safe to call concurrently.
struct TargetDensity {
  std::function<double(std::span<const double>)> neg_log_density;
  std::size_t dim = 0;
  std::vector<SupportKind> support;
  std::string name;

  double operator()(std::span<const double> x) const { return neg_log_density(x); }
};

/// The discrete measure on the transported support points.
///
/// support is M x d (column-major, so each coordinate is contiguous).
/// masses are normalized weights exp(g_i - shift) / sum_j exp(g_j - shift)
/// with g_i = -l(y_i) - log psi(y_i) and shift the largest finite g_i.
struct DiscretePosterior {
  Eigen::MatrixXd support;
  Eigen::VectorXd masses;
  Eigen::VectorXd log_weights;
  double shift = 0.0;
  double acceptance_rate = 0.0;
  std::vector<SupportKind> support_kinds;

  struct Source {
    Generator generator = Generator::user;
    std::uint64_t skip = 0;
    std::string proposal;
    std::string target;
  } source;

  std::size_t size() const { return static_cast<std::size_t>(support.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(support.cols()); }
};

struct DiscretizeOptions {
  /// Worker threads for the density evaluations; 0 = QDA_THREADS or 1.
  std::size_t threads = 0;
};

/// Builds the discrete posterior on h(a_1), ..., h(a_M).
///
/// Density evaluations may run on several threads; everything after the
/// evaluation (shift, exponentiation, normalization) runs in a fixed order,
/// so the result does not depend on the thread count.
///
/// Throws NoMassError if every point has zero mass and
/// TargetEvaluationError if l returns NaN or -inf.
DiscretePosterior discretize(const TargetDensity& target, const Proposal& proposal,
                             const SupportPointSet& pts, const DiscretizeOptions& options = {});

/// Fraction of atoms with strictly positive mass.
double acceptance_rate(const DiscretePosterior& dp);

/// sum_i p_i prod_j y_ij^k_j
double moment(const DiscretePosterior& dp, std::span<const int> powers);
Eigen::VectorXd mean(const DiscretePosterior& dp);
/// Two-pass covariance of the discrete measure around its mean.
Eigen::MatrixXd covariance(const DiscretePosterior& dp);
/// First support value (sorted stably by coordinate `coord`, 0-based) at
/// which the cumulative mass reaches alpha.
double marginal_quantile(const DiscretePosterior& dp, std::size_t coord, double alpha);
/// Mass of atoms lying coordinatewise at or below x.
double cdf_at(const DiscretePosterior& dp, std::span<const double> x);

/// Threads to use when the caller passes 0: QDA_THREADS if set, else 1.
std::size_t default_threads();

/// Columns y_1..y_d, mass, log_weight, preceded by a '#' header line with
/// M, acceptance rate and shift.
void write_csv(std::ostream& out, const DiscretePosterior& dp);

}  // namespace qda
