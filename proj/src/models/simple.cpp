#include <cmath>
#include <limits>
#include <stdexcept>

#include "qda/models.hpp"
#include "qda/specfun.hpp"

namespace qda::models {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mixture_pdf(double x) {
  return 0.5 * std::exp(special::beta_log_pdf(x, 6.0, 3.0)) + 0.5 * std::exp(special::beta_log_pdf(x, 2.0, 7.0));
}

}  // namespace

double beta_mixture_pdf(double x) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  return mixture_pdf(x);
}

double beta_mixture_nll(double x) {
  if (!(x > 0.0 && x < 1.0)) return kInf;
  return -std::log(mixture_pdf(x));
}

double beta_mixture_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 0.5 * special::beta_inc(6.0, 3.0, x) + 0.5 * special::beta_inc(2.0, 7.0, x);
}

double beta_mixture_sample(Rng& rng) {
  return rng.uniform() < 0.5 ? rng.beta(6.0, 3.0) : rng.beta(2.0, 7.0);
}

TargetDensity beta_mixture_target() {
  return {[](std::span<const double> x) { return beta_mixture_nll(x[0]); }, 1, {SupportKind::interval(0.0, 1.0)},
          "beta_mixture"};
}

TargetDensity beta_target(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta_target: shapes must be positive");
  return {[a, b](std::span<const double> x) {
            if (!(x[0] > 0.0 && x[0] < 1.0)) return kInf;
            // unnormalized on purpose
            return -(a - 1.0) * std::log(x[0]) - (b - 1.0) * std::log1p(-x[0]);
          },
          1, {SupportKind::interval(0.0, 1.0)}, "beta"};
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return special::beta_inc(a, b, x);
}

Eigen::Vector2d normal2d_mean() { return {2.0, -1.0}; }

Eigen::Matrix2d normal2d_cov() {
  Eigen::Matrix2d s;
  s << 4.0, 0.5, 0.5, 1.0;
  return s;
}

double normal2d_nll(std::span<const double> x) {
  const double r0 = x[0] - 2.0;
  const double r1 = x[1] + 1.0;
  // inverse of [[4, .5], [.5, 1]] is [[1, -.5], [-.5, 4]] / 3.75
  return 0.5 * (r0 * r0 - r0 * r1 + 4.0 * r1 * r1) / 3.75;
}

double normal2d_quantile(std::size_t coord, double alpha) {
  if (coord > 1) throw std::out_of_range("normal2d_quantile: coord");
  const double sd = std::sqrt(normal2d_cov()(static_cast<Eigen::Index>(coord), static_cast<Eigen::Index>(coord)));
  return normal2d_mean()(static_cast<Eigen::Index>(coord)) + sd * special::inv_norm_cdf(alpha);
}

TargetDensity normal2d_target() {
  return {normal2d_nll, 2, {SupportKind::real(), SupportKind::real()}, "normal2d"};
}

Eigen::Vector2d normal2d_sample(Rng& rng) {
  const double z0 = rng.normal();
  const double z1 = rng.normal();
  // lower Cholesky of the covariance: [[2, 0], [0.25, sqrt(1 - 0.0625)]]
  return {2.0 + 2.0 * z0, -1.0 + 0.25 * z0 + std::sqrt(0.9375) * z1};
}

double banana_nll(std::span<const double> x) {
  const double inner = x[1] + 0.03 * x[0] * x[0] - 3.0;
  return x[0] * x[0] / 200.0 + 0.5 * inner * inner;
}

TargetDensity banana_target() {
  return {banana_nll, 2, {SupportKind::real(), SupportKind::real()}, "banana"};
}

}  // namespace qda::models
