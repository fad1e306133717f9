#include "qda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qda {
namespace {

struct SortedAtoms {
  std::vector<double> x;
  std::vector<double> w;
};

// Sorted distinct values with tied weights merged.
SortedAtoms sorted_1d(const WeightedPoints& p) {
  const auto n = static_cast<std::size_t>(p.points.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.points(static_cast<Eigen::Index>(a), 0) < p.points(static_cast<Eigen::Index>(b), 0);
  });
  SortedAtoms out;
  for (std::size_t i : order) {
    const double x = p.points(static_cast<Eigen::Index>(i), 0);
    const double w = p.weights(static_cast<Eigen::Index>(i));
    if (!out.x.empty() && out.x.back() == x) {
      out.w.back() += w;
    } else {
      out.x.push_back(x);
      out.w.push_back(w);
    }
  }
  return out;
}

void check(const WeightedPoints& p) {
  if (p.points.rows() == 0 || p.points.rows() != p.weights.size()) {
    throw std::invalid_argument("weighted point set is empty or inconsistent");
  }
}

std::vector<double> thinned_axis(std::vector<double> values, std::size_t cap) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() <= cap) return values;
  std::vector<double> out;
  out.reserve(cap);
  for (std::size_t k = 0; k < cap; ++k) {
    // Evenly spaced ranks, always keeping the largest value.
    const std::size_t idx = (values.size() - 1) * (k + 1) / cap;
    out.push_back(values[idx]);
  }
  return out;
}

}  // namespace

WeightedPoints WeightedPoints::from(const DiscretePosterior& dp) { return {dp.support, dp.masses}; }

WeightedPoints WeightedPoints::empirical(const Eigen::MatrixXd& points) {
  const auto n = points.rows();
  return {points, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))};
}

WeightedPoints WeightedPoints::from(const RepresentationPointSet& rp) { return empirical(rp.points); }

KolmogorovResult kolmogorov_discrete(const WeightedPoints& points, const CdfOracle& oracle) {
  check(points);
  if (points.dim() != oracle.dim) throw std::invalid_argument("kolmogorov_discrete: dimension mismatch");
  KolmogorovResult result;
  if (points.dim() == 1) {
    const SortedAtoms atoms = sorted_1d(points);
    double below = 0.0;
    for (std::size_t i = 0; i < atoms.x.size(); ++i) {
      const double x = atoms.x[i];
      const double f = oracle.cdf(std::span<const double>(&x, 1));
      const double at = below + atoms.w[i];
      result.value = std::max({result.value, std::abs(below - f), std::abs(at - f)});
      below = at;
      ++result.evaluations;
    }
    result.exact = true;
    return result;
  }

  const std::size_t d = points.dim();
  const auto per_axis = static_cast<std::size_t>(
      std::max(1.0, std::floor(std::pow(static_cast<double>(kKolmogorovGridCap), 1.0 / static_cast<double>(d)) + 1e-9)));
  std::vector<std::vector<double>> axes(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = points.points.col(static_cast<Eigen::Index>(j));
    axes[j] = thinned_axis(std::vector<double>(col.data(), col.data() + col.size()), per_axis);
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  for (;;) {
    for (std::size_t j = 0; j < d; ++j) x[j] = axes[j][idx[j]];
    double emp = 0.0;
    for (Eigen::Index i = 0; i < points.points.rows(); ++i) {
      bool inside = true;
      for (std::size_t j = 0; j < d && inside; ++j) inside = points.points(i, static_cast<Eigen::Index>(j)) <= x[j];
      if (inside) emp += points.weights(i);
    }
    result.value = std::max(result.value, std::abs(emp - oracle.cdf(x)));
    ++result.evaluations;
    std::size_t j = 0;
    while (j < d && ++idx[j] == axes[j].size()) idx[j++] = 0;
    if (j == d) break;
  }
  result.exact = false;
  return result;
}

double kolmogorov_between(const WeightedPoints& a, const WeightedPoints& b) {
  check(a);
  check(b);
  if (a.dim() != 1 || b.dim() != 1) throw std::invalid_argument("kolmogorov_between: 1D only");
  const SortedAtoms sa = sorted_1d(a);
  const SortedAtoms sb = sorted_1d(b);
  double fa = 0.0;
  double fb = 0.0;
  double sup = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.x.size() || j < sb.x.size()) {
    const double x = j == sb.x.size() || (i < sa.x.size() && sa.x[i] <= sb.x[j]) ? sa.x[i] : sb.x[j];
    if (i < sa.x.size() && sa.x[i] == x) fa += sa.w[i++];
    if (j < sb.x.size() && sb.x[j] == x) fb += sb.w[j++];
    sup = std::max(sup, std::abs(fa - fb));
  }
  return sup;
}

ErrorStats error_stats(const std::vector<Eigen::VectorXd>& estimates, const Eigen::VectorXd& truth) {
  if (estimates.empty()) throw std::invalid_argument("error_stats: no estimates");
  ErrorStats s;
  for (const auto& e : estimates) {
    if (e.size() != truth.size()) throw std::invalid_argument("error_stats: shape mismatch");
    s.squared_errors.push_back((e - truth).squaredNorm());
  }
  const double n = static_cast<double>(s.squared_errors.size());
  for (double se : s.squared_errors) s.mse += se;
  s.mse /= n;
  if (s.squared_errors.size() > 1) {
    double ss = 0.0;
    for (double se : s.squared_errors) ss += (se - s.mse) * (se - s.mse);
    s.sd = std::sqrt(ss / (n - 1.0));
    s.sd_defined = true;
  }
  return s;
}

ErrorStats error_stats(const std::vector<double>& estimates, double truth) {
  std::vector<Eigen::VectorXd> wrapped;
  wrapped.reserve(estimates.size());
  for (double e : estimates) wrapped.push_back(Eigen::VectorXd::Constant(1, e));
  return error_stats(wrapped, Eigen::VectorXd::Constant(1, truth));
}

}  // namespace qda
