#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qda/dacore.hpp"
#include "qda/kernels.hpp"

namespace qda {

double moment(const DiscretePosterior& dp, std::span<const int> powers) {
  if (powers.size() != dp.dim()) throw std::invalid_argument("moment: power vector has wrong length");
  for (int k : powers) {
    if (k < 0) throw std::invalid_argument("moment: powers must be nonnegative");
  }
  const auto M = static_cast<Eigen::Index>(dp.size());
  Eigen::VectorXd term = Eigen::VectorXd::Ones(M);
  for (std::size_t j = 0; j < powers.size(); ++j) {
    if (powers[j] == 0) continue;
    const auto col = dp.support.col(static_cast<Eigen::Index>(j));
    for (Eigen::Index i = 0; i < M; ++i) {
      double v = 1.0;
      for (int e = 0; e < powers[j]; ++e) v *= col(i);
      term(i) *= v;
    }
  }
  return kernels::active().dot(dp.masses.data(), term.data(), dp.size());
}

Eigen::VectorXd mean(const DiscretePosterior& dp) {
  const auto& k = kernels::active();
  Eigen::VectorXd m(static_cast<Eigen::Index>(dp.dim()));
  for (Eigen::Index j = 0; j < m.size(); ++j) {
    m(j) = k.dot(dp.masses.data(), dp.support.col(j).data(), dp.size());
  }
  return m;
}

Eigen::MatrixXd covariance(const DiscretePosterior& dp) {
  const auto& k = kernels::active();
  const Eigen::VectorXd m = mean(dp);
  const auto d = static_cast<Eigen::Index>(dp.dim());
  Eigen::MatrixXd c(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      c(a, b) = k.centered_cross(dp.masses.data(), dp.support.col(a).data(), m(a),
                                 dp.support.col(b).data(), m(b), dp.size());
      c(b, a) = c(a, b);
    }
  }
  return c;
}

double marginal_quantile(const DiscretePosterior& dp, std::size_t coord, double alpha) {
  if (coord >= dp.dim()) throw std::out_of_range("marginal_quantile: coordinate out of range");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("marginal_quantile: alpha must lie in (0,1)");
  const auto col = dp.support.col(static_cast<Eigen::Index>(coord));
  std::vector<Eigen::Index> order(dp.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return col(a) < col(b); });
  double cumulative = 0.0;
  Eigen::Index last_positive = order.back();
  for (Eigen::Index i : order) {
    cumulative += dp.masses(i);
    if (dp.masses(i) > 0.0) last_positive = i;
    if (cumulative >= alpha) return col(i);
  }
  // Rounding left the total just below alpha.
  return col(last_positive);
}

double cdf_at(const DiscretePosterior& dp, std::span<const double> x) {
  if (x.size() != dp.dim()) throw std::invalid_argument("cdf_at: point has wrong dimension");
  double total = 0.0;
  for (Eigen::Index i = 0; i < dp.support.rows(); ++i) {
    bool inside = true;
    for (Eigen::Index j = 0; j < dp.support.cols() && inside; ++j) {
      inside = dp.support(i, j) <= x[static_cast<std::size_t>(j)];
    }
    if (inside) total += dp.masses(i);
  }
  return total;
}

void write_csv(std::ostream& out, const DiscretePosterior& dp) {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "# M=" << dp.size() << ",acceptance_rate=" << dp.acceptance_rate << ",shift=" << dp.shift
      << '\n';
  for (std::size_t j = 0; j < dp.dim(); ++j) out << "y_" << j + 1 << ',';
  out << "mass,log_weight\n";
  for (Eigen::Index i = 0; i < dp.support.rows(); ++i) {
    for (Eigen::Index j = 0; j < dp.support.cols(); ++j) out << dp.support(i, j) << ',';
    out << dp.masses(i) << ',' << dp.log_weights(i) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qda
