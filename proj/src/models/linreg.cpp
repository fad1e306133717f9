#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qda/errors.hpp"
#include "qda/models.hpp"
#include "qda/specfun.hpp"

namespace qda::models {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<SupportKind> linreg_support(std::size_t d) {
  std::vector<SupportKind> s(d + 1, SupportKind::real());
  s.push_back(SupportKind::positive());
  return s;
}

double lambda_cap(double sigma, std::size_t n, std::size_t d) {
  return 4.0 * sigma * std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(d)));
}

}  // namespace

LinRegData LinRegData::from(Eigen::MatrixXd X, Eigen::VectorXd y) {
  const auto n = X.rows();
  const auto d = X.cols();
  if (y.size() != n) throw std::invalid_argument("LinRegData: X and y row counts differ");
  if (n <= d + 3) throw NumericError("LinRegData: need n > d + 3, got n=" + std::to_string(n) + " d=" + std::to_string(d));
  LinRegData out;
  out.Z.resize(n, d + 1);
  out.Z.col(0).setOnes();
  out.Z.rightCols(d) = X;
  const Eigen::MatrixXd ZtZ = out.Z.transpose() * out.Z;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ZtZ);
  if (lu.rank() < d + 1) throw NumericError("LinRegData: design matrix is rank deficient");
  out.ZtZ_inv = ZtZ.llt().solve(Eigen::MatrixXd::Identity(d + 1, d + 1));
  out.ZtZ_inv = 0.5 * (out.ZtZ_inv + out.ZtZ_inv.transpose()).eval();
  out.gamma_hat = ZtZ.llt().solve(out.Z.transpose() * y);
  const Eigen::VectorXd r = y - out.Z * out.gamma_hat;
  out.s2 = r.squaredNorm() / static_cast<double>(n - d - 1);
  out.X = std::move(X);
  out.y = std::move(y);
  return out;
}

Eigen::VectorXd LinRegData::synthetic_beta(std::size_t d) {
  if (d < 3) throw std::invalid_argument("synthetic linear model needs d >= 3");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  beta(0) = -1.0;
  beta(1) = 2.0;
  beta(2) = 1.5;
  return beta;
}

LinRegData LinRegData::synthetic(std::size_t n, std::size_t d, std::uint64_t seed, double sigma2) {
  const Eigen::VectorXd beta = synthetic_beta(d);
  Rng rng(seed);
  const auto ni = static_cast<Eigen::Index>(n);
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd X(ni, di);
  Eigen::VectorXd y(ni);
  const double h = std::sqrt(0.5);
  const double sd = std::sqrt(sigma2);
  for (Eigen::Index i = 0; i < ni; ++i) {
    const double common = rng.normal();
    for (Eigen::Index j = 0; j < di; ++j) X(i, j) = h * common + h * rng.normal();
    y(i) = 3.0 + X.row(i).dot(beta) + sd * rng.normal();
  }
  return from(std::move(X), std::move(y));
}

double LinRegData::nlp(std::span<const double> gamma, double sigma2) const {
  if (!(sigma2 > 0.0)) return kInf;
  const Eigen::Map<const Eigen::VectorXd> g(gamma.data(), static_cast<Eigen::Index>(gamma.size()));
  const double rss = (y - Z * g).squaredNorm();
  return (0.5 * static_cast<double>(n()) + 1.0) * std::log(sigma2) + rss / (2.0 * sigma2);
}

TargetDensity LinRegData::target() const {
  const std::size_t dd = d();
  return {[this, dd](std::span<const double> x) { return nlp(x.first(dd + 1), x[dd + 1]); }, dd + 2,
          linreg_support(dd), "linreg"};
}

Proposal LinRegData::proposal() const {
  const double k = dof();
  return Proposal(std::vector<BlockSpec>{MvCauchy{gamma_hat, s2 * ZtZ_inv}, GammaBlock{k, s2 / k}});
}

double LinRegData::sigma2_mean() const {
  const double k = dof();
  return k * s2 / (k - 2.0);
}

double LinRegData::sigma2_var() const {
  const double k = dof();
  const double a = k * s2;
  return 2.0 * a * a / ((k - 2.0) * (k - 2.0) * (k - 4.0));
}

double LinRegData::sigma2_quantile(double alpha) const {
  const double k = dof();
  const double chi = 2.0 * special::gamma_quantile(1.0 - alpha, 0.5 * k, 1.0);
  return k * s2 / chi;
}

double LinRegData::coef_var(std::size_t j) const {
  const double k = dof();
  const auto ji = static_cast<Eigen::Index>(j);
  return s2 * ZtZ_inv(ji, ji) * k / (k - 2.0);
}

double LinRegData::coef_quantile(std::size_t j, double alpha) const {
  const auto ji = static_cast<Eigen::Index>(j);
  return gamma_hat(ji) + std::sqrt(s2 * ZtZ_inv(ji, ji)) * special::student_t_quantile(alpha, dof());
}

Eigen::MatrixXd LinRegData::exact_sample(std::size_t N, std::uint64_t seed) const {
  const auto p = static_cast<Eigen::Index>(d() + 1);
  const Eigen::MatrixXd L = ZtZ_inv.llt().matrixL();
  const double k = dof();
  Rng rng(seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(N), p + 1);
  Eigen::VectorXd z(p);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double sigma2 = k * s2 / rng.chi_squared(k);
    for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.normal();
    out.row(r).head(p) = (gamma_hat + std::sqrt(sigma2) * (L * z)).transpose();
    out(r, p) = sigma2;
  }
  return out;
}

double blasso_nlp(std::span<const double> beta, double beta0, double sigma2, double lambda, const LinRegData& data) {
  if (!(sigma2 > 0.0)) return kInf;
  if (!(lambda >= 0.0 && lambda <= lambda_cap(std::sqrt(sigma2), data.n(), data.d()))) return kInf;
  const Eigen::Map<const Eigen::VectorXd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
  const double rss = ((data.y - data.X * b).array() - beta0).matrix().squaredNorm();
  return (0.5 * static_cast<double>(data.n()) + 1.0) * std::log(sigma2) + rss / (2.0 * sigma2) +
         lambda * b.lpNorm<1>();
}

TargetDensity blasso_target(const LinRegData& data) {
  const std::size_t d = data.d();
  auto support = linreg_support(d);
  support.push_back(SupportKind::positive());
  return {[&data, d](std::span<const double> x) { return blasso_nlp(x.subspan(1, d), x[0], x[d + 1], x[d + 2], data); },
          d + 3, std::move(support), "blasso"};
}

Proposal blasso_proposal(const LinRegData& data) {
  const double k = data.dof();
  const double cap = lambda_cap(std::sqrt(data.s2), data.n(), data.d());
  return Proposal(std::vector<BlockSpec>{MvCauchy{data.gamma_hat, data.s2 * data.ZtZ_inv}, GammaBlock{k, data.s2 / k},
                                         UniformBox{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, cap)}});
}

}  // namespace qda::models
