#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "qda/errors.hpp"
#include "qda/models.hpp"
#include "qda/specfun.hpp"

namespace qda::models {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cholesky of Z'Z + rho I (2m x 2m).
Eigen::LLT<Eigen::MatrixXd> inner_factor(const Eigen::MatrixXd& Zm, double rho) {
  Eigen::MatrixXd A = Zm.transpose() * Zm;
  A.diagonal().array() += rho;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Cholesky of the inner feature system failed (rho=" << rho << ")";
    throw NumericError(msg.str());
  }
  return llt;
}

// Sigma_hat^-1 v for Sigma_hat = Z Z' + rho I.
Eigen::VectorXd apply_inverse(const Eigen::MatrixXd& Zm, const Eigen::LLT<Eigen::MatrixXd>& llt, double rho,
                              const Eigen::VectorXd& v) {
  return (v - Zm * llt.solve(Zm.transpose() * v)) / rho;
}

struct Theta {
  Eigen::Map<const Eigen::VectorXd> beta;
  double sigma2;
  std::span<const double> eta;
  double rho;
};

Theta split(std::span<const double> theta, const GPConfig& cfg) {
  if (theta.size() != cfg.param_dim()) throw std::invalid_argument("GP parameter vector has the wrong length");
  const std::size_t q = cfg.q();
  const std::size_t d = cfg.d();
  return {Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(q)), theta[q],
          theta.subspan(q + 1, d), theta[q + 1 + d]};
}

bool in_support(const Theta& t) {
  if (!(t.sigma2 > 0.0 && t.rho > 0.0)) return false;
  for (double e : t.eta) {
    if (!(e > 0.0)) return false;
  }
  return true;
}

}  // namespace

GPConfig GPConfig::make(Eigen::MatrixXd X, Eigen::VectorXd y, std::size_t m, std::uint64_t feature_seed) {
  if (m == 0) throw std::invalid_argument("GPConfig: m must be at least 1");
  if (X.rows() != y.size() || X.rows() == 0) throw std::invalid_argument("GPConfig: X and y row counts differ");
  GPConfig cfg;
  cfg.m = m;
  cfg.G.resize(X.rows(), X.cols() + 1);
  cfg.G.col(0).setOnes();
  cfg.G.rightCols(X.cols()) = X;
  Rng rng(feature_seed);
  cfg.base.resize(X.cols(), static_cast<Eigen::Index>(m));
  for (Eigen::Index c = 0; c < cfg.base.cols(); ++c) {
    for (Eigen::Index r = 0; r < cfg.base.rows(); ++r) cfg.base(r, c) = rng.normal();
  }
  cfg.X = std::move(X);
  cfg.y = std::move(y);
  return cfg;
}

Eigen::MatrixXd GPConfig::features(const Eigen::MatrixXd& inputs, std::span<const double> eta) const {
  Eigen::MatrixXd Pi = base;
  for (Eigen::Index j = 0; j < Pi.rows(); ++j) Pi.row(j) *= std::sqrt(2.0 * eta[static_cast<std::size_t>(j)]);
  const Eigen::MatrixXd XP = inputs * Pi;
  const auto mi = static_cast<Eigen::Index>(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Eigen::MatrixXd Zm(inputs.rows(), 2 * mi);
  Zm.leftCols(mi) = XP.array().cos().matrix() * scale;
  Zm.rightCols(mi) = XP.array().sin().matrix() * scale;
  return Zm;
}

GPSynthetic gp_synthetic(std::size_t n, std::size_t d, std::uint64_t seed, double noise_sd) {
  if (n == 0 || d == 0) throw std::invalid_argument("gp_synthetic: n and d must be positive");
  Rng rng(seed);
  GPSynthetic out;
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  out.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < out.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.X.cols(); ++j) out.X(i, j) = rng.uniform();
    out.y(i) = 1.0 + out.X.row(i).sum() + std::sin(2.0 * std::numbers::pi * out.X(i, 0)) + noise_sd * rng.normal();
  }
  return out;
}

Eigen::MatrixXd woodbury_inverse(const Eigen::MatrixXd& Zm, double rho) {
  const auto llt = inner_factor(Zm, rho);
  Eigen::MatrixXd out = -Zm * llt.solve(Zm.transpose());
  out.diagonal().array() += 1.0;
  return out / rho;
}

double gp_nlp(std::span<const double> theta, const GPConfig& cfg) {
  const Theta t = split(theta, cfg);
  if (!in_support(t)) return kInf;
  const Eigen::MatrixXd Zm = cfg.features(cfg.X, t.eta);
  const auto llt = inner_factor(Zm, t.rho);
  const Eigen::VectorXd r = cfg.y - cfg.G * t.beta;
  const Eigen::VectorXd Ztr = Zm.transpose() * r;
  const double quad = (r.squaredNorm() - Ztr.dot(llt.solve(Ztr))) / t.rho;
  const Eigen::MatrixXd& L = llt.matrixLLT();
  double logdet_inner = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) logdet_inner += std::log(L(i, i));
  logdet_inner *= 2.0;
  const double n = static_cast<double>(cfg.n());
  const double two_m = 2.0 * static_cast<double>(cfg.m);
  const double logdet = (n - two_m) * std::log(t.rho) + logdet_inner;
  double eta_sum = 0.0;
  for (double e : t.eta) eta_sum += e;
  return (0.5 * n + 1.0) * std::log(t.sigma2) + 0.5 * logdet + quad / (2.0 * t.sigma2) + 0.5 * (eta_sum + t.rho);
}

TargetDensity gp_target(const GPConfig& cfg) {
  std::vector<SupportKind> support(cfg.q(), SupportKind::real());
  support.resize(cfg.param_dim(), SupportKind::positive());
  return {[&cfg](std::span<const double> x) { return gp_nlp(x, cfg); }, cfg.param_dim(), std::move(support), "gp"};
}

Proposal gp_default_proposal(const GPConfig& cfg) {
  const auto q = static_cast<Eigen::Index>(cfg.q());
  const Eigen::MatrixXd GtG = cfg.G.transpose() * cfg.G;
  const Eigen::VectorXd beta_ls = GtG.llt().solve(cfg.G.transpose() * cfg.y);
  const double dof = std::max(1.0, static_cast<double>(cfg.n()) - static_cast<double>(q));
  const double s2 = (cfg.y - cfg.G * beta_ls).squaredNorm() / dof;
  Eigen::MatrixXd scale = s2 * GtG.llt().solve(Eigen::MatrixXd::Identity(q, q));
  scale = 0.5 * (scale + scale.transpose()).eval();
  std::vector<BlockSpec> blocks{MvCauchy{beta_ls, scale}, GammaBlock{2.0, std::max(s2, 1e-6)}};
  for (std::size_t j = 0; j < cfg.d(); ++j) blocks.emplace_back(GammaBlock{2.0, 1.0});
  blocks.emplace_back(GammaBlock{2.0, 0.05});
  return Proposal(std::move(blocks));
}

GPMoments gp_mu_omega(std::span<const double> theta, const GPConfig& cfg, std::span<const double> x_star) {
  const Theta t = split(theta, cfg);
  if (!in_support(t)) throw std::domain_error("gp_mu_omega: theta outside the parameter space");
  if (x_star.size() != cfg.d()) throw std::invalid_argument("gp_mu_omega: x* has the wrong dimension");
  const Eigen::MatrixXd Zm = cfg.features(cfg.X, t.eta);
  const Eigen::Map<const Eigen::RowVectorXd> xs(x_star.data(), static_cast<Eigen::Index>(x_star.size()));
  const Eigen::MatrixXd zs = cfg.features(Eigen::MatrixXd(xs), t.eta);
  const auto llt = inner_factor(Zm, t.rho);
  const Eigen::VectorXd r_star = Zm * zs.transpose();
  const Eigen::VectorXd resid = cfg.y - cfg.G * t.beta;
  double g_beta = t.beta(0);
  for (std::size_t j = 0; j < cfg.d(); ++j) g_beta += t.beta(static_cast<Eigen::Index>(j + 1)) * x_star[j];
  GPMoments out;
  out.mu = g_beta + r_star.dot(apply_inverse(Zm, llt, t.rho, resid));
  out.omega = t.sigma2 * (1.0 + t.rho - r_star.dot(apply_inverse(Zm, llt, t.rho, r_star)));
  if (!(out.omega > 0.0)) throw NumericError("gp_mu_omega: nonpositive predictive variance");
  return out;
}

GPPrediction gp_predict(const DiscretePosterior& dp, const GPConfig& cfg, std::span<const double> x_star) {
  if (dp.dim() != cfg.param_dim()) throw std::invalid_argument("gp_predict: posterior dimension mismatch");
  std::vector<double> w;
  std::vector<double> mu;
  std::vector<double> sd;
  GPPrediction out;
  std::vector<double> theta(dp.dim());
  for (Eigen::Index i = 0; i < dp.masses.size(); ++i) {
    if (!(dp.masses(i) > 0.0)) continue;
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = dp.support(i, static_cast<Eigen::Index>(j));
    const GPMoments m = gp_mu_omega(theta, cfg, x_star);
    w.push_back(dp.masses(i));
    mu.push_back(m.mu);
    sd.push_back(std::sqrt(m.omega));
    out.point += dp.masses(i) * m.mu;
    out.max_sd = std::max(out.max_sd, sd.back());
  }
  out.density = [w = std::move(w), mu = std::move(mu), sd = std::move(sd)](double y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i] * std::exp(special::norm_log_pdf((y - mu[i]) / sd[i])) / sd[i];
    }
    return acc;
  };
  return out;
}

}  // namespace qda::models
