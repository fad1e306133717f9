#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qda/dacore.hpp"
#include "qda/proposal.hpp"
#include "qda/random.hpp"

namespace qda::models {

// ---- 0.5 Beta(6,3) + 0.5 Beta(2,7) on (0,1)

inline constexpr double kBetaMixtureMean = 4.0 / 9.0;

double beta_mixture_nll(double x);
double beta_mixture_pdf(double x);
double beta_mixture_cdf(double x);
double beta_mixture_sample(Rng& rng);
TargetDensity beta_mixture_target();

// ---- Beta(a,b) on (0,1), used for rate checks

TargetDensity beta_target(double a, double b);
double beta_cdf(double x, double a, double b);

// ---- bivariate normal, mean (2,-1), covariance [[4, .5], [.5, 1]]

Eigen::Vector2d normal2d_mean();
Eigen::Matrix2d normal2d_cov();
double normal2d_nll(std::span<const double> x);
/// Exact marginal alpha-quantile of coordinate `coord` (0-based).
double normal2d_quantile(std::size_t coord, double alpha);
TargetDensity normal2d_target();
Eigen::Vector2d normal2d_sample(Rng& rng);

// ---- banana: phi(x1; 0, 100) phi(x2 + 0.03 x1^2 - 3; 0, 1)

double banana_nll(std::span<const double> x);
TargetDensity banana_target();

// ---- linear regression with prior 1/sigma^2

/// Parameters are laid out as (beta_0, beta_1..beta_d, sigma^2).
struct LinRegData {
  Eigen::MatrixXd X;        // n x d
  Eigen::VectorXd y;        // n
  Eigen::MatrixXd Z;        // n x (d+1), leading column of ones
  Eigen::MatrixXd ZtZ_inv;
  Eigen::VectorXd gamma_hat;
  double s2 = 0.0;

  /// Throws NumericError if Z is rank deficient or n <= d + 3.
  static LinRegData from(Eigen::MatrixXd X, Eigen::VectorXd y);
  /// beta_0 = 3, beta = (-1, 2, 1.5, 0, ...), rows of X ~ N(0, 0.5 11' + 0.5 I),
  /// noise variance sigma2. d >= 3.
  static LinRegData synthetic(std::size_t n, std::size_t d, std::uint64_t seed, double sigma2 = 1.0);
  static Eigen::VectorXd synthetic_beta(std::size_t d);

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(X.cols()); }
  double dof() const { return static_cast<double>(n() - d() - 1); }

  /// (n/2 + 1) log sigma^2 + ||y - Z gamma||^2 / (2 sigma^2); +inf if sigma^2 <= 0.
  double nlp(std::span<const double> gamma, double sigma2) const;
  /// The returned target refers to this object, which must outlive it.
  TargetDensity target() const;
  /// Cauchy(gamma_hat, s^2 (Z'Z)^-1) x Gamma(n-d-1, s^2/(n-d-1)).
  Proposal proposal() const;

  // Exact posterior: sigma^2 ~ (n-d-1) s^2 Inv-chi^2_{n-d-1},
  // gamma | sigma^2 ~ N(gamma_hat, sigma^2 (Z'Z)^-1).
  double sigma2_mean() const;
  double sigma2_var() const;
  double sigma2_quantile(double alpha) const;
  /// Marginal of gamma_j is a scaled t with n-d-1 degrees of freedom.
  double coef_var(std::size_t j) const;
  double coef_quantile(std::size_t j, double alpha) const;
  /// N x (d+2) draws of (gamma, sigma^2).
  Eigen::MatrixXd exact_sample(std::size_t N, std::uint64_t seed) const;
};

// ---- Bayesian lasso, parameters (beta_0, beta_1..beta_d, sigma^2, lambda)

/// The joint posterior exactly as printed:
/// (n/2+1) log sigma^2 + ||y - beta_0 1 - X beta||^2/(2 sigma^2) + lambda sum|beta_j|,
/// restricted to 0 <= lambda <= 4 sigma sqrt(n log d). No power of lambda
/// from the Laplace prior's normalizer appears.
double blasso_nlp(std::span<const double> beta, double beta0, double sigma2, double lambda,
                  const LinRegData& data);
/// Refers to `data`, which must outlive the target.
TargetDensity blasso_target(const LinRegData& data);
/// Linear-regression proposal with lambda ~ Uniform(0, 4 s sqrt(n log d)).
Proposal blasso_proposal(const LinRegData& data);

// ---- GP regression with random Fourier features

/// Basis g(x) = (1, x'). Parameters theta = (beta (d+1), sigma^2, eta (d), rho).
struct GPConfig {
  Eigen::MatrixXd X;          // n x d
  Eigen::VectorXd y;
  Eigen::MatrixXd G;          // n x (d+1)
  Eigen::MatrixXd base;       // d x m standard normal features
  std::size_t m = 0;

  /// Draws the base features once from `feature_seed`. Frequencies for a
  /// given eta are base scaled row-wise by sqrt(2 eta_j), so l is a
  /// deterministic function of theta.
  static GPConfig make(Eigen::MatrixXd X, Eigen::VectorXd y, std::size_t m, std::uint64_t feature_seed);

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(X.cols()); }
  std::size_t q() const { return d() + 1; }
  std::size_t param_dim() const { return q() + d() + 2; }

  /// (cos(X Pi), sin(X Pi)) / sqrt(m) for the given eta.
  Eigen::MatrixXd features(const Eigen::MatrixXd& inputs, std::span<const double> eta) const;
};

struct GPSynthetic {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

/// X ~ U[0,1]^d, y = 1 + sum_j x_j + sin(2 pi x_1) + N(0, noise_sd^2).
GPSynthetic gp_synthetic(std::size_t n, std::size_t d, std::uint64_t seed, double noise_sd = 0.1);

/// (Z Z' + rho I)^-1 through the 2m x 2m inner system.
Eigen::MatrixXd woodbury_inverse(const Eigen::MatrixXd& Zm, double rho);

/// Negative log posterior with Sigma replaced by Z_m Z_m' + rho I, inverse by
/// Woodbury and log-determinant by log|rho I + Z Z'| = (n-2m) log rho + log|Z'Z + rho I|.
/// Throws NumericError (naming rho) if the inner Cholesky fails.
double gp_nlp(std::span<const double> theta, const GPConfig& cfg);
/// Refers to `cfg`, which must outlive the target.
TargetDensity gp_target(const GPConfig& cfg);
/// Cauchy on beta around least squares, Gamma blocks on sigma^2, eta and rho.
Proposal gp_default_proposal(const GPConfig& cfg);

struct GPMoments {
  double mu = 0.0;
  double omega = 0.0;
};

/// Predictive mean and variance at x* with the same feature approximation
/// (so r_* = Z_m z_*' and R(0) = z_* z_*' = 1).
GPMoments gp_mu_omega(std::span<const double> theta, const GPConfig& cfg, std::span<const double> x_star);

struct GPPrediction {
  double point = 0.0;
  std::function<double(double)> density;
  /// Largest predictive standard deviation among atoms with positive mass.
  double max_sd = 0.0;
};

/// Point prediction sum_i p_i mu_i and the mixture density sum_i p_i phi(y; mu_i, omega_i).
GPPrediction gp_predict(const DiscretePosterior& dp, const GPConfig& cfg, std::span<const double> x_star);

}  // namespace qda::models
