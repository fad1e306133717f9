#include "qda/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qda/random.hpp"

namespace qda {

Chain mh_chain(const TargetDensity& target, const MHConfig& cfg) {
  const std::size_t d = target.dim;
  if (cfg.length <= cfg.burn_in) throw std::invalid_argument("mh_chain: length must exceed burn-in");
  const bool indep = cfg.kind == MHConfig::Kind::independence;
  if (indep && cfg.proposal.dim() != d) throw std::invalid_argument("mh_chain: proposal dimension mismatch");
  if (!indep && static_cast<std::size_t>(cfg.step.size()) != d) {
    throw std::invalid_argument("mh_chain: step vector dimension mismatch");
  }

  Eigen::VectorXd x;
  if (cfg.initial) {
    x = *cfg.initial;
  } else if (indep) {
    x = cfg.proposal.center();
  } else {
    throw std::invalid_argument("mh_chain: random walk needs an initial state");
  }
  if (static_cast<std::size_t>(x.size()) != d) throw std::invalid_argument("mh_chain: initial state dimension mismatch");

  auto ell = [&](const Eigen::VectorXd& v) { return target(std::span<const double>(v.data(), d)); };
  double ell_x = ell(x);
  if (!std::isfinite(ell_x)) throw std::invalid_argument("mh_chain: initial state is outside the target's support");
  double lpsi_x = indep ? cfg.proposal.log_density(std::span<const double>(x.data(), d)) : 0.0;

  Rng rng(cfg.seed);
  Chain out;
  out.sample.resize(static_cast<Eigen::Index>(cfg.length - cfg.burn_in), static_cast<Eigen::Index>(d));
  std::vector<double> u(d);
  Eigen::VectorXd cand(static_cast<Eigen::Index>(d));
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < cfg.length; ++t) {
    if (t > 0) {
      double lpsi_c = 0.0;
      if (indep) {
        for (auto& v : u) v = rng.uniform_open();
        lpsi_c = cfg.proposal.map_point(u, std::span<double>(cand.data(), d));
      } else {
        for (std::size_t j = 0; j < d; ++j) {
          const auto k = static_cast<Eigen::Index>(j);
          cand(k) = x(k) + cfg.step(k) * rng.normal();
        }
      }
      const double ell_c = ell(cand);
      const double log_ratio = ell_x - ell_c + lpsi_x - lpsi_c;
      const double log_u = std::log(rng.uniform_open());
      if (std::isfinite(ell_c) && log_u < log_ratio) {
        x = cand;
        ell_x = ell_c;
        lpsi_x = lpsi_c;
        ++accepted;
      }
    }
    if (t >= cfg.burn_in) out.sample.row(static_cast<Eigen::Index>(t - cfg.burn_in)) = x.transpose();
  }
  out.acceptance = cfg.length > 1 ? static_cast<double>(accepted) / static_cast<double>(cfg.length - 1) : 0.0;
  return out;
}

ExactModel exact_model_from_string(std::string_view name) {
  if (name == "beta_mixture") return ExactModel::beta_mixture;
  if (name == "normal2d") return ExactModel::normal2d;
  if (name == "linreg") return ExactModel::linreg;
  throw std::invalid_argument("exact_mc: no closed-form sampler for model '" + std::string(name) + "'");
}

Eigen::MatrixXd exact_mc(ExactModel model, std::size_t N, std::uint64_t seed, const models::LinRegData* data) {
  if (N == 0) throw std::invalid_argument("exact_mc: N must be positive");
  const auto n = static_cast<Eigen::Index>(N);
  switch (model) {
    case ExactModel::beta_mixture: {
      Rng rng(seed);
      Eigen::MatrixXd out(n, 1);
      for (Eigen::Index i = 0; i < n; ++i) out(i, 0) = models::beta_mixture_sample(rng);
      return out;
    }
    case ExactModel::normal2d: {
      Rng rng(seed);
      Eigen::MatrixXd out(n, 2);
      for (Eigen::Index i = 0; i < n; ++i) out.row(i) = models::normal2d_sample(rng).transpose();
      return out;
    }
    case ExactModel::linreg:
      if (!data) throw std::invalid_argument("exact_mc: linreg needs data");
      return data->exact_sample(N, seed);
  }
  throw std::invalid_argument("exact_mc: unknown model");
}

}  // namespace qda
