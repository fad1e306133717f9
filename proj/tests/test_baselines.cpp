#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qda/baselines.hpp"
#include "qda/models.hpp"
#include "qda/random.hpp"

using namespace qda;

namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  for (double x : v) out.sd += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(out.sd / static_cast<double>(v.size() - 1));
  return out;
}

MHConfig independence(std::size_t length, std::size_t burn_in, std::uint64_t seed) {
  MHConfig cfg;
  cfg.kind = MHConfig::Kind::independence;
  cfg.proposal = unit_cube_proposal(1);
  cfg.length = length;
  cfg.burn_in = burn_in;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("uniform target with a uniform proposal accepts everything") {
  const TargetDensity flat{[](std::span<const double>) { return 0.0; }, 1, {SupportKind::interval(0, 1)}, "u"};
  const Chain c = mh_chain(flat, independence(1000, 100, 4));
  CHECK(c.acceptance == 1.0);
  CHECK(c.sample.rows() == 900);
}

TEST_CASE("long-run frequencies on a three-atom target") {
  const double masses[3] = {0.2, 0.3, 0.5};
  const TargetDensity steps{[&](std::span<const double> x) {
                              if (!(x[0] > 0.0 && x[0] < 1.0)) return std::numeric_limits<double>::infinity();
                              return -std::log(masses[std::min(2, static_cast<int>(x[0] * 3.0))]);
                            },
                            1, {SupportKind::interval(0, 1)}, "steps"};
  const Chain c = mh_chain(steps, independence(400000, 1000, 17));
  // batch means give the chain's standard error
  const Eigen::Index B = 100, len = c.sample.rows() / B;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> batch;
    for (Eigen::Index b = 0; b < B; ++b) {
      double hits = 0.0;
      for (Eigen::Index i = b * len; i < (b + 1) * len; ++i) hits += static_cast<int>(c.sample(i, 0) * 3.0) == k;
      batch.push_back(hits / static_cast<double>(len));
    }
    const MeanSd s = mean_sd(batch);
    CHECK(std::abs(s.mean - masses[k]) < 3.0 * s.sd / std::sqrt(static_cast<double>(B)) + 1e-3);
  }
}

TEST_CASE("chains are reproducible") {
  const auto t = models::beta_mixture_target();
  const Chain a = mh_chain(t, independence(500, 50, 99));
  const Chain b = mh_chain(t, independence(500, 50, 99));
  CHECK(a.sample == b.sample);
  CHECK(a.acceptance == b.acceptance);
  CHECK(mh_chain(t, independence(500, 50, 100)).sample != a.sample);
}

TEST_CASE("infeasible starts and inconsistent configs are rejected") {
  const auto t = models::beta_mixture_target();
  auto cfg = independence(100, 10, 1);
  cfg.initial = Eigen::VectorXd::Constant(1, 2.0);
  CHECK_THROWS_AS(mh_chain(t, cfg), std::invalid_argument);
  MHConfig rw;
  rw.kind = MHConfig::Kind::random_walk;
  rw.step = Eigen::VectorXd::Constant(2, 1.0);
  rw.length = 100;
  CHECK_THROWS_AS(mh_chain(models::normal2d_target(), rw), std::invalid_argument);
  CHECK_THROWS_AS(mh_chain(t, independence(10, 10, 1)), std::invalid_argument);
}

TEST_CASE("short independence chains on the beta mixture") {
  // ten post-burn-in states, 100 repetitions; reference value 0.0121
  std::vector<double> se;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Chain c = mh_chain(models::beta_mixture_target(), independence(110, 100, Rng::derive(5, r).next()));
    const double e = c.sample.col(0).mean() - models::kBetaMixtureMean;
    se.push_back(e * e);
  }
  const MeanSd s = mean_sd(se);
  CHECK(std::abs(s.mean - 0.0121) < 3.0 * s.sd / 10.0);
}

TEST_CASE("random walk error shrinks with chain length") {
  const auto t = models::normal2d_target();
  const Eigen::Vector2d mu = models::normal2d_mean();
  double mse[2] = {0.0, 0.0};
  const std::size_t lengths[2] = {2000, 8000};
  for (int l = 0; l < 2; ++l) {
    for (std::uint64_t r = 0; r < 40; ++r) {
      MHConfig cfg;
      cfg.kind = MHConfig::Kind::random_walk;
      cfg.step = Eigen::Vector2d(4.0, 2.0);
      cfg.initial = mu;
      cfg.length = lengths[l] + 500;
      cfg.burn_in = 500;
      cfg.seed = Rng::derive(8, r).next();
      const Chain c = mh_chain(t, cfg);
      mse[l] += (c.sample.colwise().mean().transpose() - mu).squaredNorm() / 40.0;
    }
  }
  // expected ratio 4; the MSE over 40 runs has relative sd ~ 0.2
  CHECK(mse[0] / mse[1] > 2.0);
  CHECK(mse[0] / mse[1] < 8.0);
}

TEST_CASE("exact monte carlo") {
  std::vector<double> se;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Eigen::MatrixXd s = exact_mc(ExactModel::beta_mixture, 10, Rng::derive(6, r).next());
    const double e = s.col(0).mean() - models::kBetaMixtureMean;
    se.push_back(e * e);
  }
  const MeanSd s = mean_sd(se);
  CHECK(std::abs(s.mean - 0.0082) < 3.0 * s.sd / 10.0);

  const Eigen::MatrixXd n = exact_mc(ExactModel::normal2d, 200000, 3);
  const Eigen::RowVectorXd m = n.colwise().mean();
  const Eigen::MatrixXd c = (n.rowwise() - m).transpose() * (n.rowwise() - m) / (n.rows() - 1.0);
  CHECK((c - models::normal2d_cov()).cwiseAbs().maxCoeff() < 0.05);
  CHECK((m.transpose() - models::normal2d_mean()).cwiseAbs().maxCoeff() < 0.02);

  const auto data = models::LinRegData::synthetic(50, 5, 21);
  const Eigen::MatrixXd l = exact_mc(ExactModel::linreg, 40000, 4, &data);
  CHECK(std::abs(l.col(6).mean() - data.sigma2_mean()) < 4.0 * std::sqrt(data.sigma2_var() / 40000.0));
  CHECK_THROWS(exact_mc(ExactModel::linreg, 10, 4));
  CHECK_THROWS(exact_model_from_string("gp"));
  CHECK(exact_model_from_string("normal2d") == ExactModel::normal2d);
  CHECK(exact_mc(ExactModel::normal2d, 5, 9) == exact_mc(ExactModel::normal2d, 5, 9));
}
