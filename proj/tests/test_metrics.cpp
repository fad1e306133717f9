#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qda/metrics.hpp"
#include "qda/models.hpp"
#include "qda/qmc.hpp"
#include "qda/random.hpp"

using namespace qda;

namespace {

WeightedPoints random_1d(Rng& rng, std::size_t M) {
  WeightedPoints w;
  w.points.resize(static_cast<Eigen::Index>(M), 1);
  w.weights.resize(static_cast<Eigen::Index>(M));
  for (std::size_t i = 0; i < M; ++i) {
    // a coarse lattice makes ties between sets likely
    w.points(static_cast<Eigen::Index>(i), 0) = std::floor(rng.uniform() * 20.0) / 20.0;
    w.weights(static_cast<Eigen::Index>(i)) = rng.uniform();
  }
  w.weights /= w.weights.sum();
  return w;
}

const CdfOracle kUniform{[](std::span<const double> x) { return std::clamp(x[0], 0.0, 1.0); }, 1};

}  // namespace

TEST_CASE("point mass against the uniform cdf") {
  const WeightedPoints pm{Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::VectorXd::Constant(1, 1.0)};
  const auto r = kolmogorov_discrete(pm, kUniform);
  CHECK(r.value == 0.5);
  CHECK(r.exact);
}

TEST_CASE("a discrete measure against its own cdf") {
  const WeightedPoints w{(Eigen::MatrixXd(3, 1) << 0.1, 0.4, 0.8).finished(), Eigen::Vector3d(0.2, 0.5, 0.3)};
  const CdfOracle own{[](std::span<const double> x) {
                        return (x[0] >= 0.1 ? 0.2 : 0.0) + (x[0] >= 0.4 ? 0.5 : 0.0) + (x[0] >= 0.8 ? 0.3 : 0.0);
                      },
                      1};
  CHECK(kolmogorov_between(w, w) == 0.0);
  // a step cdf is not continuous: the left limit at each atom differs by its mass
  CHECK(kolmogorov_discrete(w, own).value == doctest::Approx(0.5));
}

TEST_CASE("the midpoint grid against the uniform cdf") {
  for (std::size_t M : {1u, 5u, 64u}) {
    const auto pts = midpoint_grid_1d(M);
    const auto r = kolmogorov_discrete(WeightedPoints::empirical(pts.points), kUniform);
    CHECK(r.value == doctest::Approx(0.5 / static_cast<double>(M)).epsilon(1e-12));
  }
}

TEST_CASE("beta mixture on ten midpoints") {
  const auto pts = midpoint_grid_1d(10);
  Eigen::VectorXd w(10);
  for (int i = 0; i < 10; ++i) w(i) = models::beta_mixture_pdf(pts.points(i, 0));
  const WeightedPoints wp{pts.points, w / w.sum()};
  const CdfOracle mix{[](std::span<const double> x) { return models::beta_mixture_cdf(x[0]); }, 1};
  CHECK(kolmogorov_discrete(wp, mix).value == doctest::Approx(0.0872).epsilon(0.01));
}

TEST_CASE("symmetry and triangle inequality") {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto a = random_1d(rng, 1 + rng.next() % 30);
    const auto b = random_1d(rng, 1 + rng.next() % 30);
    const auto c = random_1d(rng, 1 + rng.next() % 30);
    const double ab = kolmogorov_between(a, b);
    CHECK(std::abs(ab - kolmogorov_between(b, a)) <= 1e-15);
    CHECK(kolmogorov_between(a, c) <= ab + kolmogorov_between(b, c) + 1e-12);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0 + 1e-15);
  }
}

TEST_CASE("multivariate estimate is a capped lower bound") {
  const auto pts = sobol_points(4096, 2);
  const CdfOracle prod{[](std::span<const double> x) {
                         return std::clamp(x[0], 0.0, 1.0) * std::clamp(x[1], 0.0, 1.0);
                       },
                       2};
  const SupportPointSet::Matrix pm = pts.points;
  const auto r = kolmogorov_discrete(WeightedPoints::empirical(Eigen::MatrixXd(pm)), prod);
  CHECK_FALSE(r.exact);
  CHECK(r.evaluations <= kKolmogorovGridCap);
  CHECK(r.value < 0.01);
  CHECK(r.value > 0.0);

  // full grid for a small set: the bound is attained
  const WeightedPoints one{(Eigen::MatrixXd(1, 2) << 0.5, 0.5).finished(), Eigen::VectorXd::Constant(1, 1.0)};
  CHECK(kolmogorov_discrete(one, prod).value == doctest::Approx(0.75));
  CHECK_THROWS_AS(kolmogorov_discrete(one, kUniform), std::invalid_argument);
}

TEST_CASE("error statistics") {
  const auto zero = error_stats(std::vector<double>{1.0, 1.0, 1.0}, 1.0);
  CHECK(zero.mse == 0.0);
  CHECK(zero.sd == 0.0);
  CHECK(zero.squared_errors == std::vector<double>{0.0, 0.0, 0.0});

  const auto single = error_stats(std::vector<double>{3.0}, 1.0);
  CHECK(single.mse == 4.0);
  CHECK(single.sd == 0.0);
  CHECK_FALSE(single.sd_defined);

  const auto sym = error_stats(std::vector<double>{0.0, 2.0}, 1.0);
  CHECK(sym.mse == 1.0);
  CHECK(sym.sd == 0.0);
  CHECK(sym.sd_defined);

  const auto vec = error_stats({Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.0, 0.0)}, Eigen::Vector2d(0.0, 0.0));
  CHECK(vec.squared_errors == std::vector<double>{5.0, 0.0});
  CHECK(vec.mse == 2.5);
  CHECK(vec.sd == doctest::Approx(std::sqrt(12.5)));

  CHECK_THROWS(error_stats(std::vector<double>{}, 0.0));
  CHECK_THROWS(error_stats({Eigen::Vector2d(1.0, 2.0)}, Eigen::Vector3d::Zero()));
}
