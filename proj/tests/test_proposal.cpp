#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qda/dacore.hpp"
#include "qda/errors.hpp"
#include "qda/proposal.hpp"
#include "qda/qmc.hpp"
#include "qda/specfun.hpp"

using namespace qda;

namespace {

Eigen::MatrixXd spd3() {
  Eigen::MatrixXd s(3, 3);
  s << 2.0, 0.3, -0.2, 0.3, 1.0, 0.1, -0.2, 0.1, 0.5;
  return s;
}

std::vector<Proposal> all_kinds() {
  Eigen::VectorXd lo(2), hi(2), mu(3);
  lo << -1.0, 2.0;
  hi << 3.0, 2.5;
  mu << 1.0, -2.0, 0.5;
  return {
      uniform_proposal(lo, hi),
      normal_proposal(mu, spd3()),
      cauchy_proposal(mu, spd3()),
      Proposal(std::vector<BlockSpec>{GammaBlock{3.5, 0.4}}),
      Proposal(std::vector<BlockSpec>{MvCauchy{mu, spd3()}, GammaBlock{0.7, 2.0}, UniformBox{lo, hi}}),
  };
}

}  // namespace

TEST_CASE("cauchy center maps to the location") {
  Eigen::Vector2d mu(2.0, -1.0);
  const Proposal p = cauchy_proposal(mu, Eigen::Matrix2d::Identity());
  const MappedPoint m = p.map_point(Eigen::Vector2d(0.5, 0.5));
  CHECK(m.y(0) == 2.0);
  CHECK(m.y(1) == -1.0);
  CHECK(m.log_psi == 0.0);
}

TEST_CASE("normal block uses the normal quantile") {
  const Proposal p = normal_proposal(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  const MappedPoint m = p.map_point(Eigen::VectorXd::Constant(1, 0.975));
  CHECK(m.y(0) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(m.log_psi == doctest::Approx(-0.5 * m.y(0) * m.y(0)).epsilon(1e-14));
}

TEST_CASE("unit box is the identity with zero log density") {
  const Proposal p = unit_cube_proposal(3);
  const auto pts = sobol_points(50, 3, 1);
  for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
    const Eigen::VectorXd u = pts.points.row(i).transpose();
    const MappedPoint m = p.map_point(u);
    CHECK(m.y == u);
    CHECK(m.log_psi == 0.0);
  }
}

TEST_CASE("uniform box log density is minus the log volume") {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, -1.0;
  hi << 2.0, 4.0;
  const Proposal p = uniform_proposal(lo, hi);
  CHECK(p.map_point(Eigen::Vector2d(0.3, 0.9)).log_psi == doctest::Approx(-std::log(10.0)).epsilon(1e-15));
}

TEST_CASE("cauchy transport is tan(pi(u - 1/2)) through the Cholesky factor") {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);
  const Proposal p = cauchy_proposal(mu, spd3());
  const Eigen::Vector3d u(0.2, 0.7, 0.9);
  const MappedPoint m = p.map_point(u);
  Eigen::Vector3d z;
  for (int i = 0; i < 3; ++i) z(i) = std::tan(std::numbers::pi * (u(i) - 0.5));
  const Eigen::MatrixXd L = spd3().llt().matrixL();
  CHECK((m.y - L * z).cwiseAbs().maxCoeff() < 1e-14);
  double lp = 0.0;
  for (int i = 0; i < 3; ++i) lp -= std::log1p(z(i) * z(i));
  CHECK(m.log_psi == doctest::Approx(lp).epsilon(1e-13));
}

TEST_CASE("gamma block maps through the gamma quantile") {
  const Proposal p(std::vector<BlockSpec>{GammaBlock{2.0, 3.0}});
  const MappedPoint m = p.map_point(Eigen::VectorXd::Constant(1, 0.5));
  CHECK(m.y(0) == doctest::Approx(3.0 * 1.6783469900166606).epsilon(1e-10));
  CHECK(m.log_psi == doctest::Approx(special::gamma_log_pdf(m.y(0), 2.0, 3.0)).epsilon(1e-13));
}

TEST_CASE("round trip through the block cdfs") {
  const auto pts = halton_points(100, 6);
  for (const Proposal& p : all_kinds()) {
    const std::size_t d = p.dim();
    std::vector<double> y(d), back(d);
    for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
      const double* u = pts.points.row(i).data();
      const double lp = p.map_point(std::span<const double>(u, d), y);
      p.to_unit(y, back);
      for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(back[j] - u[j]) < 1e-8);
      CHECK(std::abs(p.log_density(y) - lp) < 1e-9 * std::max(1.0, std::abs(lp)));
    }
  }
}

TEST_CASE("scalar transports are strictly increasing") {
  for (const Proposal& p : all_kinds()) {
    if (p.blocks().size() != 1 || p.dim() > 3) continue;
    const std::size_t d = p.dim();
    std::vector<double> u(d, 0.5), y(d);
    for (std::size_t j = 0; j < d; ++j) {
      double prev = -INFINITY;
      for (int k = 1; k < 200; ++k) {
        std::fill(u.begin(), u.end(), 0.5);
        u[j] = k / 200.0;
        p.map_point(u, y);
        // the lower-triangular map is increasing in the coordinate it owns
        CHECK(y[j] > prev);
        prev = y[j];
      }
    }
  }
}

TEST_CASE("boundary points are rejected") {
  const Proposal p = unit_cube_proposal(2);
  std::vector<double> y(2);
  CHECK_THROWS_AS(p.map_point(std::vector<double>{0.0, 0.5}, y), std::domain_error);
  CHECK_THROWS_AS(p.map_point(std::vector<double>{0.5, 1.0}, y), std::domain_error);
}

TEST_CASE("construction validates parameters") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(ProposalBlock(MvCauchy{Eigen::Vector2d::Zero(), bad}), NumericError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS_AS(ProposalBlock(MvNormal{Eigen::Vector2d::Zero(), asym}), NumericError);
  CHECK_THROWS(ProposalBlock(UniformBox{Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)}));
  CHECK_THROWS(ProposalBlock(GammaBlock{0.0, 1.0}));
  CHECK_THROWS(ProposalBlock(GammaBlock{1.0, -2.0}));
}

TEST_CASE("product layout and description") {
  const Proposal p = all_kinds().back();
  CHECK(p.dim() == 6);
  CHECK(p.offsets() == std::vector<std::size_t>{0, 3, 4});
  CHECK(p.describe().find("mvcauchy") != std::string::npos);
  const Eigen::VectorXd c = p.center();
  CHECK(std::isfinite(p.log_density(std::span<const double>(c.data(), 6))));
}

TEST_CASE("a constant added to l leaves the masses unchanged") {
  const TargetDensity t{[](std::span<const double> x) { return 0.5 * x[0] * x[0]; }, 1, {SupportKind::real()}, "n"};
  const TargetDensity t2{[](std::span<const double> x) { return 0.5 * x[0] * x[0] + 1000.0; }, 1, {SupportKind::real()}, "n"};
  const auto pts = sobol_points(257, 1, 1);
  const Proposal p = cauchy_proposal(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  const DiscretePosterior a = discretize(t, p, pts);
  const DiscretePosterior b = discretize(t2, p, pts);
  CHECK((a.masses - b.masses).cwiseAbs().maxCoeff() <= 1e-14);
}
