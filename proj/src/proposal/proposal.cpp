#include "qda/proposal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "qda/errors.hpp"
#include "qda/specfun.hpp"

namespace qda {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": scale matrix must be square and nonempty");
  }
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw NumericError(std::string(what) + ": scale matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericError(std::string(what) + ": scale matrix is not positive definite");
  }
  return llt.matrixL();
}

void check_unit(std::span<const double> u) {
  for (double v : u) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::domain_error("map_point: unit coordinate " + std::to_string(v) +
                              " is not strictly inside (0,1)");
    }
  }
}

// y = mu + L z in place (z is stored in y on entry). L lower triangular, so
// rows are updated bottom-up.
void affine_lower(const Eigen::MatrixXd& L, const Eigen::VectorXd& mu, std::span<double> y) {
  const auto k = static_cast<Eigen::Index>(y.size());
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j <= i; ++j) acc += L(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = mu(i) + acc;
  }
}

// z = L^{-1} (y - mu) by forward substitution.
void solve_lower(const Eigen::MatrixXd& L, const Eigen::VectorXd& mu, std::span<const double> y,
                 std::span<double> z) {
  const auto k = static_cast<Eigen::Index>(y.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    double acc = y[static_cast<std::size_t>(i)] - mu(i);
    for (Eigen::Index j = 0; j < i; ++j) acc -= L(i, j) * z[static_cast<std::size_t>(j)];
    z[static_cast<std::size_t>(i)] = acc / L(i, i);
  }
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ']';
  return os.str();
}

}  // namespace

ProposalBlock::ProposalBlock(BlockSpec spec) : spec_(std::move(spec)) {
  std::visit(Overloaded{
                 [&](const UniformBox& b) {
                   if (b.lower.size() == 0 || b.lower.size() != b.upper.size()) {
                     throw std::invalid_argument("uniform_box: lower/upper size mismatch");
                   }
                   if (!(b.lower.array() < b.upper.array()).all() ||
                       !b.lower.allFinite() || !b.upper.allFinite()) {
                     throw std::invalid_argument("uniform_box: need finite lower < upper");
                   }
                   dim_ = static_cast<std::size_t>(b.lower.size());
                   log_volume_ = (b.upper - b.lower).array().log().sum();
                 },
                 [&](const MvNormal& b) {
                   if (b.mean.size() != b.cov.rows()) {
                     throw std::invalid_argument("mvnormal: mean/covariance size mismatch");
                   }
                   chol_ = lower_cholesky(b.cov, "mvnormal");
                   dim_ = static_cast<std::size_t>(b.mean.size());
                 },
                 [&](const MvCauchy& b) {
                   if (b.location.size() != b.scale.rows()) {
                     throw std::invalid_argument("mvcauchy: location/scale size mismatch");
                   }
                   chol_ = lower_cholesky(b.scale, "mvcauchy");
                   dim_ = static_cast<std::size_t>(b.location.size());
                 },
                 [&](const GammaBlock& b) {
                   if (!(b.shape > 0.0) || !(b.scale > 0.0) || !std::isfinite(b.shape) ||
                       !std::isfinite(b.scale)) {
                     throw std::invalid_argument("gamma: shape and scale must be positive");
                   }
                   dim_ = 1;
                 },
             },
             spec_);
}

BlockKind ProposalBlock::kind() const {
  return static_cast<BlockKind>(spec_.index());
}

double ProposalBlock::map(std::span<const double> u, std::span<double> y) const {
  return std::visit(
      Overloaded{
          [&](const UniformBox& b) {
            for (std::size_t i = 0; i < dim_; ++i) {
              const auto k = static_cast<Eigen::Index>(i);
              y[i] = b.lower(k) + (b.upper(k) - b.lower(k)) * u[i];
            }
            return -log_volume_;
          },
          [&](const MvNormal& b) {
            double quad = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
              y[i] = special::inv_norm_cdf(u[i]);
              quad += y[i] * y[i];
            }
            affine_lower(chol_, b.mean, y);
            return -0.5 * quad;
          },
          [&](const MvCauchy& b) {
            double log_psi = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
              y[i] = std::tan(std::numbers::pi * (u[i] - 0.5));
              log_psi -= std::log1p(y[i] * y[i]);
            }
            affine_lower(chol_, b.location, y);
            return log_psi;
          },
          [&](const GammaBlock& b) {
            y[0] = special::gamma_quantile(u[0], b.shape, b.scale);
            return special::gamma_log_pdf(y[0], b.shape, b.scale);
          },
      },
      spec_);
}

void ProposalBlock::to_unit(std::span<const double> y, std::span<double> u) const {
  std::visit(Overloaded{
                 [&](const UniformBox& b) {
                   for (std::size_t i = 0; i < dim_; ++i) {
                     const auto k = static_cast<Eigen::Index>(i);
                     u[i] = (y[i] - b.lower(k)) / (b.upper(k) - b.lower(k));
                   }
                 },
                 [&](const MvNormal& b) {
                   solve_lower(chol_, b.mean, y, u);
                   for (std::size_t i = 0; i < dim_; ++i) u[i] = special::norm_cdf(u[i]);
                 },
                 [&](const MvCauchy& b) {
                   solve_lower(chol_, b.location, y, u);
                   for (std::size_t i = 0; i < dim_; ++i) {
                     u[i] = 0.5 + std::atan(u[i]) / std::numbers::pi;
                   }
                 },
                 [&](const GammaBlock& b) { u[0] = special::gamma_p(b.shape, std::max(0.0, y[0]) / b.scale); },
             },
             spec_);
}

double ProposalBlock::log_density(std::span<const double> y) const {
  return std::visit(
      Overloaded{
          [&](const UniformBox& b) {
            for (std::size_t i = 0; i < dim_; ++i) {
              const auto k = static_cast<Eigen::Index>(i);
              if (y[i] < b.lower(k) || y[i] > b.upper(k)) return kNegInf;
            }
            return -log_volume_;
          },
          [&](const MvNormal& b) {
            std::vector<double> z(dim_);
            solve_lower(chol_, b.mean, y, z);
            double quad = 0.0;
            for (double v : z) quad += v * v;
            return -0.5 * quad;
          },
          [&](const MvCauchy& b) {
            std::vector<double> z(dim_);
            solve_lower(chol_, b.location, y, z);
            double log_psi = 0.0;
            for (double v : z) log_psi -= std::log1p(v * v);
            return log_psi;
          },
          [&](const GammaBlock& b) { return special::gamma_log_pdf(y[0], b.shape, b.scale); },
      },
      spec_);
}

void ProposalBlock::center(std::span<double> y) const {
  std::vector<double> half(dim_, 0.5);
  map(half, y);
}

std::string ProposalBlock::describe() const {
  return std::visit(
      Overloaded{
          [&](const UniformBox& b) {
            return "uniform_box(lower=" + format_vector(b.lower) + ",upper=" + format_vector(b.upper) + ")";
          },
          [&](const MvNormal& b) {
            return "mvnormal(mean=" + format_vector(b.mean) + ",dim=" + std::to_string(dim_) + ")";
          },
          [&](const MvCauchy& b) {
            return "mvcauchy(location=" + format_vector(b.location) + ",dim=" + std::to_string(dim_) + ")";
          },
          [&](const GammaBlock& b) {
            std::ostringstream os;
            os.precision(6);
            os << "gamma(shape=" << b.shape << ",scale=" << b.scale << ")";
            return os.str();
          },
      },
      spec_);
}

Proposal::Proposal(std::vector<ProposalBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("Proposal: at least one block required");
  for (const auto& b : blocks_) {
    offsets_.push_back(dim_);
    dim_ += b.dim();
  }
}

Proposal::Proposal(std::vector<BlockSpec> specs)
    : Proposal([&] {
        std::vector<ProposalBlock> blocks;
        blocks.reserve(specs.size());
        for (auto& s : specs) blocks.emplace_back(std::move(s));
        return blocks;
      }()) {}

double Proposal::map_point(std::span<const double> u, std::span<double> y) const {
  if (u.size() != dim_ || y.size() != dim_) {
    throw std::invalid_argument("map_point: dimension mismatch");
  }
  check_unit(u);
  double log_psi = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::size_t off = offsets_[b];
    const std::size_t k = blocks_[b].dim();
    log_psi += blocks_[b].map(u.subspan(off, k), y.subspan(off, k));
  }
  return log_psi;
}

MappedPoint Proposal::map_point(const Eigen::VectorXd& u) const {
  MappedPoint out;
  out.y.resize(static_cast<Eigen::Index>(dim_));
  out.log_psi = map_point(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())),
                          std::span<double>(out.y.data(), dim_));
  return out;
}

void Proposal::to_unit(std::span<const double> y, std::span<double> u) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::size_t off = offsets_[b];
    const std::size_t k = blocks_[b].dim();
    blocks_[b].to_unit(y.subspan(off, k), u.subspan(off, k));
  }
}

double Proposal::log_density(std::span<const double> y) const {
  double total = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const double lp = blocks_[b].log_density(y.subspan(offsets_[b], blocks_[b].dim()));
    if (lp == kNegInf) return kNegInf;
    total += lp;
  }
  return total;
}

Eigen::VectorXd Proposal::center() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(dim_));
  std::span<double> out(y.data(), dim_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    blocks_[b].center(out.subspan(offsets_[b], blocks_[b].dim()));
  }
  return y;
}

std::string Proposal::describe() const {
  std::string out;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out += " x ";
    out += blocks_[b].describe();
  }
  return out;
}

Proposal uniform_proposal(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  return Proposal(std::vector<BlockSpec>{UniformBox{lower, upper}});
}

Proposal unit_cube_proposal(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return uniform_proposal(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
}

Proposal cauchy_proposal(const Eigen::VectorXd& location, const Eigen::MatrixXd& scale) {
  return Proposal(std::vector<BlockSpec>{MvCauchy{location, scale}});
}

Proposal normal_proposal(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  return Proposal(std::vector<BlockSpec>{MvNormal{mean, cov}});
}

}  // namespace qda
