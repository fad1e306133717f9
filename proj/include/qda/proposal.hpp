#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace qda {

// Block parameter records. A Proposal is a product of blocks laid out on
// contiguous coordinate slices in declaration order.

struct UniformBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct MvNormal {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct MvCauchy {
  Eigen::VectorXd location;
  Eigen::MatrixXd scale;
};

struct GammaBlock {
  double shape = 1.0;
  double scale = 1.0;
};

using BlockSpec = std::variant<UniformBox, MvNormal, MvCauchy, GammaBlock>;

enum class BlockKind { uniform_box, mvnormal, mvcauchy, gamma };

/// One factor of a product proposal: a density psi on its slice together with
/// the transport h from the unit cube that pushes Uniform(0,1)^k onto psi.
///
/// Normal and Cauchy blocks use the lower Cholesky factor L of the scale
/// matrix: h(u) = mu + L z with z_i = Phi^{-1}(u_i) (normal) or
/// z_i = tan(pi (u_i - 1/2)) (Cauchy). Their log-densities are left
/// unnormalized (-z'z/2 and -sum log(1 + z_i^2)); only ratios matter.
class ProposalBlock {
 public:
  explicit ProposalBlock(BlockSpec spec);

  BlockKind kind() const;
  std::size_t dim() const { return dim_; }
  const BlockSpec& spec() const { return spec_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }

  /// y = h(u); returns log psi(y).
  double map(std::span<const double> u, std::span<double> y) const;
  /// u = h^{-1}(y), i.e. the coordinatewise CDF of the transported variable.
  void to_unit(std::span<const double> y, std::span<double> u) const;
  /// log psi(y) for an arbitrary y; -inf off the block's support.
  double log_density(std::span<const double> y) const;
  /// A point in the interior of the support (h at the cube center).
  void center(std::span<double> y) const;

  std::string describe() const;

 private:
  BlockSpec spec_;
  std::size_t dim_ = 0;
  Eigen::MatrixXd chol_;
  double log_volume_ = 0.0;  // uniform_box only
};

struct MappedPoint {
  Eigen::VectorXd y;
  double log_psi = 0.0;
};

class Proposal {
 public:
  Proposal() = default;
  explicit Proposal(std::vector<ProposalBlock> blocks);
  explicit Proposal(std::vector<BlockSpec> specs);

  std::size_t dim() const { return dim_; }
  const std::vector<ProposalBlock>& blocks() const { return blocks_; }
  /// First coordinate of each block.
  const std::vector<std::size_t>& offsets() const { return offsets_; }

  /// Writes h(u) into y and returns log psi(h(u)). Every coordinate of u must
  /// lie strictly inside (0,1); throws std::domain_error otherwise.
  double map_point(std::span<const double> u, std::span<double> y) const;
  MappedPoint map_point(const Eigen::VectorXd& u) const;

  void to_unit(std::span<const double> y, std::span<double> u) const;
  double log_density(std::span<const double> y) const;
  Eigen::VectorXd center() const;

  std::string describe() const;

 private:
  std::vector<ProposalBlock> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_ = 0;
};

/// Convenience constructors.
Proposal uniform_proposal(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
Proposal unit_cube_proposal(std::size_t d);
Proposal cauchy_proposal(const Eigen::VectorXd& location, const Eigen::MatrixXd& scale);
Proposal normal_proposal(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

}  // namespace qda
