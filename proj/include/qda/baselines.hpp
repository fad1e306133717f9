#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "qda/dacore.hpp"
#include "qda/models.hpp"
#include "qda/proposal.hpp"

namespace qda {

struct MHConfig {
  enum class Kind { independence, random_walk };
  Kind kind = Kind::independence;
  /// Independence kind: candidates are h(u) for u ~ U(0,1)^d.
  Proposal proposal;
  /// Random-walk kind: candidate = x + step .* N(0, I).
  Eigen::VectorXd step;
  /// Total iterations, burn-in included.
  std::size_t length = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  /// Starting state; defaults to the proposal's center (independence) and is
  /// required for the random walk.
  std::optional<Eigen::VectorXd> initial;

  /// burn_in = length / 10.
  static std::size_t default_burn_in(std::size_t length) { return length / 10; }
};

struct Chain {
  Eigen::MatrixXd sample;  // (length - burn_in) x d
  double acceptance = 0.0; // accepted moves / (length - 1) over the whole run
};

/// Metropolis-Hastings with acceptance ratio
/// exp(l(x) - l(x') + log psi(x) - log psi(x')) (the psi terms cancel for the
/// random walk). Throws std::invalid_argument if the initial state has
/// infinite l or the config is inconsistent.
Chain mh_chain(const TargetDensity& target, const MHConfig& cfg);

enum class ExactModel { beta_mixture, normal2d, linreg };

ExactModel exact_model_from_string(std::string_view name);

/// N i.i.d. draws from the model's closed-form sampler (linreg needs data).
Eigen::MatrixXd exact_mc(ExactModel model, std::size_t N, std::uint64_t seed,
                         const models::LinRegData* data = nullptr);

}  // namespace qda
