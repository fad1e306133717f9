#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qda/dacore.hpp"
#include "qda/errors.hpp"
#include "qda/proposal.hpp"
#include "qda/qmc.hpp"

namespace qda {

struct StageSpec {
  std::size_t M = 0;
  Generator generator = Generator::sobol;
  /// Unset: 1 for the first Sobol stage, 0 for Halton, and the previous
  /// stage's skip + M afterwards, so stages never share points.
  std::optional<std::uint64_t> skip;
};

enum class RefitFamily { mvcauchy, mvnormal };

RefitFamily refit_family_from_string(const std::string& name);

inline constexpr double kLowAcceptance = 0.1;
inline constexpr double kRidge = 1e-8;

struct StageReport {
  std::size_t stage = 0;  // 1-based
  std::string proposal;
  std::size_t M = 0;
  Generator generator = Generator::sobol;
  std::uint64_t skip = 0;
  double acceptance_rate = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double seconds = 0.0;
  bool low_acceptance = false;
  std::string warning;
};

struct AdaptiveResult {
  DiscretePosterior posterior;
  std::vector<StageReport> reports;
};

/// A stage ended with zero acceptance. Carries the reports of the stages
/// that ran, the failing one last (its mean and covariance are empty).
class StageAbort : public NoMassError {
 public:
  StageAbort(const std::string& what, std::vector<StageReport> reports)
      : NoMassError(what), reports_(std::move(reports)) {}
  const std::vector<StageReport>& reports() const { return reports_; }

 private:
  std::vector<StageReport> reports_;
};

/// Stage 1 uses `initial`. Every later stage replaces each block whose
/// coordinates all have real-line support by `family`, centered at the
/// previous mean with the previous covariance (plus the ridge
/// 1e-8 tr(C)/k on the diagonal). Other blocks are carried over.
AdaptiveResult run_stages(const TargetDensity& target, const Proposal& initial, const std::vector<StageSpec>& schedule,
                          std::size_t n_stages, RefitFamily family = RefitFamily::mvcauchy,
                          const DiscretizeOptions& options = {});

/// The refit rule used between stages.
Proposal refit_proposal(const Proposal& previous, const std::vector<SupportKind>& support, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& covariance, RefitFamily family);

}  // namespace qda
