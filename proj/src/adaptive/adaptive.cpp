#include "qda/adaptive.hpp"

#include <chrono>
#include <sstream>
#include <utility>

namespace qda {
namespace {

bool all_real(const std::vector<SupportKind>& support, std::size_t offset, std::size_t dim) {
  for (std::size_t j = offset; j < offset + dim; ++j) {
    if (j < support.size() && support[j].type != SupportKind::Type::real) return false;
  }
  return true;
}

}  // namespace

RefitFamily refit_family_from_string(const std::string& name) {
  if (name == "mvcauchy") return RefitFamily::mvcauchy;
  if (name == "mvnormal") return RefitFamily::mvnormal;
  throw std::invalid_argument("unknown refit family '" + name + "' (expected mvcauchy or mvnormal)");
}

Proposal refit_proposal(const Proposal& previous, const std::vector<SupportKind>& support, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& covariance, RefitFamily family) {
  std::vector<ProposalBlock> blocks;
  const auto& old = previous.blocks();
  for (std::size_t b = 0; b < old.size(); ++b) {
    const std::size_t off = previous.offsets()[b];
    const std::size_t k = old[b].dim();
    if (!all_real(support, off, k)) {
      blocks.push_back(old[b]);
      continue;
    }
    const auto o = static_cast<Eigen::Index>(off);
    const auto ki = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd m = mean.segment(o, ki);
    Eigen::MatrixXd c = covariance.block(o, o, ki, ki);
    c = 0.5 * (c + c.transpose()).eval();
    const double ridge = kRidge * c.trace() / static_cast<double>(k);
    c.diagonal().array() += ridge;
    if (family == RefitFamily::mvcauchy) {
      blocks.emplace_back(MvCauchy{m, c});
    } else {
      blocks.emplace_back(MvNormal{m, c});
    }
  }
  return Proposal(std::move(blocks));
}

AdaptiveResult run_stages(const TargetDensity& target, const Proposal& initial, const std::vector<StageSpec>& schedule,
                          std::size_t n_stages, RefitFamily family, const DiscretizeOptions& options) {
  if (n_stages == 0) throw std::invalid_argument("run_stages: n_stages must be at least 1");
  if (schedule.size() < n_stages) throw std::invalid_argument("run_stages: schedule is shorter than n_stages");

  AdaptiveResult result;
  Proposal proposal = initial;
  std::uint64_t next_skip = 0;
  for (std::size_t s = 0; s < n_stages; ++s) {
    const StageSpec& spec = schedule[s];
    std::uint64_t skip = 0;
    if (spec.skip) {
      skip = *spec.skip;
    } else if (s == 0) {
      skip = spec.generator == Generator::sobol ? 1 : 0;
    } else if (spec.generator != Generator::midpoint1d) {
      skip = next_skip;
    }
    if (s > 0) {
      proposal = refit_proposal(proposal, target.support, result.reports.back().mean,
                                result.reports.back().covariance, family);
    }

    StageReport report;
    report.stage = s + 1;
    report.proposal = proposal.describe();
    report.M = spec.M;
    report.generator = spec.generator;
    report.skip = skip;

    const auto t0 = std::chrono::steady_clock::now();
    const SupportPointSet pts = generate_points(spec.generator, spec.M, target.dim, skip);
    DiscretePosterior dp;
    try {
      dp = discretize(target, proposal, pts, options);
    } catch (const NoMassError& e) {
      report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      report.warning = "zero acceptance; revise the proposal";
      result.reports.push_back(std::move(report));
      std::ostringstream msg;
      msg << "stage " << s + 1 << ": " << e.what();
      throw StageAbort(msg.str(), std::move(result.reports));
    }
    report.acceptance_rate = dp.acceptance_rate;
    report.mean = mean(dp);
    report.covariance = covariance(dp);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dp.acceptance_rate < kLowAcceptance) {
      report.low_acceptance = true;
      std::ostringstream msg;
      msg << "acceptance rate " << dp.acceptance_rate << " is below " << kLowAcceptance;
      report.warning = msg.str();
    }
    result.reports.push_back(std::move(report));
    next_skip = skip + spec.M;
    result.posterior = std::move(dp);
  }
  return result;
}

}  // namespace qda
