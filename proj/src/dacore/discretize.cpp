#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qda/dacore.hpp"
#include "qda/errors.hpp"
#include "qda/kernels.hpp"

namespace qda {
namespace {

struct ChunkFailure {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
};

std::string format_point(std::span<const double> y) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t j = 0; j < y.size(); ++j) os << (j ? ", " : "") << y[j];
  os << ')';
  return os.str();
}

}  // namespace

std::size_t default_threads() {
  if (const char* env = std::getenv("QDA_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

DiscretePosterior discretize(const TargetDensity& target, const Proposal& proposal,
                             const SupportPointSet& pts, const DiscretizeOptions& options) {
  const std::size_t M = pts.size();
  const std::size_t d = pts.dim();
  if (M == 0) throw std::invalid_argument("discretize: empty support point set");
  if (proposal.dim() != d || target.dim != d) {
    throw std::invalid_argument("discretize: dimension mismatch (target " +
                                std::to_string(target.dim) + ", proposal " +
                                std::to_string(proposal.dim()) + ", points " + std::to_string(d) + ")");
  }
  if (!target.neg_log_density) throw std::invalid_argument("discretize: target has no density");

  DiscretePosterior dp;
  dp.support.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  dp.log_weights.resize(static_cast<Eigen::Index>(M));
  dp.support_kinds = target.support;
  dp.source = {pts.generator, pts.skip, proposal.describe(), target.name};

  std::size_t threads = options.threads ? options.threads : default_threads();
  threads = std::max<std::size_t>(1, std::min(threads, M));

  // Parallel map: each worker owns a contiguous block of atoms and writes only
  // its own rows. The first failing atom per block is remembered.
  std::vector<ChunkFailure> failures(threads);
  auto work = [&](std::size_t worker) {
    const std::size_t begin = M * worker / threads;
    const std::size_t end = M * (worker + 1) / threads;
    std::vector<double> y(d);
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const auto row = static_cast<Eigen::Index>(i);
        const double log_psi =
            proposal.map_point(std::span<const double>(pts.points.row(row).data(), d), y);
        const double ell = target(y);
        if (std::isnan(ell) || ell == -std::numeric_limits<double>::infinity()) {
          throw TargetEvaluationError("target '" + target.name + "' returned " +
                                      (std::isnan(ell) ? "NaN" : "-inf") + " at support point " +
                                      std::to_string(i) + " " + format_point(y));
        }
        for (std::size_t j = 0; j < d; ++j) dp.support(row, static_cast<Eigen::Index>(j)) = y[j];
        dp.log_weights(row) = ell == std::numeric_limits<double>::infinity()
                                  ? -std::numeric_limits<double>::infinity()
                                  : -ell - log_psi;
      } catch (...) {
        failures[worker] = {i, std::current_exception()};
        return;
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f.error) std::rethrow_exception(f.error);  // lowest block first = lowest index
  }

  const auto& k = kernels::active();
  const double* g = dp.log_weights.data();
  dp.shift = k.max(g, M);
  if (dp.shift == -std::numeric_limits<double>::infinity()) {
    throw NoMassError("discretize: no support point received positive mass (acceptance rate 0) for target '" +
                      target.name + "' under proposal " + dp.source.proposal +
                      "; revise the proposal (rates below 0.1 already signal a poor one)");
  }
  if (!std::isfinite(dp.shift)) {
    throw TargetEvaluationError("discretize: log-weights overflowed for target '" + target.name + "'");
  }

  dp.masses.resize(static_cast<Eigen::Index>(M));
  double* p = dp.masses.data();
  k.exp_shift(g, dp.shift, p, M);
  const double total = k.sum(p, M);
  k.divide(p, total, p, M);
  dp.acceptance_rate = acceptance_rate(dp);
  return dp;
}

double acceptance_rate(const DiscretePosterior& dp) {
  if (dp.size() == 0) return 0.0;
  std::size_t positive = 0;
  for (Eigen::Index i = 0; i < dp.masses.size(); ++i) positive += dp.masses(i) > 0.0;
  return static_cast<double>(positive) / static_cast<double>(dp.size());
}

}  // namespace qda
