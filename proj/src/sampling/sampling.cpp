#include "qda/sampling.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qda/random.hpp"

namespace qda {
namespace {

std::vector<double> cumulative_masses(const DiscretePosterior& dp) {
  std::vector<double> q(dp.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    acc += dp.masses(static_cast<Eigen::Index>(i));
    q[i] = acc;
  }
  return q;
}

std::size_t last_positive_atom(const DiscretePosterior& dp) {
  for (Eigen::Index i = dp.masses.size() - 1; i >= 0; --i) {
    if (dp.masses(i) > 0.0) return static_cast<std::size_t>(i);
  }
  throw std::invalid_argument("discrete posterior has no positive mass");
}

void check_posterior(const DiscretePosterior& dp) {
  if (dp.size() == 0 || dp.masses.size() != dp.support.rows()) {
    throw std::invalid_argument("invalid discrete posterior");
  }
}

double clip_to_support(double v, const SupportKind& s) {
  switch (s.type) {
    case SupportKind::Type::real: return v;
    case SupportKind::Type::positive:
      return std::max(v, std::numeric_limits<double>::min());
    case SupportKind::Type::interval: return std::clamp(v, s.lower, s.upper);
  }
  return v;
}

}  // namespace

Draws draw(const DiscretePosterior& dp, std::size_t N, std::uint64_t seed) {
  check_posterior(dp);
  if (N == 0) throw std::invalid_argument("draw: N must be positive");
  const std::vector<double> q = cumulative_masses(dp);
  const double total = q.back();
  const std::size_t fallback = last_positive_atom(dp);
  Rng rng(seed);
  Draws out;
  out.points.resize(static_cast<Eigen::Index>(N), dp.support.cols());
  out.atoms.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(q.begin(), q.end(), u);
    std::size_t atom = it == q.end() ? fallback : static_cast<std::size_t>(it - q.begin());
    out.atoms[n] = atom;
    out.points.row(static_cast<Eigen::Index>(n)) = dp.support.row(static_cast<Eigen::Index>(atom));
  }
  return out;
}

RepresentationPointSet representation_points(const DiscretePosterior& dp, std::size_t N,
                                             std::optional<std::uint64_t> jitter_seed) {
  check_posterior(dp);
  if (N == 0) throw std::invalid_argument("representation_points: N must be positive");
  const std::size_t M = dp.size();
  const std::size_t fallback = last_positive_atom(dp);

  RepresentationPointSet rp;
  rp.N = N;
  rp.counts.assign(M, 0);
  rp.atoms.reserve(N);

  // Single forward scan: the interval index never moves backward.
  std::size_t i = 0;
  double q_hi = dp.masses(0);
  const double twoN = 2.0 * static_cast<double>(N);
  for (std::size_t j = 1; j <= N; ++j) {
    const double u = static_cast<double>(2 * j - 1) / twoN;
    while (u >= q_hi && i + 1 < M) {
      ++i;
      q_hi += dp.masses(static_cast<Eigen::Index>(i));
    }
    const std::size_t atom = u < q_hi ? i : fallback;
    rp.atoms.push_back(atom);
    ++rp.counts[atom];
  }

  rp.points.resize(static_cast<Eigen::Index>(N), dp.support.cols());
  for (std::size_t j = 0; j < N; ++j) {
    rp.points.row(static_cast<Eigen::Index>(j)) = dp.support.row(static_cast<Eigen::Index>(rp.atoms[j]));
  }
  if (jitter_seed) {
    rp.jitter_scale = 1.0 / twoN;
    Rng rng(*jitter_seed);
    for (Eigen::Index r = 0; r < rp.points.rows(); ++r) {
      for (Eigen::Index c = 0; c < rp.points.cols(); ++c) {
        const double noise = (2.0 * rng.uniform() - 1.0) * rp.jitter_scale;
        const auto col = static_cast<std::size_t>(c);
        const SupportKind kind = col < dp.support_kinds.size() ? dp.support_kinds[col] : SupportKind::real();
        rp.points(r, c) = clip_to_support(rp.points(r, c) + noise, kind);
      }
    }
  }
  return rp;
}

std::vector<std::pair<std::size_t, std::size_t>> RepresentationPointSet::multiplicities() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i]) out.emplace_back(i, counts[i]);
  }
  return out;
}

void write_csv(std::ostream& out, const RepresentationPointSet& rp) {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < rp.points.cols(); ++j) out << "y_" << j + 1 << ',';
  out << "atom,multiplicity\n";
  if (rp.jitter_scale > 0.0) {
    for (Eigen::Index r = 0; r < rp.points.rows(); ++r) {
      for (Eigen::Index c = 0; c < rp.points.cols(); ++c) out << rp.points(r, c) << ',';
      out << rp.atoms[static_cast<std::size_t>(r)] << ",1\n";
    }
  } else {
    Eigen::Index row = 0;
    for (const auto& [atom, count] : rp.multiplicities()) {
      while (rp.atoms[static_cast<std::size_t>(row)] != atom) ++row;
      for (Eigen::Index c = 0; c < rp.points.cols(); ++c) out << rp.points(row, c) << ',';
      out << atom << ',' << count << '\n';
    }
  }
  out.precision(old_precision);
}

void write_csv(std::ostream& out, const Draws& draws) {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < draws.points.cols(); ++j) out << "y_" << j + 1 << ',';
  out << "atom\n";
  for (Eigen::Index r = 0; r < draws.points.rows(); ++r) {
    for (Eigen::Index c = 0; c < draws.points.cols(); ++c) out << draws.points(r, c) << ',';
    out << draws.atoms[static_cast<std::size_t>(r)] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qda
