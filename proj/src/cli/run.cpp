#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "qda/cli.hpp"
#include "qda/random.hpp"
#include "qda/sampling.hpp"

namespace qda::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunOutputs run_pipeline(const RunConfig& cfg, const RunOverrides& overrides) {
  const auto wall0 = std::chrono::steady_clock::now();
  std::vector<std::string> problems;
  auto model = make_model(cfg.target, cfg.target_params, problems);
  if (!model) throw ConfigError(std::move(problems));

  const Proposal proposal = cfg.proposal.empty() ? *model->default_proposal : Proposal(cfg.proposal);
  const std::uint64_t seed = overrides.seed.value_or(cfg.seed);
  std::size_t threads = overrides.threads.value_or(cfg.threads);
  if (threads == 0) threads = default_threads();
  const std::optional<std::size_t> rp_n = overrides.rp_n ? overrides.rp_n : cfg.rp_n;
  const std::optional<std::size_t> draws_n = overrides.draws_n ? overrides.draws_n : cfg.draws_n;
  const std::uint64_t draws_seed = cfg.draws_seed.value_or(splitmix64(seed));

  const AdaptiveResult result =
      run_stages(model->target, proposal, cfg.stages, cfg.stages.size(), cfg.family, DiscretizeOptions{threads});
  const DiscretePosterior& dp = result.posterior;

  std::ostringstream head;
  head << "# qda " << QDA_VERSION << " config_hash=" << cfg.hash << " seed=" << seed;
  if (draws_n) head << " draws_seed=" << draws_seed;
  if (cfg.rp_jitter_seed) head << " rp_jitter_seed=" << *cfg.rp_jitter_seed;
  head << '\n';

  RunOutputs out;
  std::ostringstream res;
  res << head.str() << "quantity,i,j,alpha,value\n";
  res << "M,,,," << dp.size() << '\n';
  res << "acceptance_rate,,,," << num(dp.acceptance_rate) << '\n';
  res << "shift,,,," << num(dp.shift) << '\n';
  const Eigen::VectorXd mu = mean(dp);
  if (cfg.mean) {
    for (Eigen::Index j = 0; j < mu.size(); ++j) res << "mean," << j + 1 << ",,," << num(mu(j)) << '\n';
    if (model->exact_mean) res << "mean_squared_error,,,," << num((mu - *model->exact_mean).squaredNorm()) << '\n';
  }
  if (cfg.covariance) {
    const Eigen::MatrixXd c = covariance(dp);
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      for (Eigen::Index k = 0; k < c.cols(); ++k) res << "covariance," << r + 1 << ',' << k + 1 << ",," << num(c(r, k)) << '\n';
    }
  }
  for (const auto& q : cfg.quantiles) {
    res << "quantile," << q.coord << ",," << num(q.alpha) << ',' << num(marginal_quantile(dp, q.coord - 1, q.alpha))
        << '\n';
  }
  if (cfg.kd) {
    const KolmogorovResult kd = kolmogorov_discrete(WeightedPoints::from(dp), *model->cdf);
    res << (kd.exact ? "kd" : "kd_lower_bound") << ",,,," << num(kd.value) << '\n';
  }

  std::optional<RepresentationPointSet> rp;
  if (rp_n) {
    rp = representation_points(dp, *rp_n, cfg.rp_jitter_seed);
    if (cfg.kd) {
      const KolmogorovResult kd = kolmogorov_discrete(WeightedPoints::from(*rp), *model->cdf);
      res << (kd.exact ? "rp_kd" : "rp_kd_lower_bound") << ",,,," << num(kd.value) << '\n';
    }
    if (cfg.mean) {
      const Eigen::VectorXd rm = rp->points.colwise().mean().transpose();
      for (Eigen::Index j = 0; j < rm.size(); ++j) res << "rp_mean," << j + 1 << ",,," << num(rm(j)) << '\n';
    }
    std::ostringstream s;
    s << head.str();
    write_csv(s, *rp);
    out.rp_csv = s.str();
  }
  if (draws_n) {
    const Draws dr = draw(dp, *draws_n, draws_seed);
    std::ostringstream s;
    s << head.str();
    write_csv(s, dr);
    out.draws_csv = s.str();
  }
  out.results_csv = res.str();

  std::ostringstream post;
  post << head.str();
  write_csv(post, dp);
  out.posterior_csv = post.str();

  json log;
  log["engine"] = "qda";
  log["version"] = QDA_VERSION;
  log["config_hash"] = cfg.hash;
  log["target"] = cfg.target;
  log["seed"] = seed;
  if (draws_n) log["draws_seed"] = draws_seed;
  log["threads"] = threads;
  log["started_utc"] = utc_now();
  json stages = json::array();
  json warnings = json::array();
  for (const auto& r : result.reports) {
    json s;
    s["stage"] = r.stage;
    s["proposal"] = r.proposal;
    s["M"] = r.M;
    s["generator"] = std::string(to_string(r.generator));
    s["skip"] = r.skip;
    s["acceptance_rate"] = r.acceptance_rate;
    s["mean"] = vector_json(r.mean);
    s["covariance"] = matrix_json(r.covariance);
    s["seconds"] = r.seconds;
    const bool low = r.acceptance_rate < cfg.warn_below;
    s["low_acceptance"] = low;
    if (low) {
      warnings.push_back("stage " + std::to_string(r.stage) + ": acceptance rate " + num(r.acceptance_rate) +
                         " is below " + num(cfg.warn_below) + "; consider revising the proposal");
    }
    stages.push_back(s);
  }
  log["stages"] = stages;
  log["warnings"] = warnings;
  log["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  out.log_json = log.dump(2) + "\n";
  return out;
}

void write_atomically(const std::string& out_dir, const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const fs::path staging = dir / (".staging-" + std::to_string(getpid()));
  fs::remove_all(staging);
  fs::create_directory(staging);
  try {
    for (const auto& [name, content] : files) {
      std::ofstream f(staging / name, std::ios::binary);
      f << content;
      if (!f.flush()) throw std::runtime_error("could not write " + (staging / name).string());
    }
    for (const auto& [name, content] : files) fs::rename(staging / name, dir / name);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(staging);
}

}  // namespace qda::cli
