#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qda/adaptive.hpp"
#include "qda/dacore.hpp"
#include "qda/metrics.hpp"
#include "qda/proposal.hpp"

namespace qda::cli {

inline constexpr int kSchemaVersion = 1;

/// Every schema violation found in a config, reported together.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct QuantileRequest {
  std::size_t coord = 1;  // 1-based
  double alpha = 0.5;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string target;
  std::string target_params;  // JSON text of the "params" object
  /// Empty: the target's default proposal.
  std::vector<BlockSpec> proposal;
  std::vector<StageSpec> stages;
  RefitFamily family = RefitFamily::mvcauchy;

  bool mean = true;
  bool covariance = false;
  std::vector<QuantileRequest> quantiles;
  bool kd = false;
  std::optional<std::size_t> rp_n;
  std::optional<std::uint64_t> rp_jitter_seed;
  std::optional<std::size_t> draws_n;
  std::optional<std::uint64_t> draws_seed;

  double warn_below = kLowAcceptance;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  /// 16 hex digits of FNV-1a over the config text.
  std::string hash;
};

/// Parses and validates a config (JSON). Throws ConfigError with all problems.
RunConfig parse_config(const std::string& text);

std::string fnv1a_hex(const std::string& text);

/// A target together with what the runner knows about it.
struct Model {
  TargetDensity target;
  std::optional<Proposal> default_proposal;
  std::optional<CdfOracle> cdf;
  std::optional<Eigen::VectorXd> exact_mean;
  /// Owns whatever the target's callback refers to.
  std::shared_ptr<const void> state;
};

/// Known names: beta_mixture, beta, normal2d, banana, linreg, blasso, gp, subprocess.
/// Appends problems with the parameters to `problems` and returns nullopt on failure.
std::optional<Model> make_model(const std::string& name, const std::string& params_json,
                                std::vector<std::string>& problems);

/// A target evaluated by a child process: each request is one line with the
/// coordinates (space separated, 17 significant digits) and each reply is one
/// line holding l(x) ("inf" for zero density). Calls are serialized.
TargetDensity subprocess_target(const std::string& command, std::size_t dim, std::vector<SupportKind> support);

struct RunOutputs {
  std::string results_csv;
  std::string posterior_csv;
  std::optional<std::string> rp_csv;
  std::optional<std::string> draws_csv;
  std::string log_json;
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> rp_n;
  std::optional<std::size_t> draws_n;
};

/// Runs the pipeline and renders every artifact in memory.
RunOutputs run_pipeline(const RunConfig& cfg, const RunOverrides& overrides = {});

/// Writes the named files into out_dir through a staging directory, so either
/// all of them appear or none do.
void write_atomically(const std::string& out_dir, const std::vector<std::pair<std::string, std::string>>& files);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BenchmarkResult {
  std::string id;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<Check> checks;
};

struct BenchmarkOptions {
  std::uint64_t seed = 20240601;
  std::optional<std::size_t> repetitions;
  std::size_t threads = 0;
};

/// t1, t2, t3-small, t4-small.
BenchmarkResult run_benchmark(const std::string& id, const BenchmarkOptions& options);
std::string render_csv(const BenchmarkResult& result, const BenchmarkOptions& options);

}  // namespace qda::cli
