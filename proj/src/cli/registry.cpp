#include <set>

#include <json.hpp>

#include "qda/cli.hpp"
#include "qda/models.hpp"

namespace qda::cli {
namespace {

using nlohmann::json;

struct Params {
  const json& obj;
  const std::string& model;
  std::vector<std::string>& problems;

  void allow(std::set<std::string> keys) {
    for (const auto& [k, v] : obj.items()) {
      if (!keys.count(k)) problems.push_back("target.params: unknown key '" + k + "' for " + model);
    }
  }

  double number(const char* key, double fallback, bool positive = false) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
      problems.push_back(std::string("target.params.") + key + ": expected a number");
      return fallback;
    }
    const double v = obj[key].get<double>();
    if (positive && !(v > 0.0)) problems.push_back(std::string("target.params.") + key + ": must be positive");
    return v;
  }

  std::uint64_t count(const char* key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer() || obj[key].get<std::int64_t>() < 0) {
      problems.push_back(std::string("target.params.") + key + ": expected a nonnegative integer");
      return fallback;
    }
    return obj[key].get<std::uint64_t>();
  }
};

Proposal unit_cauchy2() { return cauchy_proposal(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()); }

}  // namespace

std::optional<Model> make_model(const std::string& name, const std::string& params_json,
                                std::vector<std::string>& problems) {
  json obj = params_json.empty() ? json::object() : json::parse(params_json);
  const std::size_t before = problems.size();
  Params p{obj, name, problems};
  Model m;

  if (name == "beta_mixture") {
    p.allow({});
    m.target = models::beta_mixture_target();
    m.default_proposal = unit_cube_proposal(1);
    m.cdf = CdfOracle{[](std::span<const double> x) { return models::beta_mixture_cdf(x[0]); }, 1};
    m.exact_mean = Eigen::VectorXd::Constant(1, models::kBetaMixtureMean);
  } else if (name == "beta") {
    p.allow({"a", "b"});
    const double a = p.number("a", 2.0, true);
    const double b = p.number("b", 3.0, true);
    if (problems.size() != before) return std::nullopt;
    m.target = models::beta_target(a, b);
    m.default_proposal = unit_cube_proposal(1);
    m.cdf = CdfOracle{[a, b](std::span<const double> x) { return models::beta_cdf(x[0], a, b); }, 1};
    m.exact_mean = Eigen::VectorXd::Constant(1, a / (a + b));
  } else if (name == "normal2d") {
    p.allow({});
    m.target = models::normal2d_target();
    m.default_proposal = unit_cauchy2();
    m.exact_mean = models::normal2d_mean();
  } else if (name == "banana") {
    p.allow({});
    m.target = models::banana_target();
    m.default_proposal = unit_cauchy2();
    m.exact_mean = Eigen::Vector2d::Zero();
  } else if (name == "linreg" || name == "blasso") {
    p.allow({"n", "d", "seed", "sigma2"});
    const auto d = p.count("d", 5);
    const auto n = p.count("n", d + 100);
    const auto seed = p.count("seed", 0);
    const double sigma2 = p.number("sigma2", 1.0, true);
    if (d < 3) problems.push_back("target.params.d: synthetic data needs d >= 3");
    if (n <= d + 5) problems.push_back("target.params.n: need n > d + 5");
    if (problems.size() != before) return std::nullopt;
    auto data = std::make_shared<const models::LinRegData>(models::LinRegData::synthetic(n, d, seed, sigma2));
    if (name == "linreg") {
      m.target = data->target();
      m.default_proposal = data->proposal();
      Eigen::VectorXd mean(static_cast<Eigen::Index>(d + 2));
      mean << data->gamma_hat, data->sigma2_mean();
      m.exact_mean = mean;
    } else {
      m.target = models::blasso_target(*data);
      m.default_proposal = models::blasso_proposal(*data);
    }
    m.state = data;
  } else if (name == "gp") {
    p.allow({"n", "d", "m", "seed", "feature_seed", "noise_sd"});
    const auto n = p.count("n", 100);
    const auto d = p.count("d", 2);
    const auto mf = p.count("m", 20);
    const auto seed = p.count("seed", 0);
    const auto fseed = p.count("feature_seed", 1);
    const double noise = p.number("noise_sd", 0.1, true);
    if (n == 0 || d == 0 || mf == 0) problems.push_back("target.params: n, d and m must be positive");
    if (n > 500 || mf > 150) problems.push_back("target.params: desk scale is n <= 500 and m <= 150");
    if (problems.size() != before) return std::nullopt;
    auto data = models::gp_synthetic(n, d, seed, noise);
    auto cfg = std::make_shared<const models::GPConfig>(
        models::GPConfig::make(std::move(data.X), std::move(data.y), mf, fseed));
    m.target = models::gp_target(*cfg);
    m.default_proposal = models::gp_default_proposal(*cfg);
    m.state = cfg;
  } else if (name == "subprocess") {
    p.allow({"command", "dim", "support"});
    std::string command;
    if (!obj.contains("command") || !obj["command"].is_string()) {
      problems.push_back("target.params.command: expected a string");
    } else {
      command = obj["command"].get<std::string>();
    }
    const auto dim = p.count("dim", 0);
    if (dim == 0) problems.push_back("target.params.dim: must be a positive integer");
    std::vector<SupportKind> support(dim, SupportKind::real());
    if (obj.contains("support")) {
      const json& s = obj["support"];
      if (!s.is_array() || s.size() != dim) {
        problems.push_back("target.params.support: expected one entry per coordinate");
      } else {
        for (std::size_t j = 0; j < dim; ++j) {
          if (s[j] == "real") {
            support[j] = SupportKind::real();
          } else if (s[j] == "positive") {
            support[j] = SupportKind::positive();
          } else if (s[j].is_array() && s[j].size() == 2 && s[j][0].is_number() && s[j][1].is_number() &&
                     s[j][0].get<double>() < s[j][1].get<double>()) {
            support[j] = SupportKind::interval(s[j][0].get<double>(), s[j][1].get<double>());
          } else {
            problems.push_back("target.params.support[" + std::to_string(j) +
                               "]: expected \"real\", \"positive\" or [lower, upper]");
          }
        }
      }
    }
    if (problems.size() != before) return std::nullopt;
    m.target = subprocess_target(command, dim, std::move(support));
  } else {
    problems.push_back("target.name: unknown target '" + name +
                       "' (expected beta_mixture, beta, normal2d, banana, linreg, blasso, gp or subprocess)");
    return std::nullopt;
  }
  if (problems.size() != before) return std::nullopt;
  return m;
}

}  // namespace qda::cli
