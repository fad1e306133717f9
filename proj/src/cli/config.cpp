#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qda/cli.hpp"

namespace qda::cli {
namespace {

using nlohmann::json;

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid config:";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void unknown_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) problems_.push_back(where + ": unknown key '" + key + "'");
    }
  }

  bool object(const json& v, const std::string& where) {
    if (v.is_object()) return true;
    problems_.push_back(where + ": expected an object");
    return false;
  }

  std::optional<double> number(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    problems_.push_back(where + ": expected a number");
    return std::nullopt;
  }

  std::optional<std::uint64_t> count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    problems_.push_back(where + ": expected a nonnegative integer");
    return std::nullopt;
  }

  std::optional<bool> boolean(const json& v, const std::string& where) {
    if (v.is_boolean()) return v.get<bool>();
    problems_.push_back(where + ": expected true or false");
    return std::nullopt;
  }

  std::optional<Eigen::VectorXd> vector(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) {
      problems_.push_back(where + ": expected a nonempty array of numbers");
      return std::nullopt;
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        problems_.push_back(where + "[" + std::to_string(i) + "]: expected a number");
        return std::nullopt;
      }
      out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
  }

  std::optional<Eigen::MatrixXd> matrix(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) {
      problems_.push_back(where + ": expected a nonempty array of rows");
      return std::nullopt;
    }
    const std::size_t n = v.size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      auto row = vector(v[i], where + "[" + std::to_string(i) + "]");
      if (!row) return std::nullopt;
      if (static_cast<std::size_t>(row->size()) != n) {
        problems_.push_back(where + ": matrix must be square");
        return std::nullopt;
      }
      out.row(static_cast<Eigen::Index>(i)) = row->transpose();
    }
    return out;
  }

  std::optional<BlockSpec> block(const json& v, const std::string& where) {
    if (!object(v, where)) return std::nullopt;
    if (!v.contains("kind") || !v["kind"].is_string()) {
      problems_.push_back(where + ": missing string 'kind'");
      return std::nullopt;
    }
    const std::string kind = v["kind"].get<std::string>();
    auto need = [&](const char* key) -> const json* {
      if (v.contains(key)) return &v[key];
      problems_.push_back(where + ": " + kind + " block needs '" + key + "'");
      return nullptr;
    };
    std::optional<BlockSpec> spec;
    if (kind == "uniform_box") {
      unknown_keys(v, where, {"kind", "lower", "upper"});
      const json* lo = need("lower");
      const json* hi = need("upper");
      if (!lo || !hi) return std::nullopt;
      auto l = vector(*lo, where + ".lower");
      auto u = vector(*hi, where + ".upper");
      if (l && u) spec = UniformBox{*l, *u};
    } else if (kind == "mvnormal") {
      unknown_keys(v, where, {"kind", "mean", "cov"});
      const json* m = need("mean");
      const json* c = need("cov");
      if (!m || !c) return std::nullopt;
      auto mv = vector(*m, where + ".mean");
      auto cv = matrix(*c, where + ".cov");
      if (mv && cv) spec = MvNormal{*mv, *cv};
    } else if (kind == "mvcauchy") {
      unknown_keys(v, where, {"kind", "location", "scale"});
      const json* m = need("location");
      const json* c = need("scale");
      if (!m || !c) return std::nullopt;
      auto mv = vector(*m, where + ".location");
      auto cv = matrix(*c, where + ".scale");
      if (mv && cv) spec = MvCauchy{*mv, *cv};
    } else if (kind == "gamma") {
      unknown_keys(v, where, {"kind", "shape", "scale"});
      const json* k = need("shape");
      const json* s = need("scale");
      if (!k || !s) return std::nullopt;
      auto kv = number(*k, where + ".shape");
      auto sv = number(*s, where + ".scale");
      if (kv && sv) spec = GammaBlock{*kv, *sv};
    } else {
      problems_.push_back(where + ": unknown block kind '" + kind +
                          "' (expected uniform_box, mvnormal, mvcauchy or gamma)");
      return std::nullopt;
    }
    if (!spec) return std::nullopt;
    try {
      ProposalBlock check(*spec);
    } catch (const std::exception& e) {
      problems_.push_back(where + ": " + e.what());
      return std::nullopt;
    }
    return spec;
  }

 private:
  std::vector<std::string>& problems_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  std::vector<std::string> problems;
  Reader rd(problems);
  RunConfig cfg;
  cfg.hash = fnv1a_hex(text);
  if (!rd.object(root, "config")) throw ConfigError(problems);
  rd.unknown_keys(root, "config",
                  {"schema_version", "target", "proposal", "stages", "refit_family", "outputs", "acceptance_warning",
                   "seed", "threads"});

  if (!root.contains("schema_version")) {
    problems.push_back("config: missing 'schema_version'");
  } else if (auto v = rd.count(root["schema_version"], "schema_version")) {
    if (*v != kSchemaVersion) {
      problems.push_back("schema_version: unsupported version " + std::to_string(*v) + " (this build reads " +
                         std::to_string(kSchemaVersion) + ")");
    }
  }

  if (!root.contains("target")) {
    problems.push_back("config: missing 'target'");
  } else if (rd.object(root["target"], "target")) {
    const json& t = root["target"];
    rd.unknown_keys(t, "target", {"name", "params"});
    if (!t.contains("name") || !t["name"].is_string()) {
      problems.push_back("target: missing string 'name'");
    } else {
      cfg.target = t["name"].get<std::string>();
    }
    if (t.contains("params")) {
      if (rd.object(t["params"], "target.params")) cfg.target_params = t["params"].dump();
    } else {
      cfg.target_params = "{}";
    }
  }

  if (root.contains("proposal")) {
    const json& p = root["proposal"];
    if (!p.is_array() || p.empty()) {
      problems.push_back("proposal: expected a nonempty array of blocks");
    } else {
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (auto b = rd.block(p[i], "proposal[" + std::to_string(i) + "]")) cfg.proposal.push_back(*b);
      }
    }
  }

  if (!root.contains("stages") || !root["stages"].is_array() || root["stages"].empty()) {
    problems.push_back("stages: expected a nonempty array");
  } else {
    const json& st = root["stages"];
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string where = "stages[" + std::to_string(i) + "]";
      if (!rd.object(st[i], where)) continue;
      rd.unknown_keys(st[i], where, {"M", "generator", "skip"});
      StageSpec spec;
      if (!st[i].contains("M")) {
        problems.push_back(where + ": missing 'M'");
      } else if (auto m = rd.count(st[i]["M"], where + ".M")) {
        if (*m == 0) problems.push_back(where + ".M: must be positive");
        spec.M = *m;
      }
      if (st[i].contains("generator")) {
        try {
          spec.generator = generator_from_string(st[i]["generator"].get<std::string>());
          if (spec.generator == Generator::user) problems.push_back(where + ".generator: user points are not supported");
        } catch (const std::exception&) {
          problems.push_back(where + ".generator: unknown generator '" +
                             (st[i]["generator"].is_string() ? st[i]["generator"].get<std::string>()
                                                             : st[i]["generator"].dump()) +
                             "' (expected sobol, halton or midpoint1d)");
        }
      }
      if (st[i].contains("skip")) spec.skip = rd.count(st[i]["skip"], where + ".skip");
      cfg.stages.push_back(spec);
    }
  }

  if (root.contains("refit_family")) {
    try {
      cfg.family = refit_family_from_string(root["refit_family"].get<std::string>());
    } catch (const std::exception&) {
      problems.push_back("refit_family: expected mvcauchy or mvnormal");
    }
  }

  std::vector<std::pair<std::size_t, std::uint64_t>> quantile_coords;
  if (root.contains("outputs") && rd.object(root["outputs"], "outputs")) {
    const json& o = root["outputs"];
    rd.unknown_keys(o, "outputs", {"mean", "covariance", "quantiles", "kd", "rp", "draws"});
    if (o.contains("mean")) cfg.mean = rd.boolean(o["mean"], "outputs.mean").value_or(true);
    if (o.contains("covariance")) cfg.covariance = rd.boolean(o["covariance"], "outputs.covariance").value_or(false);
    if (o.contains("kd")) cfg.kd = rd.boolean(o["kd"], "outputs.kd").value_or(false);
    if (o.contains("quantiles")) {
      const json& q = o["quantiles"];
      if (!q.is_array()) {
        problems.push_back("outputs.quantiles: expected an array");
      } else {
        for (std::size_t i = 0; i < q.size(); ++i) {
          const std::string where = "outputs.quantiles[" + std::to_string(i) + "]";
          if (!rd.object(q[i], where)) continue;
          rd.unknown_keys(q[i], where, {"coord", "alpha"});
          if (!q[i].contains("coord") || !q[i].contains("alpha")) {
            problems.push_back(where + ": needs coord and alpha");
            continue;
          }
          const std::uint64_t c = rd.count(q[i]["coord"], where + ".coord").value_or(0);
          const double a = rd.number(q[i]["alpha"], where + ".alpha").value_or(-1.0);
          bool ok = true;
          if (c == 0) {
            problems.push_back(where + ".coord: coordinates are 1-based positive integers");
            ok = false;
          } else {
            quantile_coords.emplace_back(i, c);
          }
          if (!(a > 0.0 && a < 1.0)) {
            problems.push_back(where + ".alpha: must lie in (0,1)");
            ok = false;
          }
          if (ok) cfg.quantiles.push_back({c, a});
        }
      }
    }
    if (o.contains("rp") && rd.object(o["rp"], "outputs.rp")) {
      rd.unknown_keys(o["rp"], "outputs.rp", {"N", "jitter_seed"});
      if (!o["rp"].contains("N")) {
        problems.push_back("outputs.rp: missing 'N'");
      } else if (auto n = rd.count(o["rp"]["N"], "outputs.rp.N")) {
        if (*n == 0) problems.push_back("outputs.rp.N: must be positive");
        cfg.rp_n = *n;
      }
      if (o["rp"].contains("jitter_seed")) cfg.rp_jitter_seed = rd.count(o["rp"]["jitter_seed"], "outputs.rp.jitter_seed");
    }
    if (o.contains("draws") && rd.object(o["draws"], "outputs.draws")) {
      rd.unknown_keys(o["draws"], "outputs.draws", {"N", "seed"});
      if (!o["draws"].contains("N")) {
        problems.push_back("outputs.draws: missing 'N'");
      } else if (auto n = rd.count(o["draws"]["N"], "outputs.draws.N")) {
        if (*n == 0) problems.push_back("outputs.draws.N: must be positive");
        cfg.draws_n = *n;
      }
      if (o["draws"].contains("seed")) cfg.draws_seed = rd.count(o["draws"]["seed"], "outputs.draws.seed");
    }
  }

  if (root.contains("acceptance_warning")) {
    if (auto w = rd.number(root["acceptance_warning"], "acceptance_warning")) {
      if (!(*w >= 0.0 && *w <= 1.0)) problems.push_back("acceptance_warning: must lie in [0,1]");
      cfg.warn_below = *w;
    }
  }
  if (root.contains("seed")) cfg.seed = rd.count(root["seed"], "seed").value_or(0);
  if (root.contains("threads")) cfg.threads = rd.count(root["threads"], "threads").value_or(0);

  // Cross-checks against the target.
  if (!cfg.target.empty()) {
    if (auto model = make_model(cfg.target, cfg.target_params, problems)) {
      const std::size_t d = model->target.dim;
      if (!cfg.proposal.empty()) {
        std::size_t pd = 0;
        for (const auto& b : cfg.proposal) pd += ProposalBlock(b).dim();
        if (pd != d) {
          problems.push_back("proposal: blocks cover " + std::to_string(pd) + " coordinates but target '" +
                             cfg.target + "' has dimension " + std::to_string(d));
        }
      } else if (!model->default_proposal) {
        problems.push_back("proposal: target '" + cfg.target + "' has no default proposal; give one");
      }
      for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
        const auto& s = cfg.stages[i];
        const std::string where = "stages[" + std::to_string(i) + "]";
        if (s.generator == Generator::midpoint1d && d != 1) problems.push_back(where + ": midpoint1d needs a 1D target");
        if (s.generator == Generator::sobol && d > kSobolMaxDim) problems.push_back(where + ": sobol supports d <= 100");
        if (s.generator == Generator::halton && d > kHaltonMaxDim) problems.push_back(where + ": halton supports d <= 50");
        if (i > 0 && s.generator == Generator::midpoint1d) {
          problems.push_back(where + ": later stages need sobol or halton (midpoint grids cannot be refreshed)");
        }
      }
      for (const auto& [i, c] : quantile_coords) {
        if (c > d) {
          problems.push_back("outputs.quantiles[" + std::to_string(i) + "].coord: exceeds target dimension " +
                             std::to_string(d));
        }
      }
      if (cfg.kd && !model->cdf) problems.push_back("outputs.kd: no reference CDF for target '" + cfg.target + "'");
    }
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

}  // namespace qda::cli
