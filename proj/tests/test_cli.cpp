#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "qda/cli.hpp"

using namespace qda;
using namespace qda::cli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "target": {"name": "beta_mixture"},
  "proposal": [{"kind": "uniform_box", "lower": [0], "upper": [1]}],
  "stages": [{"M": 10, "generator": "midpoint1d"}],
  "outputs": {"mean": true, "kd": true, "rp": {"N": 30}}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qda_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

int run_cli(const std::string& args) {
  const int status = std::system((std::string(QDA_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string results_value(const std::string& csv, const std::string& quantity) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(quantity + ",", 0) == 0) return line.substr(line.rfind(',') + 1);
  }
  return "";
}

}  // namespace

TEST_CASE("all config problems are reported together") {
  const char* bad = R"({
    "schema_version": 2,
    "target": {"name": "normal2d", "colour": 1},
    "stages": [{"M": 0, "generator": "sobel"}],
    "outputs": {"quantiles": [{"coord": 3, "alpha": 1.5}]},
    "extra": true
  })";
  try {
    parse_config(bad);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() >= 5);
    const std::string all = e.what();
    for (const char* needle : {"schema_version", "colour", "M", "sobel", "alpha", "extra"}) {
      CHECK_MESSAGE(all.find(needle) != std::string::npos, std::string(needle));
    }
  }
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("cross checks") {
  auto problems_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.problems();
    }
    return std::vector<std::string>{};
  };
  // proposal dimension
  CHECK_FALSE(problems_of(R"({"schema_version":1,"target":{"name":"normal2d"},
      "proposal":[{"kind":"gamma","shape":1,"scale":1}],"stages":[{"M":10}]})").empty());
  // midpoint grid only in one dimension
  CHECK_FALSE(problems_of(R"({"schema_version":1,"target":{"name":"normal2d"},
      "stages":[{"M":10,"generator":"midpoint1d"}]})").empty());
  // kd needs a cdf oracle
  CHECK_FALSE(problems_of(R"({"schema_version":1,"target":{"name":"banana"},
      "stages":[{"M":10}],"outputs":{"kd":true}})").empty());
  CHECK(problems_of(kMinimal).empty());
  CHECK(parse_config(kMinimal).hash == fnv1a_hex(kMinimal));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("the minimal beta mixture run reproduces the reference KD") {
  const RunOutputs out = run_pipeline(parse_config(kMinimal));
  const double kd = std::stod(results_value(out.results_csv, "kd"));
  CHECK(kd == doctest::Approx(0.0872).epsilon(0.01));
  const double se = std::stod(results_value(out.results_csv, "mean_squared_error"));
  CHECK(se == doctest::Approx(2.1613e-5).epsilon(0.01));
  CHECK(out.results_csv.rfind("# qda ", 0) == 0);
  CHECK(out.results_csv.find("config_hash=" + fnv1a_hex(kMinimal)) != std::string::npos);
  CHECK(out.rp_csv.has_value());
  const auto log = nlohmann::json::parse(out.log_json);
  CHECK(log["stages"].size() == 1);
}

TEST_CASE("runs are idempotent and independent of the thread count") {
  const char* cfg = R"({
    "schema_version": 1,
    "target": {"name": "normal2d"},
    "stages": [{"M": 3000}, {"M": 3000}],
    "outputs": {"covariance": true, "quantiles": [{"coord": 1, "alpha": 0.2}], "rp": {"N": 100},
                "draws": {"N": 50, "seed": 7}}
  })";
  const RunConfig c = parse_config(cfg);
  RunOverrides one, eight;
  one.threads = 1;
  eight.threads = 8;
  const RunOutputs a = run_pipeline(c, one);
  const RunOutputs b = run_pipeline(c, eight);
  const RunOutputs again = run_pipeline(c, one);
  CHECK(a.results_csv == b.results_csv);
  CHECK(a.posterior_csv == b.posterior_csv);
  CHECK(*a.rp_csv == *b.rp_csv);
  CHECK(*a.draws_csv == *b.draws_csv);
  CHECK(a.results_csv == again.results_csv);
  CHECK(a.posterior_csv == again.posterior_csv);
}

TEST_CASE("low acceptance is flagged in the run log") {
  const char* cfg = R"({
    "schema_version": 1,
    "target": {"name": "beta", "params": {"a": 2, "b": 3}},
    "proposal": [{"kind": "uniform_box", "lower": [-20], "upper": [20]}],
    "stages": [{"M": 200}],
    "acceptance_warning": 0.1
  })";
  const auto log = nlohmann::json::parse(run_pipeline(parse_config(cfg)).log_json);
  CHECK(log["stages"][0]["acceptance_rate"].get<double>() < 0.1);
  CHECK_FALSE(log["warnings"].empty());
}

TEST_CASE("command line: outputs, exit codes and atomicity") {
  TempDir dir;
  const fs::path good = dir.path / "good.json";
  std::ofstream(good) << kMinimal;
  const fs::path out1 = dir.path / "out1", out2 = dir.path / "out2";
  CHECK(run_cli("run --config " + good.string() + " --out-dir " + out1.string()) == 0);
  CHECK(run_cli("run --config " + good.string() + " --out-dir " + out2.string()) == 0);
  for (const char* f : {"results.csv", "posterior.csv", "rp.csv"}) {
    REQUIRE(fs::exists(out1 / f));
    CHECK(slurp(out1 / f) == slurp(out2 / f));
  }
  CHECK(fs::exists(out1 / "run_log.json"));
  CHECK(results_value(slurp(out1 / "results.csv"), "kd").substr(0, 5) == "0.087");

  const fs::path bad = dir.path / "bad.json";
  std::ofstream(bad) << R"({"schema_version":1,"target":{"name":"normal2d"},
      "proposal":[{"kind":"gamma","shape":1,"scale":1}],"stages":[{"M":10}]})";
  const fs::path out3 = dir.path / "out3";
  CHECK(run_cli("run --config " + bad.string() + " --out-dir " + out3.string()) == 2);
  CHECK((!fs::exists(out3) || fs::is_empty(out3)));

  const fs::path rp_out = dir.path / "rp";
  CHECK(run_cli("rp --config " + good.string() + " --N 10 --out-dir " + rp_out.string()) == 0);
  CHECK(fs::exists(rp_out / "rp.csv"));
  CHECK_FALSE(fs::exists(rp_out / "results.csv"));
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("atomic writer leaves nothing behind on failure") {
  TempDir dir;
  const fs::path target = dir.path / "blocked";
  std::ofstream(target) << "a regular file where a directory is expected";
  CHECK_THROWS(write_atomically(target.string(), {{"x.csv", "1\n"}}));
  write_atomically((dir.path / "ok").string(), {{"x.csv", "1\n"}, {"y.csv", "2\n"}});
  CHECK(slurp(dir.path / "ok" / "y.csv") == "2\n");
  for (const auto& e : fs::directory_iterator(dir.path / "ok")) {
    CHECK(e.path().filename().string().rfind(".staging", 0) != 0);
  }
}

TEST_CASE("subprocess target") {
  TempDir dir;
  const fs::path script = dir.path / "target.sh";
  // l(x) = x^2 / 2 for x in (-3, 3), zero density outside
  std::ofstream(script) << "while read x; do awk -v x=\"$x\" 'BEGIN { if (x > -3 && x < 3) printf \"%.17g\\n\", x*x/2; "
                           "else print \"inf\" }'; done\n";
  const std::string cfg = R"({"schema_version":1,"target":{"name":"subprocess","params":{"command":"sh )" +
                          script.string() + R"(","dim":1}},
      "proposal":[{"kind":"uniform_box","lower":[-4],"upper":[4]}],"stages":[{"M":64,"generator":"sobol"}]})";
  const RunOutputs out = run_pipeline(parse_config(cfg));
  CHECK(std::abs(std::stod(results_value(out.results_csv, "mean"))) < 0.05);
  CHECK(std::stod(results_value(out.results_csv, "acceptance_rate")) == doctest::Approx(0.75).epsilon(0.05));

  const std::string broken = R"({"schema_version":1,"target":{"name":"subprocess","params":{"command":"echo nope","dim":1}},
      "proposal":[{"kind":"uniform_box","lower":[0],"upper":[1]}],"stages":[{"M":4,"generator":"sobol"}]})";
  CHECK_THROWS(run_pipeline(parse_config(broken)));
}

TEST_CASE("benchmark tables") {
  BenchmarkOptions opt;
  opt.repetitions = 5;
  const auto t1 = run_benchmark("t1", opt);
  CHECK(t1.rows.size() == 5);
  const std::string csv = render_csv(t1, opt);
  CHECK(csv.find("method,M10_SE,M10_KD,M30_SE,M30_KD") != std::string::npos);
  CHECK_THROWS(run_benchmark("t9", opt));
}
