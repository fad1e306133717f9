// qda: config-driven discretization runs and benchmark reproductions.
//
// Exit codes: 0 success, 1 benchmark check failed, 2 invalid config or
// arguments, 3 the computation failed.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qda/adaptive.hpp"
#include "qda/cli.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw qda::cli::ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretization approximation of posterior distributions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> repetitions;
  std::optional<std::size_t> n_points;
  std::string table;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "Directory for the output files")->capture_default_str();
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads (falls back to QDA_THREADS, then 1)");
  };
  CLI::App* run = app.add_subcommand("run", "Run the pipeline described by a config");
  CLI::App* rp = app.add_subcommand("rp", "Representation points only");
  CLI::App* sample = app.add_subcommand("sample", "Random draws only");
  for (CLI::App* sub : {run, rp, sample}) {
    sub->add_option("--config", config_path, "Config file (JSON)")->required();
    add_common(sub);
  }
  rp->add_option("--N", n_points, "Number of representation points (overrides outputs.rp.N)");
  sample->add_option("--N", n_points, "Number of draws (overrides outputs.draws.N)");
  CLI::App* bench = app.add_subcommand("benchmark", "Reproduce a table at desk scale");
  bench->add_option("--table", table, "t1, t2, t3-small or t4-small")
      ->required()
      ->check(CLI::IsMember({"t1", "t2", "t3-small", "t4-small"}));
  bench->add_option("--repetitions", repetitions, "Repetitions of the Monte Carlo rows");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bench->parsed()) {
      qda::cli::BenchmarkOptions opt;
      if (seed) opt.seed = *seed;
      opt.repetitions = repetitions;
      opt.threads = threads.value_or(0);
      const auto result = qda::cli::run_benchmark(table, opt);
      qda::cli::write_atomically(out_dir, {{table + ".csv", qda::cli::render_csv(result, opt)}});
      bool ok = true;
      for (const auto& c : result.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.pass;
      }
      return ok ? 0 : 1;
    }

    const qda::cli::RunConfig cfg = qda::cli::parse_config(slurp(config_path));
    qda::cli::RunOverrides ov;
    ov.seed = seed;
    ov.threads = threads;
    if (rp->parsed()) {
      ov.rp_n = n_points;
      if (!ov.rp_n && !cfg.rp_n) throw qda::cli::ConfigError({"rp: give --N or outputs.rp.N"});
    }
    if (sample->parsed()) {
      ov.draws_n = n_points;
      if (!ov.draws_n && !cfg.draws_n) throw qda::cli::ConfigError({"sample: give --N or outputs.draws.N"});
    }
    const auto out = qda::cli::run_pipeline(cfg, ov);
    std::vector<std::pair<std::string, std::string>> files;
    if (run->parsed()) {
      files = {{"results.csv", out.results_csv}, {"posterior.csv", out.posterior_csv}};
      if (out.rp_csv) files.emplace_back("rp.csv", *out.rp_csv);
      if (out.draws_csv) files.emplace_back("draws.csv", *out.draws_csv);
    } else if (rp->parsed()) {
      files = {{"rp.csv", *out.rp_csv}};
    } else {
      files = {{"draws.csv", *out.draws_csv}};
    }
    files.emplace_back("run_log.json", out.log_json);
    qda::cli::write_atomically(out_dir, files);
    return 0;
  } catch (const qda::cli::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const qda::StageAbort& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& r : e.reports()) {
      std::cerr << "  stage " << r.stage << ": M=" << r.M << " acceptance=" << r.acceptance_rate << " proposal="
                << r.proposal << (r.warning.empty() ? "" : " (" + r.warning + ")") << '\n';
    }
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
