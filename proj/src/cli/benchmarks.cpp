#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qda/baselines.hpp"
#include "qda/cli.hpp"
#include "qda/models.hpp"
#include "qda/random.hpp"
#include "qda/sampling.hpp"

namespace qda::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string msd(const ErrorStats& s) { return sci(s.mse) + " (" + sci(s.sd) + ")"; }

std::string mean_sd(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return sci(m) + " (" + sci(sd) + ")";
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

Check rel_check(const std::string& name, double got, double want, double rel) {
  std::ostringstream d;
  d.precision(6);
  d << "got " << got << ", expected " << want << " +/- " << rel * 100 << "%";
  return {name, within_rel(got, want, rel), d.str()};
}

/// First-crossing alpha-quantile of an equally weighted sample.
double sample_quantile(std::vector<double> v, double alpha) {
  std::stable_sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  auto k = static_cast<std::size_t>(std::ceil(alpha * n - 1e-9));
  if (k == 0) k = 1;
  return v[std::min(k, v.size()) - 1];
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& s) {
  const Eigen::RowVectorXd mu = s.colwise().mean();
  const Eigen::MatrixXd c = s.rowwise() - mu;
  return c.transpose() * c / static_cast<double>(s.rows());
}

CdfOracle mixture_oracle() {
  return {[](std::span<const double> x) { return models::beta_mixture_cdf(x[0]); }, 1};
}

BenchmarkResult table1(const BenchmarkOptions& opt) {
  const std::size_t reps = opt.repetitions.value_or(100);
  const double truth = models::kBetaMixtureMean;
  const CdfOracle oracle = mixture_oracle();
  BenchmarkResult out;
  out.id = "t1";
  out.columns = {"method", "M10_SE", "M10_KD", "M30_SE", "M30_KD"};

  std::vector<std::string> mcmc{"MCMC (burn-in 100)"};
  std::vector<std::string> exact{"Exact MC"};
  std::vector<std::string> da{"DA"};
  std::vector<std::string> rp10{"DA-RP (N=10)"};
  std::vector<std::string> rp30{"DA-RP (N=30)"};
  const TargetDensity target = models::beta_mixture_target();
  double da_se[2]{}, da_kd[2]{}, rp10_se[2]{}, rp10_kd[2]{}, rp30_se[2]{}, rp30_kd[2]{};
  double da_seconds = 0.0;
  const std::size_t sizes[2] = {10, 30};
  for (int s = 0; s < 2; ++s) {
    const std::size_t M = sizes[s];
    std::vector<double> se_mc, kd_mc, se_ex, kd_ex;
    for (std::size_t r = 0; r < reps; ++r) {
      MHConfig cfg;
      cfg.kind = MHConfig::Kind::independence;
      cfg.proposal = unit_cube_proposal(1);
      cfg.burn_in = 100;
      cfg.length = cfg.burn_in + M;
      cfg.seed = Rng::derive(opt.seed, 2 * r).next();
      const Chain chain = mh_chain(target, cfg);
      const double cm = chain.sample.col(0).mean();
      se_mc.push_back((cm - truth) * (cm - truth));
      kd_mc.push_back(kolmogorov_discrete(WeightedPoints::empirical(chain.sample), oracle).value);
      const Eigen::MatrixXd ex = exact_mc(ExactModel::beta_mixture, M, Rng::derive(opt.seed, 2 * r + 1).next());
      const double em = ex.col(0).mean();
      se_ex.push_back((em - truth) * (em - truth));
      kd_ex.push_back(kolmogorov_discrete(WeightedPoints::empirical(ex), oracle).value);
    }
    mcmc.push_back(mean_sd(se_mc));
    mcmc.push_back(mean_sd(kd_mc));
    exact.push_back(mean_sd(se_ex));
    exact.push_back(mean_sd(kd_ex));

    const auto t0 = Clock::now();
    const DiscretePosterior dp = discretize(target, unit_cube_proposal(1), midpoint_grid_1d(M));
    const double m = mean(dp)(0);
    da_se[s] = (m - truth) * (m - truth);
    da_kd[s] = kolmogorov_discrete(WeightedPoints::from(dp), oracle).value;
    for (std::size_t N : {std::size_t{10}, std::size_t{30}}) {
      const RepresentationPointSet rp = representation_points(dp, N);
      const double rm = rp.points.col(0).mean();
      const double se = (rm - truth) * (rm - truth);
      const double kd = kolmogorov_discrete(WeightedPoints::from(rp), oracle).value;
      (N == 10 ? rp10_se : rp30_se)[s] = se;
      (N == 10 ? rp10_kd : rp30_kd)[s] = kd;
    }
    da_seconds += seconds_since(t0);
    da.push_back(sci(da_se[s]));
    da.push_back(sci(da_kd[s]));
    rp10.push_back(sci(rp10_se[s]));
    rp10.push_back(sci(rp10_kd[s]));
    rp30.push_back(sci(rp30_se[s]));
    rp30.push_back(sci(rp30_kd[s]));
  }
  out.rows = {mcmc, exact, da, rp10, rp30};
  out.checks.push_back(rel_check("DA M=10 SE", da_se[0], 2.1613e-5, 0.01));
  out.checks.push_back(rel_check("DA M=10 KD", da_kd[0], 0.0872, 0.01));
  out.checks.push_back(rel_check("DA M=30 SE", da_se[1], 3.2417e-7, 0.01));
  out.checks.push_back(rel_check("DA M=30 KD", da_kd[1], 0.0275, 0.01));
  out.checks.push_back(rel_check("DA-RP N=10 (M=10) SE", rp10_se[0], 6.0494e-5, 0.01));
  out.checks.push_back(rel_check("DA-RP N=10 (M=10) KD", rp10_kd[0], 0.0951, 0.01));
  out.checks.push_back({"DA rows runtime < 1 s", da_seconds < 1.0, sci(da_seconds) + " s"});
  return out;
}

struct Norm2Errors {
  double mu, sigma, q1, q2;
};

Norm2Errors normal2d_errors(const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov, double q1, double q2) {
  const double e1 = q1 - models::normal2d_quantile(0, 0.2);
  const double e2 = q2 - models::normal2d_quantile(1, 0.1);
  return {(mu - models::normal2d_mean()).squaredNorm(), (cov - models::normal2d_cov()).squaredNorm(), e1 * e1, e2 * e2};
}

Norm2Errors normal2d_da(const DiscretePosterior& dp) {
  return normal2d_errors(mean(dp), covariance(dp), marginal_quantile(dp, 0, 0.2), marginal_quantile(dp, 1, 0.1));
}

Norm2Errors normal2d_sample(const Eigen::MatrixXd& s) {
  return normal2d_errors(s.colwise().mean().transpose(), sample_cov(s), sample_quantile(column(s, 0), 0.2),
                         sample_quantile(column(s, 1), 0.1));
}

BenchmarkResult table2(const BenchmarkOptions& opt) {
  const std::size_t reps = opt.repetitions.value_or(20);
  const auto t0 = Clock::now();
  BenchmarkResult out;
  out.id = "t2";
  out.columns = {"method", "mu_SE", "Sigma_SE", "q0.2_X1_SE", "q0.1_X2_SE"};
  const TargetDensity target = models::normal2d_target();
  const Proposal initial = cauchy_proposal(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  const DiscretizeOptions dopt{opt.threads};

  std::vector<double> mc[4], ex[4];
  for (std::size_t r = 0; r < reps; ++r) {
    MHConfig cfg;
    cfg.kind = MHConfig::Kind::independence;
    cfg.proposal = initial;
    cfg.burn_in = 200;
    cfg.length = cfg.burn_in + 2000;
    cfg.seed = Rng::derive(opt.seed, 2 * r).next();
    const Norm2Errors a = normal2d_sample(mh_chain(target, cfg).sample);
    const Norm2Errors b = normal2d_sample(exact_mc(ExactModel::normal2d, 2000, Rng::derive(opt.seed, 2 * r + 1).next()));
    const double av[4] = {a.mu, a.sigma, a.q1, a.q2};
    const double bv[4] = {b.mu, b.sigma, b.q1, b.q2};
    for (int k = 0; k < 4; ++k) {
      mc[k].push_back(av[k]);
      ex[k].push_back(bv[k]);
    }
  }
  std::vector<std::string> mcmc{"MCMC (independence MH, M=2000)"};
  std::vector<std::string> exact{"Exact MC (M=2000)"};
  for (int k = 0; k < 4; ++k) {
    mcmc.push_back(mean_sd(mc[k]));
    exact.push_back(mean_sd(ex[k]));
  }
  const Norm2Errors d1 = normal2d_da(discretize(target, initial, sobol_points(1000, 2, 1), dopt));
  const Norm2Errors d2 = normal2d_da(discretize(target, initial, sobol_points(2000, 2, 1), dopt));
  const AdaptiveResult two = run_stages(target, initial, {StageSpec{1000, Generator::sobol, std::nullopt}, StageSpec{1000, Generator::sobol, std::nullopt}}, 2, RefitFamily::mvcauchy, dopt);
  const Norm2Errors d3 = normal2d_da(two.posterior);
  auto row = [](std::string name, const Norm2Errors& e) {
    return std::vector<std::string>{std::move(name), sci(e.mu), sci(e.sigma), sci(e.q1), sci(e.q2)};
  };
  out.rows = {mcmc, exact, row("DA (M=1000)", d1), row("DA (M=2000)", d2), row("two-stage DA (M=1000+1000)", d3)};

  std::vector<double> mc_mu = mc[0];
  std::sort(mc_mu.begin(), mc_mu.end());
  const double med = mc_mu.size() % 2 ? mc_mu[mc_mu.size() / 2]
                                      : 0.5 * (mc_mu[mc_mu.size() / 2 - 1] + mc_mu[mc_mu.size() / 2]);
  out.checks.push_back({"two-stage < one-stage(2000) < median MCMC(2000)", d3.mu < d2.mu && d2.mu < med,
                        sci(d3.mu) + " < " + sci(d2.mu) + " < " + sci(med)});
  out.checks.push_back({"two-stage SE < 1e-4", d3.mu < 1e-4, sci(d3.mu)});
  const double secs = seconds_since(t0);
  out.checks.push_back({"runtime < 10 s", secs < 10.0, sci(secs) + " s"});
  return out;
}

struct LinErrors {
  double b1_mean, b1_q, s2_mean, s2_q;
};

BenchmarkResult table3_small(const BenchmarkOptions& opt) {
  const std::size_t reps = opt.repetitions.value_or(20);
  const std::size_t d = 20;
  const std::size_t n = 120;
  const std::size_t M = 1000;
  BenchmarkResult out;
  out.id = "t3-small";
  out.columns = {"method", "beta1_mean_SE", "beta1_q0.1_SE", "sigma2_mean_SE", "sigma2_q0.1_SE"};
  std::vector<double> e[3][4];
  const SupportPointSet pts = sobol_points(M, d + 2, 1);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto data = models::LinRegData::synthetic(n, d, Rng::derive(opt.seed, 3 * r).next());
    const double t_b1 = data.gamma_hat(1);
    const double t_b1q = data.coef_quantile(1, 0.1);
    const double t_s2 = data.sigma2_mean();
    const double t_s2q = data.sigma2_quantile(0.1);
    auto push = [&](int which, double b1, double b1q, double s2, double s2q) {
      // raw errors; error_stats squares them
      e[which][0].push_back(b1 - t_b1);
      e[which][1].push_back(b1q - t_b1q);
      e[which][2].push_back(s2 - t_s2);
      e[which][3].push_back(s2q - t_s2q);
    };
    const TargetDensity target = data.target();
    MHConfig cfg;
    cfg.kind = MHConfig::Kind::independence;
    cfg.proposal = data.proposal();
    cfg.burn_in = 100;
    cfg.length = cfg.burn_in + M;
    cfg.seed = Rng::derive(opt.seed, 3 * r + 1).next();
    const Eigen::MatrixXd ch = mh_chain(target, cfg).sample;
    const auto di = static_cast<Eigen::Index>(d);
    push(0, ch.col(1).mean(), sample_quantile(column(ch, 1), 0.1), ch.col(di + 1).mean(),
         sample_quantile(column(ch, di + 1), 0.1));
    const Eigen::MatrixXd ex = exact_mc(ExactModel::linreg, M, Rng::derive(opt.seed, 3 * r + 2).next(), &data);
    push(1, ex.col(1).mean(), sample_quantile(column(ex, 1), 0.1), ex.col(di + 1).mean(),
         sample_quantile(column(ex, di + 1), 0.1));
    const DiscretePosterior dp = discretize(target, data.proposal(), pts, DiscretizeOptions{opt.threads});
    const Eigen::VectorXd mu = mean(dp);
    push(2, mu(1), marginal_quantile(dp, 1, 0.1), mu(di + 1), marginal_quantile(dp, d + 1, 0.1));
  }
  const char* names[3] = {"MCMC (independence MH, M=1000)", "Exact MC (M=1000)", "DA (M=1000)"};
  ErrorStats stats[3][4];
  for (int w = 0; w < 3; ++w) {
    std::vector<std::string> row{names[w]};
    for (int k = 0; k < 4; ++k) {
      stats[w][k] = error_stats(e[w][k], 0.0);
      row.push_back(msd(stats[w][k]));
    }
    out.rows.push_back(row);
  }
  out.checks.push_back({"DA beats MCMC on beta1 mean MSE", stats[2][0].mse < stats[0][0].mse,
                        sci(stats[2][0].mse) + " < " + sci(stats[0][0].mse)});
  return out;
}

BenchmarkResult table4_small(const BenchmarkOptions& opt) {
  const std::size_t reps = opt.repetitions.value_or(500);
  const std::size_t n = 50;
  const std::size_t d = 5;
  const std::size_t M = 10000;
  const auto t0 = Clock::now();
  BenchmarkResult out;
  out.id = "t4-small";
  out.columns = {"setting", "beta1_CR", "beta1_AL", "beta4_CR", "beta4_AL"};
  const SupportPointSet pts = sobol_points(M, d + 3, 1);
  const Eigen::VectorXd beta = models::LinRegData::synthetic_beta(d);
  std::size_t cover[2] = {0, 0};
  std::vector<double> len[2];
  const std::size_t coords[2] = {1, 4};
  for (std::size_t r = 0; r < reps; ++r) {
    const auto data = models::LinRegData::synthetic(n, d, Rng::derive(opt.seed, r).next());
    const DiscretePosterior dp =
        discretize(models::blasso_target(data), models::blasso_proposal(data), pts, DiscretizeOptions{opt.threads});
    for (int k = 0; k < 2; ++k) {
      const std::size_t j = coords[k];
      const double lo = marginal_quantile(dp, j, 0.05);
      const double hi = marginal_quantile(dp, j, 0.95);
      const double truth = beta(static_cast<Eigen::Index>(j - 1));
      if (lo <= truth && truth <= hi) ++cover[k];
      len[k].push_back(hi - lo);
    }
  }
  const double cr1 = static_cast<double>(cover[0]) / static_cast<double>(reps);
  const double cr4 = static_cast<double>(cover[1]) / static_cast<double>(reps);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", cr1);
  std::string s1 = buf;
  std::snprintf(buf, sizeof buf, "%.4f", cr4);
  out.rows.push_back({"n=50 d=5 M=10000", s1, mean_sd(len[0]), buf, mean_sd(len[1])});
  std::ostringstream det;
  det << "coverage " << cr1 << " over " << reps << " repetitions, expected 0.8524 +/- 0.05";
  out.checks.push_back({"beta1 90% interval coverage", std::abs(cr1 - 0.8524) <= 0.05, det.str()});
  const double secs = seconds_since(t0);
  out.checks.push_back({"runtime < 5 min", secs < 300.0, sci(secs) + " s"});
  return out;
}

}  // namespace

BenchmarkResult run_benchmark(const std::string& id, const BenchmarkOptions& options) {
  if (id == "t1") return table1(options);
  if (id == "t2") return table2(options);
  if (id == "t3-small") return table3_small(options);
  if (id == "t4-small") return table4_small(options);
  throw std::invalid_argument("unknown benchmark '" + id + "' (expected t1, t2, t3-small or t4-small)");
}

std::string render_csv(const BenchmarkResult& result, const BenchmarkOptions& options) {
  std::ostringstream out;
  out << "# qda " << QDA_VERSION << " benchmark=" << result.id << " seed=" << options.seed;
  if (options.repetitions) out << " repetitions=" << *options.repetitions;
  out << '\n';
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (std::size_t i = 0; i < result.columns.size(); ++i) out << (i ? "," : "") << quote(result.columns[i]);
  out << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote(row[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace qda::cli
