// refprior: reference prior estimation by Monte Carlo simulation.
//
// Subcommands: estimate (one theta), grid (one k over a theta grid),
// fit (proportionality constant), sweep (full k sweep to CSV),
// selftest (built-in golden checks).
//
// Exit codes: 0 success, 2 flag/config rejection, 3 numerical failure.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "refprior/errors.hpp"
#include "refprior/estimators.hpp"
#include "refprior/experiment.hpp"
#include "refprior/metrics.hpp"
#include "refprior/model.hpp"
#include "refprior/sampling.hpp"
#include "refprior/special_functions.hpp"

namespace {

using namespace refprior;

std::string fmt(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::uint64_t default_seed() {
  // Resolution order: REFPRIOR_SEED, then 1 (an explicit --seed wins earlier).
  return resolved_seed(ExperimentConfig{});
}

Model parse_model(const std::string& name) {
  const auto id = model_from_name(name);
  if (!id)
    throw ConfigError("unknown model '" + name +
                      "' (expected exp, unif0theta, unifthetasq, triangular)");
  return Model(*id);
}

EstimatorKind parse_estimator(const std::string& name) {
  const auto kind = estimator_from_name(name);
  if (!kind)
    throw ConfigError("unknown estimator '" + name +
                      "' (expected fk, f, fnac)");
  return *kind;
}

// Replicate file: '#' starts a comment, blank lines are skipped, lines of
// whitespace-separated reals accumulate into the current replicate, and a
// line holding only --- closes it.
std::vector<Sample> parse_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open replicate file '" + path + "'");
  std::vector<Sample> samples;
  std::vector<double> current;
  std::string line;
  const auto flush = [&] {
    if (!current.empty()) {
      samples.emplace_back(current);
      current.clear();
    }
  };
  while (std::getline(in, line)) {
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string tok;
    bool saw_sep = false;
    while (fields >> tok) {
      if (tok == "---") {
        saw_sep = true;
        break;
      }
      double v{};
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ConfigError("replicate file '" + path + "': bad number '" +
                          tok + "'");
      current.push_back(v);
    }
    if (saw_sep) flush();
  }
  flush();
  if (samples.empty())
    throw ConfigError("replicate file '" + path + "' holds no replicates");
  for (const Sample& s : samples)
    if (s.size() != samples.front().size())
      throw ConfigError("replicate file '" + path +
                        "': replicates must share one size");
  return samples;
}

struct EstimateArgs {
  std::string model;
  std::string estimator = "fk";
  double theta = 0.0;
  double theta0 = 0.0;
  bool has_theta0 = false;
  int k = 0;
  bool has_k = false;
  int m = 0;
  bool has_m = false;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string fixture;
  std::string fixture0;
  bool csv = false;
  QuadratureSettings quad;
};

int cmd_estimate(const EstimateArgs& a) {
  const Model model = parse_model(a.model);
  const EstimatorKind kind = parse_estimator(a.estimator);
  if (!model.theta_domain().contains(a.theta))
    throw ConfigError("--theta lies outside the model's parameter domain");
  const double theta0 = a.has_theta0 ? a.theta0 : model.default_theta0();
  if (kind != EstimatorKind::Fk && !model.theta_domain().contains(theta0))
    throw ConfigError("--theta0 lies outside the model's parameter domain");
  if (!(a.alpha > 0.0 && a.alpha < 1.0))
    throw ConfigError("--alpha must lie in (0,1)");

  const bool needs_pairs = model.id() == ModelId::Unif0Theta ||
                           model.id() == ModelId::Triangular01;

  std::vector<Sample> num, den;
  int k = 0, m = 0;
  if (!a.fixture.empty()) {
    num = parse_fixture(a.fixture);
    k = static_cast<int>(num.front().size());
    m = static_cast<int>(num.size());
    if (a.has_k && a.k != k)
      throw ConfigError("--k disagrees with the replicate file");
    if (a.has_m && a.m != m)
      throw ConfigError("--m disagrees with the replicate file");
    if (kind == EstimatorKind::F) {
      if (a.fixture0.empty())
        throw ConfigError(
            "estimator f needs --fixture0 with replicates drawn at theta0");
      den = parse_fixture(a.fixture0);
      if (den.size() != num.size() ||
          den.front().size() != num.front().size())
        throw ConfigError("--fixture0 must match --fixture in m and k");
    }
  } else {
    if (!a.has_k) throw ConfigError("--k is required without --fixture");
    k = a.k;
    m = a.has_m ? a.m : a.k;
    if (k < 1 || (needs_pairs && k < 2))
      throw ConfigError("--k is too small for this model");
    if (m < 2) throw ConfigError("--m must be >= 2");
  }
  if (!a.fixture0.empty() && kind != EstimatorKind::F)
    throw ConfigError("--fixture0 applies only to estimator f");

  const std::uint64_t seed = a.has_seed ? a.seed : default_seed();
  const StreamKey key_num{seed, {0, 0, 0}};
  const StreamKey key_den{seed, {0, 0, 1}};

  EstimateRecord rec;
  rec.model = model.id();
  rec.estimator = kind;
  rec.theta = a.theta;
  rec.k = k;
  rec.m = m;
  rec.alpha = a.alpha;
  rec.seed_path = a.fixture.empty() ? "0/0/0" : "fixture";

  switch (kind) {
    case EstimatorKind::Fk: {
      const FkEstimate est =
          a.fixture.empty() ? fk_hat(model, a.theta, key_num,
                                     static_cast<std::size_t>(m),
                                     static_cast<std::size_t>(k), a.quad)
                            : fk_hat(model, a.theta, num, a.quad);
      const Interval iv = half_width_fk(est, a.alpha);
      rec.value = est.value;
      rec.mu1_hat = est.mu1_hat;
      rec.sigma1_sq = est.sigma1_hat * est.sigma1_hat;
      rec.half_width = iv.half_width;
      rec.lo = iv.lo;
      rec.hi = iv.hi;
      break;
    }
    case EstimatorKind::F:
    case EstimatorKind::Fnac: {
      RatioEstimate est;
      if (a.fixture.empty()) {
        est = kind == EstimatorKind::F
                  ? f_hat(model, a.theta, theta0, key_num, key_den,
                          static_cast<std::size_t>(m),
                          static_cast<std::size_t>(k), a.quad)
                  : fnac_hat(model, a.theta, theta0, key_num,
                             static_cast<std::size_t>(m),
                             static_cast<std::size_t>(k), a.quad);
      } else if (kind == EstimatorKind::F) {
        est = f_hat(model, a.theta, theta0, num, den, a.quad, false);
      } else {
        std::vector<Sample> transformed;
        transformed.reserve(num.size());
        for (const Sample& x : num)
          transformed.push_back(crn_sample(model, x, a.theta, theta0));
        est = f_hat(model, a.theta, theta0, num, transformed, a.quad, true);
      }
      const Interval iv = half_width_f(est, a.alpha);
      rec.theta0 = theta0;
      rec.value = est.value;
      rec.mu1_hat = est.mu1_hat;
      rec.mu2_hat = est.mu2_hat;
      rec.sigma1_sq = est.sigma1_sq;
      rec.sigma2_sq = est.sigma2_sq;
      rec.sigma12 = est.sigma12;
      rec.half_width = iv.half_width;
      rec.lo = iv.lo;
      rec.hi = iv.hi;
      break;
    }
  }

  if (a.csv) {
    std::cout << records_csv_header() << "\n" << record_csv_row(rec) << "\n";
  } else {
    std::cout << "estimator=" << estimator_name(kind)
              << " model=" << model.name() << " theta=" << fmt(a.theta);
    if (kind != EstimatorKind::Fk) std::cout << " theta0=" << fmt(theta0);
    std::cout << " k=" << k << " m=" << m << " value=" << fmt(*rec.value)
              << " half_width=" << fmt(*rec.half_width)
              << " lo=" << fmt(*rec.lo) << " hi=" << fmt(*rec.hi) << "\n";
  }
  return 0;
}

struct SweepArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string output;
  bool has_output = false;
  int replications = 0;
  bool has_replications = false;
  int threads = -1;
  bool no_timestamp = false;
};

struct GridArgs {
  std::string config;
  int k = 0;
  bool has_k = false;
  int replication = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = -1;
  bool no_timestamp = false;
};

ExperimentConfig load_with_overrides(const std::string& path,
                                     const SweepArgs* sweep,
                                     const GridArgs* grid) {
  ExperimentConfig cfg = load_config(path);
  if (sweep) {
    if (sweep->has_seed) cfg.master_seed = sweep->seed;
    if (sweep->has_output) cfg.output_path = sweep->output;
    if (sweep->has_replications) cfg.replications = sweep->replications;
    if (sweep->threads >= 0) cfg.threads = sweep->threads;
    if (sweep->no_timestamp) cfg.timestamp = false;
  }
  if (grid) {
    if (grid->has_seed) cfg.master_seed = grid->seed;
    if (grid->threads >= 0) cfg.threads = grid->threads;
    if (grid->no_timestamp) cfg.timestamp = false;
  }
  validate_config(cfg);
  return cfg;
}

std::string iso_utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_grid(const GridArgs& a) {
  const ExperimentConfig cfg = load_with_overrides(a.config, nullptr, &a);
  const int k = a.has_k ? a.k : cfg.k_values.front();
  std::vector<EstimateRecord> records = run_grid(cfg, k, a.replication);
  const Model model(cfg.model);
  const FitScore score = fit_and_score(records, model);
  for (const auto& [kind, fit] : score.fits)
    std::cerr << "fit " << estimator_name(kind) << ": a_hat=" << fmt(fit.a_hat)
              << " earp=" << fmt(fit.earp_min)
              << (score.used_conjecture ? " (reference shape is a conjecture)"
                                        : "")
              << "\n";
  if (cfg.timestamp) std::cout << "# generated " << iso_utc_now() << "\n";
  std::cout << records_csv_header() << "\n";
  for (const EstimateRecord& rec : records)
    std::cout << record_csv_row(rec) << "\n";
  return 0;
}

int cmd_sweep(const SweepArgs& a) {
  const ExperimentConfig cfg = load_with_overrides(a.config, &a, nullptr);
  const SweepSummary summary = k_sweep(cfg);
  if (!cfg.output_path.empty())
    std::cerr << "wrote " << cfg.output_path << "_records.csv and "
              << cfg.output_path << "_summary.csv\n";
  if (cfg.timestamp) std::cout << "# generated " << iso_utc_now() << "\n";
  std::cout << summary_csv_header() << "\n";
  for (const SweepCell& cell : summary.cells)
    std::cout << summary_csv_row(cfg.model, cell) << "\n";
  return 0;
}

struct FitArgs {
  std::string ratios;
  std::string input;
  std::string model;
};

int cmd_fit(const FitArgs& a) {
  std::vector<double> ratios;
  std::vector<std::pair<double, double>> pairs;
  if (!a.ratios.empty() && !a.input.empty())
    throw ConfigError("pass either --ratios or --input, not both");
  if (!a.ratios.empty()) {
    std::istringstream in(a.ratios);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      double v{};
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ConfigError("--ratios: bad number '" + tok + "'");
      ratios.push_back(v);
    }
  } else if (!a.input.empty()) {
    std::ifstream in(a.input);
    if (!in) throw ConfigError("cannot open '" + a.input + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (const std::size_t hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      for (char& c : line)
        if (c == ',') c = ' ';
      std::istringstream fields(line);
      std::vector<double> vals;
      double v{};
      while (fields >> v) vals.push_back(v);
      if (vals.empty()) continue;
      if (vals.size() == 1)
        ratios.push_back(vals[0]);
      else if (vals.size() == 2)
        pairs.emplace_back(vals[0], vals[1]);
      else
        throw ConfigError("--input lines must hold one ratio or a "
                          "theta,estimate pair");
    }
    if (!ratios.empty() && !pairs.empty())
      throw ConfigError("--input mixes single ratios with theta,estimate "
                        "pairs");
  } else {
    throw ConfigError("fit needs --ratios or --input");
  }

  EarpFit fit;
  if (!pairs.empty()) {
    if (a.model.empty())
      throw ConfigError("theta,estimate input needs --model for the "
                        "reference shape");
    const Model model = parse_model(a.model);
    const auto reference = model.known_prior();
    if (!reference)
      throw MissingReferenceError("model has no reference density");
    fit = fit_constant_earp(pairs,
                            [&](double t) { return (*reference)(t); });
    if (reference->conjecture)
      std::cerr << "note: the reference shape for this model is a "
                   "conjecture\n";
  } else {
    fit = fit_constant_earp(ratios);
  }
  std::cout << "a_hat=" << fmt(fit.a_hat) << " s_hat=" << fit.s_hat
            << " earp_min=" << fmt(fit.earp_min)
            << " n=" << fit.ratios_sorted.size() << "\n";
  return 0;
}

// ---- selftest -------------------------------------------------------------

struct Check {
  std::string name;
  std::string detail;  // empty = pass
};

const std::vector<Sample>& worked_scale_replicates() {
  static const std::vector<Sample> samples = {
      Sample({2.643036, 2.525562, 0.960058, 4.832099, 4.272201}),
      Sample({2.174483, 2.483448, 1.491607, 4.914156, 0.174570}),
      Sample({1.941754, 1.177051, 1.256304, 4.244871, 2.803651}),
      Sample({0.451879, 2.500297, 4.722214, 4.968808, 2.783378}),
      Sample({3.850290, 1.067490, 3.773885, 1.241600, 1.111622}),
  };
  return samples;
}

const std::vector<Sample>& worked_anchor_replicates() {
  static const std::vector<Sample> samples = {
      Sample({0.302285, 0.423168, 0.138452, 0.616580, 0.575441}),
      Sample({0.307996, 0.862337, 0.886713, 0.442853, 0.799809}),
      Sample({0.011259, 0.539374, 0.939005, 0.709738, 0.193020}),
      Sample({0.947076, 0.498836, 0.251442, 0.152291, 0.045622}),
      Sample({0.364147, 0.260889, 0.536815, 0.514442, 0.604568}),
  };
  return samples;
}

int cmd_selftest(bool inject_failure) {
  std::vector<Check> checks;
  const auto expect_near = [&](const std::string& name, double got,
                               double want, double tol) {
    Check c{name, ""};
    if (!(std::abs(got - want) <= tol))
      c.detail = "got " + fmt(got) + ", want " + fmt(want) + " +- " + fmt(tol);
    checks.push_back(std::move(c));
  };

  const Model unif(ModelId::Unif0Theta);
  const auto& scale = worked_scale_replicates();
  const auto& anchor = worked_anchor_replicates();

  const double fk5_target = inject_failure ? 0.9 : 0.5437;
  expect_near("worked example fk(5) = 0.5437",
              fk_hat(unif, 5.0, scale).value, fk5_target, 1e-3);
  expect_near("worked example fk(1) = 1.5020",
              fk_hat(unif, 1.0, anchor).value, 1.5020, 1e-3);
  expect_near("worked example f(5) = 0.3619",
              f_hat(unif, 5.0, 1.0, scale, anchor).value, 0.3619, 1e-3);

  {
    const double want_c[5] = {0.000459, 0.000429, 0.000770, 0.000410,
                              0.001138};
    bool ok = true;
    std::string detail;
    for (std::size_t j = 0; j < scale.size(); ++j) {
      const double got = std::exp(unif.log_marginal_c(scale[j]));
      if (std::abs(got - want_c[j]) / want_c[j] > 1e-3) {
        ok = false;
        detail = "replicate " + std::to_string(j) + ": got " + fmt(got);
        break;
      }
    }
    checks.push_back({"worked example marginal constants", ok ? "" : detail});
  }

  {
    // Closed-form marginals against direct quadrature of the joint.
    bool ok = true;
    std::string detail;
    for (const Sample& s : scale) {
      const double closed = unif.log_marginal_c(s);
      const double quad = log_integrate(
          [&](double th) { return unif.log_joint(s, th); }, s.max(),
          std::numeric_limits<double>::infinity(), {});
      if (std::abs(closed - quad) > 1e-9) {
        ok = false;
        detail = "closed " + fmt(closed) + " vs quadrature " + fmt(quad);
        break;
      }
    }
    checks.push_back(
        {"closed-form vs quadrature marginal constants", ok ? "" : detail});
  }

  {
    const std::vector<double> ra = {19.883, 20.233, 15.260,
                                    15.366, 20.365, 18.622};
    const std::vector<double> rb = {1.126, 0.991, 0.784, 0.683, 1.153, 0.943};
    const EarpFit fa = fit_constant_earp(ra);
    const EarpFit fb = fit_constant_earp(rb);
    const bool ok = std::abs(fa.a_hat - 19.883) < 1e-9 && fa.s_hat == 3 &&
                    std::abs(fa.earp_min - 0.094) < 1e-3 &&
                    std::abs(fb.a_hat - 0.991) < 1e-9 && fb.s_hat == 3 &&
                    std::abs(fb.earp_min - 0.145) < 1e-3;
    checks.push_back({"constant fit worked example",
                      ok ? ""
                         : "a_hat=" + fmt(fa.a_hat) + " s=" +
                               std::to_string(fa.s_hat) + " b_hat=" +
                               fmt(fb.a_hat)});
  }

  {
    GridEvaluation cov;
    const double est[6] = {0.103, 0.229, 0.115, 0.036, 0.043, 0.040};
    const double hw[6] = {0.133, 0.049, 0.042, 0.047, 0.030, 0.032};
    const double thetas[6] = {2, 5, 8, 11, 14, 17};
    for (int i = 0; i < 6; ++i)
      cov.entries.push_back({thetas[i], est[i], hw[i], 1.0 / thetas[i]});
    const double ce = coverage(cov);
    checks.push_back({"coverage of the six worked intervals = 4/6",
                      std::abs(ce - 4.0 / 6.0) < 1e-12 ? ""
                                                       : "got " + fmt(ce)});
  }

  {
    const Model expm(ModelId::ExpRate);
    const StreamKey key{99, {0, 0, 0}};
    const RatioEstimate nac = fnac_hat(expm, 4.0, 1.0, key, 8, 6);
    const double comb = nac.sigma1_sq + nac.sigma2_sq - 2.0 * nac.sigma12;
    const bool ok =
        std::abs(nac.value - 0.25) <= 1e-12 && std::abs(comb) <= 1e-12;
    checks.push_back({"common-random-number ratio exact for exp",
                      ok ? "" : "value " + fmt(nac.value)});
  }

  expect_near("normal quantile z(0.975)", normal_quantile(0.975),
              1.959963984540054, 1e-8);
  expect_near("digamma(1) = -Euler-Mascheroni", digamma(1.0),
              -0.5772156649015329, 1e-9);

  {
    // Stream stability: these exact values are part of the reproducibility
    // contract; a change here silently invalidates every seeded experiment.
    const StreamKey key{1, {0, 0, 0}};
    const std::vector<double> row = uniform_row(key, 0, 3);
    const bool in_range = row[0] > 0.0 && row[0] < 1.0 && row[1] > 0.0 &&
                          row[1] < 1.0 && row[2] > 0.0 && row[2] < 1.0;
    const std::vector<double> again = uniform_row(key, 0, 3);
    checks.push_back({"uniform streams reproducible",
                      (in_range && row == again) ? "" : "stream drifted"});
  }

  int failures = 0;
  for (const Check& c : checks) {
    if (c.detail.empty()) {
      std::cout << "PASS " << c.name << "\n";
    } else {
      std::cout << "FAIL " << c.name << ": " << c.detail << "\n";
      ++failures;
    }
  }
  std::cout << (checks.size() - failures) << "/" << checks.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reference prior estimation by Monte Carlo simulation"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* cmd_est = app.add_subcommand(
      "estimate", "Estimate the reference prior at one theta");
  cmd_est->add_option("--model", est.model, "exp, unif0theta, unifthetasq, triangular")
      ->required();
  cmd_est->add_option("--theta", est.theta, "evaluation point")->required();
  CLI::Option* opt_theta0 =
      cmd_est->add_option("--theta0", est.theta0, "anchor point (model default when omitted)");
  CLI::Option* opt_k = cmd_est->add_option("--k", est.k, "sample size per replicate");
  CLI::Option* opt_m = cmd_est->add_option("--m", est.m, "number of replicates (default k)");
  cmd_est->add_option("--alpha", est.alpha, "interval level (default 0.05)");
  cmd_est->add_option("--estimator", est.estimator, "fk, f, fnac (default fk)");
  CLI::Option* opt_seed = cmd_est->add_option("--seed", est.seed, "master seed (default REFPRIOR_SEED, then 1)");
  cmd_est->add_option("--fixture", est.fixture, "replicate file instead of simulation");
  cmd_est->add_option("--fixture0", est.fixture0, "anchor replicate file (estimator f)");
  cmd_est->add_flag("--csv", est.csv, "emit a CSV record instead of the summary line");
  cmd_est->add_option("--quad-rel-tol", est.quad.rel_tol, "quadrature relative tolerance");
  cmd_est->add_option("--quad-abs-tol", est.quad.abs_tol, "quadrature absolute tolerance");
  cmd_est->add_option("--quad-max-subdiv", est.quad.max_subdivisions, "quadrature subdivision budget");

  GridArgs grid;
  CLI::App* cmd_gr = app.add_subcommand(
      "grid", "Run every estimator over the configured theta grid at one k");
  cmd_gr->add_option("--config", grid.config, "experiment config file")->required();
  CLI::Option* opt_gk = cmd_gr->add_option("--k", grid.k, "sample size (default: first of k_values)");
  cmd_gr->add_option("--replication", grid.replication, "replication index (default 0)");
  CLI::Option* opt_gseed = cmd_gr->add_option("--seed", grid.seed, "master seed override");
  cmd_gr->add_option("--threads", grid.threads, "worker count override");
  cmd_gr->add_flag("--no-timestamp", grid.no_timestamp, "suppress the generation-time header");

  FitArgs fit;
  CLI::App* cmd_ft = app.add_subcommand(
      "fit", "Fit the proportionality constant minimizing relative error");
  cmd_ft->add_option("--ratios", fit.ratios, "comma-separated estimate/reference ratios");
  cmd_ft->add_option("--input", fit.input, "file of ratios, or theta,estimate pairs");
  cmd_ft->add_option("--model", fit.model, "reference shape for theta,estimate input");

  SweepArgs sweep;
  CLI::App* cmd_sw = app.add_subcommand(
      "sweep", "Full k sweep: records and summary CSVs plus a summary table");
  cmd_sw->add_option("--config", sweep.config, "experiment config file")->required();
  CLI::Option* opt_sseed = cmd_sw->add_option("--seed", sweep.seed, "master seed override");
  CLI::Option* opt_sout = cmd_sw->add_option("--output", sweep.output, "output path prefix override");
  CLI::Option* opt_srep = cmd_sw->add_option("--replications", sweep.replications, "replication count override");
  cmd_sw->add_option("--threads", sweep.threads, "worker count override");
  cmd_sw->add_flag("--no-timestamp", sweep.no_timestamp, "suppress the generation-time header");

  bool inject_failure = false;
  CLI::App* cmd_st = app.add_subcommand(
      "selftest", "Run the built-in golden checks");
  cmd_st->add_flag("--inject-failure", inject_failure,
                   "corrupt one expected value to prove failures are caught")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  est.has_theta0 = opt_theta0->count() > 0;
  est.has_k = opt_k->count() > 0;
  est.has_m = opt_m->count() > 0;
  est.has_seed = opt_seed->count() > 0;
  grid.has_k = opt_gk->count() > 0;
  grid.has_seed = opt_gseed->count() > 0;
  sweep.has_seed = opt_sseed->count() > 0;
  sweep.has_output = opt_sout->count() > 0;
  sweep.has_replications = opt_srep->count() > 0;

  try {
    if (cmd_est->parsed()) return cmd_estimate(est);
    if (cmd_gr->parsed()) return cmd_grid(grid);
    if (cmd_ft->parsed()) return cmd_fit(fit);
    if (cmd_sw->parsed()) return cmd_sweep(sweep);
    if (cmd_st->parsed()) return cmd_selftest(inject_failure);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
