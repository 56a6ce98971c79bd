#include "refprior/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "refprior/errors.hpp"
#include "refprior/sampling.hpp"

namespace refprior {

namespace {

// Random grids live on their own single-index stream path; estimate streams
// use three-index paths, so the two can never collide.
constexpr std::uint64_t kGridStreamTag = 0x67726964;

std::string fmt_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
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

// Index-addressed work queue. Results must be written to preallocated slots
// keyed by index, so the outcome is independent of worker count and
// completion order. The first exception aborts the pool and rethrows.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads > static_cast<int>(n)) threads = static_cast<int>(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

void write_csv(const std::string& path, bool timestamp,
               const std::string& header,
               const std::vector<std::string>& rows) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out)
    throw ConfigError("experiment: cannot open output file '" + path + "'");
  if (timestamp) out << "# generated " << iso_utc_now() << "\n";
  out << header << "\n";
  for (const std::string& row : rows) out << row << "\n";
  if (!out)
    throw ConfigError("experiment: write failed for '" + path + "'");
}

}  // namespace

std::vector<double> materialize_grid(const ExperimentConfig& cfg) {
  const ThetaGridSpec& g = cfg.theta_grid;
  std::vector<double> thetas;
  switch (g.kind) {
    case ThetaGridSpec::Kind::Explicit:
      if (g.values.empty())
        throw ConfigError("config: theta_grid list is empty");
      thetas = g.values;
      break;
    case ThetaGridSpec::Kind::Linear: {
      if (g.count < 2)
        throw ConfigError("config: spaced theta_grid needs count >= 2");
      thetas.reserve(g.count);
      for (std::size_t i = 0; i < g.count; ++i) {
        if (i == 0)
          thetas.push_back(g.low);
        else if (i == g.count - 1)
          thetas.push_back(g.high);
        else
          thetas.push_back(g.low + (g.high - g.low) *
                                       (static_cast<double>(i) /
                                        static_cast<double>(g.count - 1)));
      }
      break;
    }
    case ThetaGridSpec::Kind::Log: {
      if (g.count < 2)
        throw ConfigError("config: spaced theta_grid needs count >= 2");
      const double llo = std::log(g.low);
      const double lhi = std::log(g.high);
      thetas.reserve(g.count);
      for (std::size_t i = 0; i < g.count; ++i) {
        if (i == 0)
          thetas.push_back(g.low);
        else if (i == g.count - 1)
          thetas.push_back(g.high);
        else
          thetas.push_back(std::exp(llo + (lhi - llo) *
                                              (static_cast<double>(i) /
                                               static_cast<double>(g.count -
                                                                   1))));
      }
      break;
    }
    case ThetaGridSpec::Kind::Random: {
      if (g.count < 1)
        throw ConfigError("config: theta_grid needs count >= 1");
      const StreamKey key{resolved_seed(cfg), {kGridStreamTag}};
      const std::vector<double> u = uniform_row(key, 0, g.count);
      thetas.reserve(g.count);
      for (double ui : u) thetas.push_back(g.low + (g.high - g.low) * ui);
      break;
    }
  }
  std::sort(thetas.begin(), thetas.end());
  return thetas;
}

std::vector<EstimateRecord> run_grid(const ExperimentConfig& cfg, int k,
                                     int replication) {
  validate_config(cfg);
  if (k < 2) throw ConfigError("run_grid: k must be >= 2");
  if (replication < 0) throw ConfigError("run_grid: replication must be >= 0");

  const Model model(cfg.model);
  const std::vector<double> thetas = materialize_grid(cfg);
  const double theta0 = resolved_theta0(cfg);
  const std::uint64_t seed = resolved_seed(cfg);
  const std::size_t m =
      cfg.fixed_m ? static_cast<std::size_t>(*cfg.fixed_m)
                  : static_cast<std::size_t>(k);
  const std::size_t n_est = cfg.estimators.size();
  const bool need_f = std::find(cfg.estimators.begin(), cfg.estimators.end(),
                                EstimatorKind::F) != cfg.estimators.end();
  const bool need_nac =
      std::find(cfg.estimators.begin(), cfg.estimators.end(),
                EstimatorKind::Fnac) != cfg.estimators.end();

  std::vector<EstimateRecord> records(thetas.size() * n_est);

  const auto run_point = [&](std::size_t ti) {
    const double theta = thetas[ti];
    const StreamKey key_num{
        seed,
        {static_cast<std::uint64_t>(replication), ti, 0}};
    const StreamKey key_den{
        seed,
        {static_cast<std::uint64_t>(replication), ti, 1}};
    const std::string path = std::to_string(replication) + "/" +
                             std::to_string(ti) + "/0";

    for (std::size_t e = 0; e < n_est; ++e) {
      EstimateRecord& rec = records[ti * n_est + e];
      rec.model = cfg.model;
      rec.estimator = cfg.estimators[e];
      rec.theta = theta;
      if (cfg.estimators[e] != EstimatorKind::Fk) rec.theta0 = theta0;
      rec.k = k;
      rec.m = static_cast<int>(m);
      rec.alpha = cfg.alpha;
      rec.replication = replication;
      rec.seed_path = path;
    }

    try {
      // The theta-side rows are shared by every estimator at this point.
      std::vector<Sample> samples_num;
      samples_num.reserve(m);
      for (std::size_t j = 0; j < m; ++j)
        samples_num.push_back(sample_row(model, key_num, j, k, theta));
      const std::vector<double> r_num =
          r_rows(model, theta, samples_num, cfg.quad);

      std::vector<double> r_den_f;
      if (need_f) {
        std::vector<Sample> den;
        den.reserve(m);
        for (std::size_t j = 0; j < m; ++j)
          den.push_back(sample_row(model, key_den, j, k, theta0));
        r_den_f = r_rows(model, theta0, den, cfg.quad);
      }

      std::vector<double> r_den_nac;
      if (need_nac) {
        std::vector<Sample> den;
        den.reserve(m);
        for (const Sample& x : samples_num)
          den.push_back(crn_sample(model, x, theta, theta0));
        r_den_nac = r_rows(model, theta0, den, cfg.quad);
      }

      for (std::size_t e = 0; e < n_est; ++e) {
        EstimateRecord& rec = records[ti * n_est + e];
        switch (cfg.estimators[e]) {
          case EstimatorKind::Fk: {
            const FkEstimate fe = fk_from_rows(theta, r_num, static_cast<std::size_t>(k));
            const Interval iv = half_width_fk(fe, cfg.alpha);
            rec.value = fe.value;
            rec.mu1_hat = fe.mu1_hat;
            rec.sigma1_sq = fe.sigma1_hat * fe.sigma1_hat;
            rec.half_width = iv.half_width;
            rec.lo = iv.lo;
            rec.hi = iv.hi;
            break;
          }
          case EstimatorKind::F:
          case EstimatorKind::Fnac: {
            const bool crn = cfg.estimators[e] == EstimatorKind::Fnac;
            const RatioEstimate re =
                ratio_from_rows(theta, theta0, r_num,
                                crn ? r_den_nac : r_den_f,
                                static_cast<std::size_t>(k), crn);
            const Interval iv = half_width_f(re, cfg.alpha);
            rec.value = re.value;
            rec.mu1_hat = re.mu1_hat;
            rec.mu2_hat = re.mu2_hat;
            rec.sigma1_sq = re.sigma1_sq;
            rec.sigma2_sq = re.sigma2_sq;
            rec.sigma12 = re.sigma12;
            rec.half_width = iv.half_width;
            rec.lo = iv.lo;
            rec.hi = iv.hi;
            break;
          }
        }
        rec.status = "ok";
      }
    } catch (const QuadratureError&) {
      // The whole theta point is abandoned: every requested estimator gets
      // an error row with coordinates but no results.
      for (std::size_t e = 0; e < n_est; ++e) {
        EstimateRecord& rec = records[ti * n_est + e];
        rec.value.reset();
        rec.mu1_hat.reset();
        rec.mu2_hat.reset();
        rec.sigma1_sq.reset();
        rec.sigma2_sq.reset();
        rec.sigma12.reset();
        rec.half_width.reset();
        rec.lo.reset();
        rec.hi.reset();
        rec.scaled_ref.reset();
        rec.status = "quadrature_error";
      }
    }
  };

  parallel_for(thetas.size(), resolved_threads(cfg), run_point);
  return records;
}

FitScore fit_and_score(std::span<EstimateRecord> records, const Model& model) {
  const std::optional<KnownPrior> reference = model.known_prior();
  if (!reference)
    throw MissingReferenceError(
        "fit_and_score: model has no reference density");

  FitScore out;
  out.used_conjecture = reference->conjecture;

  std::map<EstimatorKind, std::vector<std::size_t>> ok_rows;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].status == "ok" && records[i].value)
      ok_rows[records[i].estimator].push_back(i);

  for (const auto& [kind, idxs] : ok_rows) {
    std::vector<std::pair<double, double>> points;
    points.reserve(idxs.size());
    for (std::size_t i : idxs)
      points.emplace_back(records[i].theta, *records[i].value);
    EarpFit fit = fit_constant_earp(
        points, [&](double theta) { return (*reference)(theta); });

    GridEvaluation grid;
    grid.entries.reserve(idxs.size());
    for (std::size_t i : idxs) {
      const double scaled = fit.a_hat * (*reference)(records[i].theta);
      records[i].scaled_ref = scaled;
      grid.entries.push_back({records[i].theta, *records[i].value,
                              records[i].half_width.value_or(0.0), scaled});
    }
    out.grids.emplace(kind, std::move(grid));
    out.fits.emplace(kind, std::move(fit));
  }
  return out;
}

SweepSummary k_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const Model model(cfg.model);
  const std::size_t n_est = cfg.estimators.size();

  struct Accumulator {
    double ce = 0.0, am = 0.0, ea = 0.0, ah = 0.0;
    int fits = 0;
    int excluded = 0;
  };
  std::vector<Accumulator> acc(cfg.k_values.size() * n_est);
  std::vector<std::string> record_rows;

  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const int k = cfg.k_values[ki];
    for (int rep = 0; rep < cfg.replications; ++rep) {
      std::vector<EstimateRecord> records = run_grid(cfg, k, rep);
      const FitScore score = fit_and_score(records, model);
      for (std::size_t e = 0; e < n_est; ++e) {
        const EstimatorKind kind = cfg.estimators[e];
        Accumulator& a = acc[ki * n_est + e];
        if (const auto it = score.grids.find(kind); it != score.grids.end()) {
          a.ce += coverage(it->second);
          a.am += amrp(it->second);
          a.ea += earp(it->second);
          a.ah += score.fits.at(kind).a_hat;
          a.fits += 1;
        }
        for (const EstimateRecord& rec : records)
          if (rec.estimator == kind && rec.status != "ok") a.excluded += 1;
      }
      for (const EstimateRecord& rec : records)
        record_rows.push_back(record_csv_row(rec));
    }
  }

  SweepSummary summary;
  summary.cells.reserve(acc.size());
  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    for (std::size_t e = 0; e < n_est; ++e) {
      const Accumulator& a = acc[ki * n_est + e];
      SweepCell cell;
      cell.estimator = cfg.estimators[e];
      cell.k = cfg.k_values[ki];
      cell.replications = a.fits;
      if (a.fits > 0) {
        cell.ce = a.ce / a.fits;
        cell.amrp = a.am / a.fits;
        cell.earp = a.ea / a.fits;
        cell.a_hat = a.ah / a.fits;
      }
      cell.excluded = a.excluded;
      summary.cells.push_back(cell);
    }
  }

  if (!cfg.output_path.empty()) {
    write_csv(cfg.output_path + "_records.csv", cfg.timestamp,
              records_csv_header(), record_rows);
    std::vector<std::string> summary_rows;
    summary_rows.reserve(summary.cells.size());
    for (const SweepCell& cell : summary.cells)
      summary_rows.push_back(summary_csv_row(cfg.model, cell));
    write_csv(cfg.output_path + "_summary.csv", cfg.timestamp,
              summary_csv_header(), summary_rows);
  }
  return summary;
}

std::string records_csv_header() {
  return "model,estimator,theta,theta0,k,m,alpha,replication,value,mu1_hat,"
         "mu2_hat,sigma1_sq,sigma2_sq,sigma12,half_width,lo,hi,scaled_ref,"
         "seed_path,status";
}

std::string record_csv_row(const EstimateRecord& rec) {
  std::string row;
  row.reserve(256);
  row += model_name(rec.model);
  row += ',';
  row += estimator_name(rec.estimator);
  row += ',';
  row += fmt_double(rec.theta);
  row += ',';
  row += fmt_opt(rec.theta0);
  row += ',';
  row += std::to_string(rec.k);
  row += ',';
  row += std::to_string(rec.m);
  row += ',';
  row += fmt_double(rec.alpha);
  row += ',';
  row += std::to_string(rec.replication);
  row += ',';
  row += fmt_opt(rec.value);
  row += ',';
  row += fmt_opt(rec.mu1_hat);
  row += ',';
  row += fmt_opt(rec.mu2_hat);
  row += ',';
  row += fmt_opt(rec.sigma1_sq);
  row += ',';
  row += fmt_opt(rec.sigma2_sq);
  row += ',';
  row += fmt_opt(rec.sigma12);
  row += ',';
  row += fmt_opt(rec.half_width);
  row += ',';
  row += fmt_opt(rec.lo);
  row += ',';
  row += fmt_opt(rec.hi);
  row += ',';
  row += fmt_opt(rec.scaled_ref);
  row += ',';
  row += rec.seed_path;
  row += ',';
  row += rec.status;
  return row;
}

std::string summary_csv_header() {
  return "model,estimator,k,replications,CE,AMRP,EARP,a_hat,excluded";
}

std::string summary_csv_row(ModelId model, const SweepCell& cell) {
  std::string row;
  row.reserve(128);
  row += model_name(model);
  row += ',';
  row += estimator_name(cell.estimator);
  row += ',';
  row += std::to_string(cell.k);
  row += ',';
  row += std::to_string(cell.replications);
  row += ',';
  row += fmt_double(cell.ce);
  row += ',';
  row += fmt_double(cell.amrp);
  row += ',';
  row += fmt_double(cell.earp);
  row += ',';
  row += fmt_double(cell.a_hat);
  row += ',';
  row += std::to_string(cell.excluded);
  return row;
}

}  // namespace refprior
