#ifndef REFPRIOR_EXPERIMENT_HPP
#define REFPRIOR_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refprior/estimators.hpp"
#include "refprior/metrics.hpp"
#include "refprior/model.hpp"

namespace refprior {

enum class EstimatorKind { Fk, F, Fnac };

std::string_view estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> estimator_from_name(std::string_view name);

struct ThetaGridSpec {
  enum class Kind { Explicit, Linear, Log, Random };
  Kind kind = Kind::Linear;
  std::vector<double> values;  // Explicit only
  std::size_t count = 0;       // Linear/Log/Random
  double low = 0.0;
  double high = 0.0;
};

struct ExperimentConfig {
  ModelId model = ModelId::ExpRate;
  ThetaGridSpec theta_grid;
  std::optional<double> theta0;       // model default when absent
  std::vector<int> k_values;
  std::optional<int> fixed_m;         // m = k when absent
  double alpha = 0.05;
  std::vector<EstimatorKind> estimators;
  int replications = 1;
  std::optional<std::uint64_t> master_seed;  // REFPRIOR_SEED, then 1
  QuadratureSettings quad;
  std::string output_path;            // CSV prefix; empty = no files
  bool timestamp = true;              // emit a generation-time header line
  int threads = 0;                    // 0 = REFPRIOR_THREADS, then hardware
};

// One row of the records CSV: a single estimate at (estimator, theta, k,
// replication). Error rows keep the coordinates and carry a non-"ok" status
// with every result field absent.
struct EstimateRecord {
  ModelId model = ModelId::ExpRate;
  EstimatorKind estimator = EstimatorKind::Fk;
  double theta = 0.0;
  std::optional<double> theta0;   // absent for fk rows
  int k = 0;
  int m = 0;
  double alpha = 0.0;
  int replication = 0;
  std::optional<double> value;
  std::optional<double> mu1_hat;
  std::optional<double> mu2_hat;
  std::optional<double> sigma1_sq;
  std::optional<double> sigma2_sq;
  std::optional<double> sigma12;
  std::optional<double> half_width;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> scaled_ref;  // filled by fit_and_score
  std::string seed_path;             // numerator stream, "rep/theta_index/0"
  std::string status = "ok";
};

// Scoring of one replication's records: per estimator, the fitted constant
// and the scored grid (scaled_ref = a_hat * reference(theta)).
struct FitScore {
  std::map<EstimatorKind, EarpFit> fits;
  std::map<EstimatorKind, GridEvaluation> grids;
  bool used_conjecture = false;  // reference density is a conjecture
};

// Averages over replications for one (estimator, k) cell.
struct SweepCell {
  EstimatorKind estimator = EstimatorKind::Fk;
  int k = 0;
  int replications = 0;  // replications that produced a fit
  double ce = 0.0;
  double amrp = 0.0;
  double earp = 0.0;
  double a_hat = 0.0;
  int excluded = 0;      // error rows dropped from scoring
};

struct SweepSummary {
  std::vector<SweepCell> cells;
};

// Flat key = value configuration format ('#' comments). Keys: model,
// theta_grid, theta0, k_values, m, alpha, estimators, replications,
// master_seed, output_path, timestamp, threads, quad_rel_tol, quad_abs_tol,
// quad_max_subdivisions, quad_tail. Unknown keys are ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

// Resolved values for the optional fields.
std::uint64_t resolved_seed(const ExperimentConfig& cfg);
double resolved_theta0(const ExperimentConfig& cfg);
int resolved_threads(const ExperimentConfig& cfg);

// The theta grid, sorted ascending. Random grids are drawn from the
// dedicated grid stream of the master seed, so they are identical across
// replications and k.
std::vector<double> materialize_grid(const ExperimentConfig& cfg);

// Runs every configured estimator over the whole grid for one (k,
// replication) cell. Streams: theta draws use path {replication,
// theta_index, 0}; the independent anchor draws use {replication,
// theta_index, 1}; the CRN estimator reuses stream 0 for both sides. A
// QuadratureError aborts the grid point into error rows; any other error
// aborts the run. Records are ordered by theta, then by the configured
// estimator order.
std::vector<EstimateRecord> run_grid(const ExperimentConfig& cfg, int k,
                                     int replication);

// Fits the scaling constant per estimator from the "ok" rows and scores the
// grid against a_hat * reference. Backfills scaled_ref into the records.
// Throws MissingReferenceError when the model has no reference density.
FitScore fit_and_score(std::span<EstimateRecord> records, const Model& model);

// Full sweep over k_values and replications; averages CE/AMRP/EARP/a_hat
// per (estimator, k) cell. When output_path is set, writes
// <output_path>_records.csv and <output_path>_summary.csv (byte-identical
// across reruns once timestamp is disabled).
SweepSummary k_sweep(const ExperimentConfig& cfg);

// CSV schema helpers (exact column order is part of the contract).
std::string records_csv_header();
std::string record_csv_row(const EstimateRecord& rec);
std::string summary_csv_header();
std::string summary_csv_row(ModelId model, const SweepCell& cell);

}  // namespace refprior

#endif
