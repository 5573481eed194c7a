#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rwre/estimators.hpp"
#include "rwre/model.hpp"

namespace rwre {

// Everything a reproducible run needs. Mirrored 1:1 by the flat key=value
// config format (see parse_config / README).
struct ExperimentConfig {
    FamilyKind family = FamilyKind::Temkin;
    std::vector<double> true_free = {0.3};
    std::vector<std::int64_t> n_grid = {10000, 30000, 100000};
    int replicates = 100;
    std::uint64_t seed = 20240901;
    std::vector<EstimatorKind> estimators = {EstimatorKind::MPLE};
    std::int64_t x_max = 100000;
    double delta = 0.3;
    double eps0 = 0.02;
    double optim_tol = 1e-6;
    int restarts = 5;
    int valley_m = 100;          // infinite-valley window radius
    int valley_samples = 2000;   // Monte Carlo draws per candidate
    std::vector<std::vector<double>> candidates;  // support candidates for `limit`
    std::string out_path;
    int workers = 4;
    bool timing = false;  // measured wall times in the CSV break byte determinism

    ModelFamily make_family() const;
    ThetaParams true_theta() const;

    void validate() const;
};

// Reads `key = value` lines; '#' starts a comment. Unknown keys are an error.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// One output row of an experiment run.
struct EstimateRecord {
    int replicate = 0;
    std::uint64_t seed = 0;  // the replicate's substream seed
    std::int64_t n = 0;
    FamilyKind family = FamilyKind::Temkin;
    EstimatorKind estimator = EstimatorKind::MPLE;
    std::string parameter;
    double truth = 0.0;
    std::optional<double> estimate;
    std::optional<double> criterion;
    std::string status = "ok";  // ok | no-solution | error
    double wall_ms = 0.0;
};

extern const char* kExperimentCsvHeader;

// Runs the full grid: per replicate one environment, one walk extended through
// the largest n, estimates at every grid point. Rows are canonically sorted;
// per-row failures are recorded in `status`, never aborting the batch.
std::vector<EstimateRecord> run_experiment(const ExperimentConfig& config);

void write_records_csv(const std::vector<EstimateRecord>& records,
                       const ExperimentConfig& config, std::ostream& out);

// Parsed back from CSV (used by summarize and the round-trip tests). A wrong
// header throws; malformed data rows are skipped, with one message per row
// appended to `issues` when provided.
std::vector<EstimateRecord> read_records_csv(std::istream& in,
                                             std::vector<std::string>* issues = nullptr);

// Five-number summary per (n, estimator, parameter) with 1.5*IQR outlier
// flagging; quartiles use linear interpolation between order statistics.
struct SummaryRow {
    std::int64_t n = 0;
    std::string estimator;
    std::string parameter;
    std::int64_t count = 0;        // rows with status ok
    std::int64_t failed = 0;       // rows with any other status
    std::int64_t outliers = 0;
    double outlier_fraction = 0.0;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double mae = 0.0;  // mean absolute error vs truth
};

std::vector<SummaryRow> summarize(const std::vector<EstimateRecord>& records, bool trim);
void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out);

// Type-7 sample quantile on sorted data.
double quantile_type7(const std::vector<double>& sorted, double q);

// Limit-functional validation: per candidate support, Monte Carlo samples of
// L_inf against the closed form. CSV rows:
//   candidate,sample_id,l_inf,trunc_bound,branch,closed_form
struct LimitSummary {
    std::vector<double> candidate;
    bool deterministic = true;
    double closed_value = 0.0;
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double mc_variance = 0.0;
    double mean_trunc_bound = 0.0;
    bool agrees = false;
};

std::vector<LimitSummary> limit_run(const ExperimentConfig& config, std::ostream& csv);
void print_limit_summary(const std::vector<LimitSummary>& rows, std::ostream& out);

}  // namespace rwre
