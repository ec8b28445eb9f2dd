#pragma once

// Benchmark harness: repeated runs across label-fraction ranges, several
// algorithms, several datasets, with deterministic per-run seeds and
// CSV/JSON report emission.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sswarm/baselines.hpp"
#include "sswarm/dataset.hpp"
#include "sswarm/metrics.hpp"
#include "sswarm/psc.hpp"
#include "sswarm/swarm.hpp"

namespace sswarm::harness {

enum class Algorithm { dtree, knn, labelprop, sspso, psc };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);  // throws on unknown tags

struct DatasetSpec {
  std::string name;
  std::string path;
  std::string label_column;
  std::vector<std::string> categorical_columns;
  std::string missing_token = "?";
};

struct RangeSpec {
  double low = 0.0, high = 0.0;  // label fractions, 0 < low <= high <= 1
};

struct HarnessParams {
  swarm::PsoConfig pso;                  // seed is overridden per run
  int cluster_count = 0;                 // 0 -> the dataset's class count
  int knn_k = 3;
  baselines::LabelPropConfig labelprop;
  psc::PscOptions psc_options;
  double holdout = 0.0;                  // > 0 switches to inductive evaluation
  bool record_wall_time = true;          // false writes 0 (for byte-stable output)
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Algorithm> algorithms;
  std::vector<RangeSpec> ranges;
  int runs_per_range = 30;
  std::uint64_t master_seed = 1;
  HarnessParams params;
  std::string output_dir = "out";

  void validate() const;
};

// JSON round-trip for config files; unspecified fields keep defaults.
ExperimentConfig config_from_json_file(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

struct RunResult {
  int dataset_index = 0;
  int range_index = 0;
  int run_index = 0;
  Algorithm algorithm = Algorithm::dtree;
  std::uint64_t seed = 0;       // per-run derived seed
  double fraction = 0.0;        // drawn label fraction
  std::uint64_t split_hash = 0;

  bool ok = false;
  std::string error;

  double f1_transductive = 0.0;       // headline: weighted F1 on evaluated points
  double f1_all = 0.0;                // weighted F1 over all points
  std::vector<double> f1_class;       // per-class F1 on evaluated points
  bool auc_valid = false;
  double auc = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;  // class 1 positive; only when C == 2
  double wall_ms = 0.0;
  std::vector<metrics::RocPoint> roc;
};

struct Aggregate {
  int dataset_index = 0;
  int range_index = 0;
  Algorithm algorithm = Algorithm::dtree;
  int runs = 0;      // successful rows
  int failures = 0;
  double f1_mean = 0.0, f1_stddev = 0.0;
  double auc_mean = 0.0;
};

struct EvaluationReport {
  ExperimentConfig config;        // resolved values, echoed into the output
  std::vector<RunResult> rows;    // sorted (dataset, algorithm, range, run)
  std::vector<Aggregate> aggregates;

  bool any_failure() const;
};

// Every algorithm sees the identical split within one (dataset, range, run).
// Dataset load errors abort; per-run algorithm errors are recorded as
// failed rows and the experiment continues.
EvaluationReport run_experiment(const ExperimentConfig& cfg);

// Writes rows.csv, table_<low>-<high>.csv per range, roc.csv, and
// report.json under dir. Throws std::runtime_error on unwritable paths.
std::vector<std::filesystem::path> emit_report(const EvaluationReport& report,
                                               const std::filesystem::path& dir);

}  // namespace sswarm::harness
