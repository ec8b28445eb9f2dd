// sswarm: benchmark CLI for the semi-supervised PSO classifier and its
// comparison models.
//
//   sswarm bench --config cfg.json         full protocol run
//   sswarm run --dataset d.csv ...         single experiment
//   sswarm fit / sswarm predict            train and apply a saved model
//
// Exit codes: 0 success, 1 config/data error, 2 partial failures recorded.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sswarm/harness.hpp"
#include "sswarm/model_io.hpp"
#include "sswarm/sslpso.hpp"

namespace {

using namespace sswarm;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t pos = csv.find(',', start);
    if (pos == std::string::npos) {
      if (start < csv.size()) out.push_back(csv.substr(start));
      break;
    }
    if (pos > start) out.push_back(csv.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

harness::RangeSpec parse_fraction(const std::string& text) {
  const std::size_t colon = text.find(':');
  harness::RangeSpec range;
  if (colon == std::string::npos) {
    range.low = range.high = std::stod(text);
  } else {
    range.low = std::stod(text.substr(0, colon));
    range.high = std::stod(text.substr(colon + 1));
  }
  return range;
}

int finish_experiment(const harness::ExperimentConfig& cfg) {
  const harness::EvaluationReport report = harness::run_experiment(cfg);
  const auto files = harness::emit_report(report, cfg.output_dir);
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  int failures = 0;
  for (const auto& row : report.rows) failures += row.ok ? 0 : 1;
  if (failures > 0) {
    std::cerr << failures << " of " << report.rows.size() << " rows failed (see report.json)\n";
    return 2;
  }
  return 0;
}

struct FitArgs {
  std::string dataset, label_col, algo = "sspso", model_out;
  std::string categorical, missing = "?";
  double label_frac = 1.0;
  std::uint64_t seed = 1;
  int clusters = 0;
};

int do_fit(const FitArgs& args) {
  CsvOptions options;
  options.label_column = args.label_col;
  options.categorical_columns = split_list(args.categorical);
  options.missing_token = args.missing;

  ColumnCodec codec;
  const Dataset raw = load_csv(args.dataset, options, &codec);
  MinMaxScaler scaler;
  const Dataset data = normalize_minmax(raw, &scaler);
  const SemiSupervisedSplit split = mask_labels(data, args.label_frac, mix64(args.seed, 3));

  model_io::SavedModel saved;
  saved.kind = args.algo;
  saved.codec = codec;
  saved.scaler = scaler;
  saved.label_names = data.label_names;

  swarm::PsoConfig pso;
  pso.seed = mix64(args.seed, 100);

  if (args.algo == "sspso") {
    const int K = args.clusters > 0 ? args.clusters : data.class_count;
    saved.cluster_model = sslpso::fit(split, pso, K);
    std::cout << "fitted sspso: mean silhouette " << saved.cluster_model->fitness_achieved
              << ", " << K << " clusters\n";
  } else if (args.algo == "psc") {
    Matrix train_x(split.labeled_idx.size(), data.feature_count());
    std::vector<int> train_y(split.labeled_idx.size());
    for (std::size_t i = 0; i < split.labeled_idx.size(); ++i) {
      train_x.set_row(i, data.features.row_span(static_cast<std::size_t>(split.labeled_idx[i])));
      train_y[i] = data.labels[static_cast<std::size_t>(split.labeled_idx[i])];
    }
    saved.psc_model = psc::psc_fit(train_x, train_y, data.class_count, pso);
    std::cout << "fitted psc: training fitness " << saved.psc_model->training_fitness << '\n';
  } else {
    throw std::invalid_argument("fit supports --algo sspso or psc");
  }

  model_io::save(args.model_out, saved);
  std::cout << "saved model to " << args.model_out << '\n';
  return 0;
}

struct PredictArgs {
  std::string model, input, out;
};

int do_predict(const PredictArgs& args) {
  const model_io::SavedModel saved = model_io::load(args.model);

  std::ifstream in(args.input);
  if (!in) throw std::runtime_error("cannot open '" + args.input + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty input file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_list(line);

  // map the model's feature columns onto the input header by name
  std::vector<int> source(saved.codec.columns.size(), -1);
  int label_col = -1;
  for (std::size_t c = 0; c < saved.codec.columns.size(); ++c) {
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (header[h] == saved.codec.columns[c].name) source[c] = static_cast<int>(h);
    }
    if (source[c] < 0) {
      throw std::runtime_error("input is missing column '" + saved.codec.columns[c].name + "'");
    }
  }
  for (std::size_t h = 0; h < header.size(); ++h) {
    bool used = false;
    for (int s : source) used |= s == static_cast<int>(h);
    if (!used) label_col = static_cast<int>(h);  // treated as the label if codes match
  }

  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot write '" + args.out + "'");
  out << "row,predicted";
  for (const auto& name : saved.label_names) out << ",score_" << name;
  out << '\n';

  std::vector<int> truth, predicted;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    const std::vector<std::string> fields = split_list(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("ragged row " + std::to_string(row_no + 1));
    }
    std::vector<std::string> feature_fields(saved.codec.columns.size());
    for (std::size_t c = 0; c < source.size(); ++c) {
      feature_fields[c] = fields[static_cast<std::size_t>(source[c])];
    }
    std::vector<double> x = saved.codec.encode_row(feature_fields);
    saved.scaler.apply(x);

    int label = 0;
    std::vector<double> scores;
    if (saved.kind == "sspso") {
      const auto pred = sslpso::predict(*saved.cluster_model, x);
      label = pred.label;
      scores = pred.class_scores;
    } else {
      label = psc::psc_predict(*saved.psc_model, x);
      scores = psc::psc_scores(*saved.psc_model, x);
    }

    out << row_no << ',' << saved.label_names[static_cast<std::size_t>(label)];
    for (double s : scores) out << ',' << s;
    out << '\n';

    if (label_col >= 0) {
      const std::string& tok = fields[static_cast<std::size_t>(label_col)];
      for (std::size_t c = 0; c < saved.label_names.size(); ++c) {
        if (saved.label_names[c] == tok) {
          truth.push_back(static_cast<int>(c));
          predicted.push_back(label);
        }
      }
    }
    ++row_no;
  }
  std::cout << "predicted " << row_no << " rows -> " << args.out << '\n';
  if (!truth.empty() && truth.size() == row_no) {
    std::cout << "weighted F1 vs '" << header[static_cast<std::size_t>(label_col)]
              << "' column: "
              << metrics::f1_weighted(truth, predicted,
                                      static_cast<int>(saved.label_names.size()))
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-supervised PSO classification benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "full protocol run from a JSON config");
  bench->add_option("--config", config_path, "experiment config (JSON)")->required();
  bench->add_option("--out", bench_out, "override the config's output directory");

  std::string run_dataset, run_label_col, run_algos = "dtree,knn,labelprop,sspso";
  std::string run_frac = "0.1", run_out = "out", run_categorical, run_missing = "?";
  int run_runs = 1, run_k = 3, run_clusters = 0;
  std::uint64_t run_seed = 1;
  double run_holdout = 0.0;
  auto* run = app.add_subcommand("run", "single experiment");
  run->add_option("--dataset", run_dataset, "CSV path")->required();
  run->add_option("--label-col", run_label_col, "label column name or index")->required();
  run->add_option("--algo", run_algos, "comma-separated algorithm tags");
  run->add_option("--label-frac", run_frac, "label fraction x or lo:hi");
  run->add_option("--runs", run_runs, "runs per range");
  run->add_option("--seed", run_seed, "master seed");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--k", run_k, "k for knn");
  run->add_option("--K", run_clusters, "cluster count for sspso (default: class count)");
  run->add_option("--holdout", run_holdout, "held-out fraction for inductive evaluation");
  run->add_option("--categorical", run_categorical, "comma-separated categorical columns");
  run->add_option("--missing", run_missing, "missing-value token");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "train and serialize a model");
  fit->add_option("--dataset", fit_args.dataset)->required();
  fit->add_option("--label-col", fit_args.label_col)->required();
  fit->add_option("--algo", fit_args.algo, "sspso or psc");
  fit->add_option("--label-frac", fit_args.label_frac, "labeled fraction used for training");
  fit->add_option("--seed", fit_args.seed);
  fit->add_option("--K", fit_args.clusters, "cluster count for sspso");
  fit->add_option("--model-out", fit_args.model_out)->required();
  fit->add_option("--categorical", fit_args.categorical);
  fit->add_option("--missing", fit_args.missing);

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "apply a serialized model to a CSV");
  predict->add_option("--model", predict_args.model)->required();
  predict->add_option("--input", predict_args.input)->required();
  predict->add_option("--out", predict_args.out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      harness::ExperimentConfig cfg = harness::config_from_json_file(config_path);
      if (!bench_out.empty()) cfg.output_dir = bench_out;
      return finish_experiment(cfg);
    }
    if (run->parsed()) {
      harness::ExperimentConfig cfg;
      harness::DatasetSpec spec;
      spec.name = std::filesystem::path(run_dataset).stem().string();
      spec.path = run_dataset;
      spec.label_column = run_label_col;
      spec.categorical_columns = split_list(run_categorical);
      spec.missing_token = run_missing;
      cfg.datasets = {spec};
      cfg.algorithms.clear();
      for (const std::string& tag : split_list(run_algos)) {
        cfg.algorithms.push_back(harness::algorithm_from_name(tag));
      }
      cfg.ranges = {parse_fraction(run_frac)};
      cfg.runs_per_range = run_runs;
      cfg.master_seed = run_seed;
      cfg.output_dir = run_out;
      cfg.params.knn_k = run_k;
      cfg.params.cluster_count = run_clusters;
      cfg.params.holdout = run_holdout;
      return finish_experiment(cfg);
    }
    if (fit->parsed()) return do_fit(fit_args);
    if (predict->parsed()) return do_predict(predict_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
