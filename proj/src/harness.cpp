#include "sswarm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sswarm/sslpso.hpp"

namespace sswarm::harness {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr Algorithm kCanonicalOrder[] = {Algorithm::dtree, Algorithm::knn, Algorithm::labelprop,
                                         Algorithm::sspso, Algorithm::psc};

int rank_of(Algorithm a) {
  for (int i = 0; i < 5; ++i) {
    if (kCanonicalOrder[i] == a) return i;
  }
  return 5;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::uint64_t fnv1a(std::span<const int> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int v : values) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= static_cast<std::uint64_t>((static_cast<std::uint32_t>(v) >> (8 * byte)) & 0xff);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

Matrix rows_subset(const Matrix& m, std::span<const int> idx) {
  Matrix out(idx.size(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.set_row(i, m.row_span(static_cast<std::size_t>(idx[i])));
  }
  return out;
}

std::vector<int> labels_subset(std::span<const int> labels, std::span<const int> idx) {
  std::vector<int> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = labels[static_cast<std::size_t>(idx[i])];
  return out;
}

struct AlgoOutput {
  std::vector<int> eval_pred;   // predictions on the evaluation set
  Matrix eval_scores;           // evaluation set x class scores
  std::vector<int> full_pred;   // predictions over all points (transductive mode)
};

// ---- transductive evaluation on the split's unlabeled points ----

AlgoOutput eval_sspso(const SemiSupervisedSplit& split, const HarnessParams& params,
                      std::uint64_t algo_seed) {
  const Dataset& data = split.data();
  swarm::PsoConfig pso = params.pso;
  pso.seed = algo_seed;
  const int K = params.cluster_count > 0 ? params.cluster_count : data.class_count;
  const sslpso::ClusterLabelModel model = sslpso::fit(split, pso, K);

  AlgoOutput out;
  out.eval_pred = sslpso::resolve_impure(model, split);
  out.eval_scores = Matrix(split.unlabeled_idx.size(), static_cast<std::size_t>(data.class_count));
  for (std::size_t u = 0; u < split.unlabeled_idx.size(); ++u) {
    const auto pred =
        sslpso::predict(model, data.features.row_span(static_cast<std::size_t>(split.unlabeled_idx[u])));
    out.eval_scores.set_row(u, pred.class_scores);
  }
  out.full_pred = sslpso::transduce(model, split);
  return out;
}

AlgoOutput eval_psc(const SemiSupervisedSplit& split, const HarnessParams& params,
                    std::uint64_t algo_seed) {
  const Dataset& data = split.data();
  swarm::PsoConfig pso = params.pso;
  pso.seed = algo_seed;
  const Matrix train_x = rows_subset(data.features, split.labeled_idx);
  const std::vector<int> train_y = labels_subset(data.labels, split.labeled_idx);
  const psc::PscModel model =
      psc::psc_fit(train_x, train_y, data.class_count, pso, params.psc_options);

  AlgoOutput out;
  out.eval_pred.resize(split.unlabeled_idx.size());
  out.eval_scores = Matrix(split.unlabeled_idx.size(), static_cast<std::size_t>(data.class_count));
  for (std::size_t u = 0; u < split.unlabeled_idx.size(); ++u) {
    const auto x = data.features.row_span(static_cast<std::size_t>(split.unlabeled_idx[u]));
    out.eval_pred[u] = psc::psc_predict(model, x);
    out.eval_scores.set_row(u, psc::psc_scores(model, x));
  }
  out.full_pred.resize(data.sample_count());
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    out.full_pred[i] = psc::psc_predict(model, data.features.row_span(i));
  }
  return out;
}

AlgoOutput eval_knn(const SemiSupervisedSplit& split, const HarnessParams& params) {
  const Dataset& data = split.data();
  const Matrix train_x = rows_subset(data.features, split.labeled_idx);
  const std::vector<int> train_y = labels_subset(data.labels, split.labeled_idx);
  const int k = std::min<int>(params.knn_k, static_cast<int>(train_y.size()));

  AlgoOutput out;
  out.eval_pred.resize(split.unlabeled_idx.size());
  out.eval_scores = Matrix(split.unlabeled_idx.size(), static_cast<std::size_t>(data.class_count));
  for (std::size_t u = 0; u < split.unlabeled_idx.size(); ++u) {
    const auto x = data.features.row_span(static_cast<std::size_t>(split.unlabeled_idx[u]));
    out.eval_pred[u] = baselines::knn_predict(train_x, train_y, x, k);
    out.eval_scores.set_row(u, baselines::knn_scores(train_x, train_y, data.class_count, x, k));
  }
  out.full_pred.resize(data.sample_count());
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    out.full_pred[i] = baselines::knn_predict(train_x, train_y, data.features.row_span(i), k);
  }
  return out;
}

AlgoOutput eval_dtree(const SemiSupervisedSplit& split) {
  const Dataset& data = split.data();
  const Matrix train_x = rows_subset(data.features, split.labeled_idx);
  const std::vector<int> train_y = labels_subset(data.labels, split.labeled_idx);
  baselines::DecisionTree tree;
  tree.fit(train_x, train_y, data.class_count);

  AlgoOutput out;
  out.eval_pred.resize(split.unlabeled_idx.size());
  out.eval_scores = Matrix(split.unlabeled_idx.size(), static_cast<std::size_t>(data.class_count));
  for (std::size_t u = 0; u < split.unlabeled_idx.size(); ++u) {
    const auto x = data.features.row_span(static_cast<std::size_t>(split.unlabeled_idx[u]));
    out.eval_pred[u] = tree.predict(x);
    out.eval_scores.set_row(u, tree.scores(x));
  }
  out.full_pred.resize(data.sample_count());
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    out.full_pred[i] = tree.predict(data.features.row_span(i));
  }
  return out;
}

AlgoOutput eval_labelprop(const SemiSupervisedSplit& split, const HarnessParams& params) {
  const Dataset& data = split.data();
  const auto result = baselines::labelprop_transduce(split, params.labelprop);

  AlgoOutput out;
  out.eval_pred.resize(split.unlabeled_idx.size());
  out.eval_scores = Matrix(split.unlabeled_idx.size(), static_cast<std::size_t>(data.class_count));
  for (std::size_t u = 0; u < split.unlabeled_idx.size(); ++u) {
    const std::size_t row = static_cast<std::size_t>(split.unlabeled_idx[u]);
    out.eval_pred[u] = result.labels[row];
    out.eval_scores.set_row(u, result.scores.row_span(row));
  }
  out.full_pred = result.labels;
  return out;
}

AlgoOutput evaluate_algorithm(Algorithm algo, const SemiSupervisedSplit& split,
                              const HarnessParams& params, std::uint64_t algo_seed) {
  switch (algo) {
    case Algorithm::sspso:
      return eval_sspso(split, params, algo_seed);
    case Algorithm::psc:
      return eval_psc(split, params, algo_seed);
    case Algorithm::knn:
      return eval_knn(split, params);
    case Algorithm::dtree:
      return eval_dtree(split);
    case Algorithm::labelprop:
      return eval_labelprop(split, params);
  }
  throw std::logic_error("unhandled algorithm");
}

// ---- inductive evaluation on a held-out stratified test set ----

struct HoldoutContext {
  Dataset train_data;
  std::vector<int> test_idx;
};

AlgoOutput evaluate_holdout(Algorithm algo, const HoldoutContext& ctx, const Dataset& full,
                            const SemiSupervisedSplit& train_split, const HarnessParams& params,
                            std::uint64_t algo_seed) {
  const std::size_t n_test = ctx.test_idx.size();
  AlgoOutput out;
  out.eval_pred.resize(n_test);
  out.eval_scores = Matrix(n_test, static_cast<std::size_t>(full.class_count));

  auto fill = [&](auto&& predict_one) {
    for (std::size_t t = 0; t < n_test; ++t) {
      const auto x = full.features.row_span(static_cast<std::size_t>(ctx.test_idx[t]));
      auto [label, scores] = predict_one(x);
      out.eval_pred[t] = label;
      out.eval_scores.set_row(t, scores);
    }
  };

  switch (algo) {
    case Algorithm::sspso: {
      swarm::PsoConfig pso = params.pso;
      pso.seed = algo_seed;
      const int K = params.cluster_count > 0 ? params.cluster_count : full.class_count;
      const auto model = sslpso::fit(train_split, pso, K);
      fill([&](std::span<const double> x) {
        const auto p = sslpso::predict(model, x);
        return std::pair{p.label, p.class_scores};
      });
      break;
    }
    case Algorithm::psc: {
      swarm::PsoConfig pso = params.pso;
      pso.seed = algo_seed;
      const Matrix train_x = rows_subset(ctx.train_data.features, train_split.labeled_idx);
      const auto train_y = labels_subset(ctx.train_data.labels, train_split.labeled_idx);
      const auto model = psc::psc_fit(train_x, train_y, full.class_count, pso, params.psc_options);
      fill([&](std::span<const double> x) {
        return std::pair{psc::psc_predict(model, x), psc::psc_scores(model, x)};
      });
      break;
    }
    case Algorithm::knn: {
      const Matrix train_x = rows_subset(ctx.train_data.features, train_split.labeled_idx);
      const auto train_y = labels_subset(ctx.train_data.labels, train_split.labeled_idx);
      const int k = std::min<int>(params.knn_k, static_cast<int>(train_y.size()));
      fill([&](std::span<const double> x) {
        return std::pair{baselines::knn_predict(train_x, train_y, x, k),
                         baselines::knn_scores(train_x, train_y, full.class_count, x, k)};
      });
      break;
    }
    case Algorithm::dtree: {
      const Matrix train_x = rows_subset(ctx.train_data.features, train_split.labeled_idx);
      const auto train_y = labels_subset(ctx.train_data.labels, train_split.labeled_idx);
      baselines::DecisionTree tree;
      tree.fit(train_x, train_y, full.class_count);
      fill([&](std::span<const double> x) {
        return std::pair{tree.predict(x), tree.scores(x)};
      });
      break;
    }
    case Algorithm::labelprop: {
      // transduce the training part, then classify test points by the
      // nearest training row carrying a given-or-propagated label
      const auto result = baselines::labelprop_transduce(train_split, params.labelprop);
      const Dataset& train = ctx.train_data;
      fill([&](std::span<const double> x) {
        std::size_t best = 0;
        double best_d = squared_distance(train.features.row_span(0), x);
        for (std::size_t i = 1; i < train.features.rows(); ++i) {
          const double dist = squared_distance(train.features.row_span(i), x);
          if (dist < best_d) {
            best_d = dist;
            best = i;
          }
        }
        std::vector<double> scores(result.scores.row(best),
                                   result.scores.row(best) + result.scores.cols());
        return std::pair{result.labels[best], scores};
      });
      break;
    }
  }
  out.full_pred = out.eval_pred;
  return out;
}

void score_row(RunResult& row, std::span<const int> eval_truth, const AlgoOutput& output,
               std::span<const int> full_truth, int class_count) {
  row.f1_transductive = metrics::f1_weighted(eval_truth, output.eval_pred, class_count);
  const auto cm = metrics::confusion_matrix(eval_truth, output.eval_pred, class_count);
  row.f1_class = metrics::f1_per_class(cm);
  if (!output.full_pred.empty() && full_truth.size() == output.full_pred.size()) {
    row.f1_all = metrics::f1_weighted(full_truth, output.full_pred, class_count);
  } else {
    row.f1_all = row.f1_transductive;
  }
  if (class_count == 2) {
    row.tp = cm.at(1, 1);
    row.fp = cm.at(0, 1);
    row.fn = cm.at(1, 0);
    row.tn = cm.at(0, 0);
    std::vector<double> positive_scores(eval_truth.size());
    for (std::size_t i = 0; i < eval_truth.size(); ++i) {
      positive_scores[i] = output.eval_scores(i, 1);
    }
    bool both = false, seen0 = false, seen1 = false;
    for (int t : eval_truth) {
      seen0 |= t == 0;
      seen1 |= t == 1;
    }
    both = seen0 && seen1;
    if (both) {
      const auto curve = metrics::roc_auc(eval_truth, positive_scores);
      row.auc = curve.auc;
      row.auc_valid = true;
      row.roc = curve.points;
    }
  }
  row.ok = true;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::dtree:
      return "dtree";
    case Algorithm::knn:
      return "knn";
    case Algorithm::labelprop:
      return "labelprop";
    case Algorithm::sspso:
      return "sspso";
    case Algorithm::psc:
      return "psc";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  for (Algorithm a : kCanonicalOrder) {
    if (name == algorithm_name(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm tag '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw std::invalid_argument("no datasets configured");
  if (ranges.empty()) throw std::invalid_argument("no label-fraction ranges configured");
  for (const RangeSpec& r : ranges) {
    if (!(r.low > 0.0) || r.low > r.high || r.high > 1.0) {
      throw std::invalid_argument("ranges must satisfy 0 < low <= high <= 1");
    }
  }
  if (runs_per_range < 1) throw std::invalid_argument("runs_per_range must be at least 1");
  if (params.holdout < 0.0 || params.holdout >= 1.0) {
    throw std::invalid_argument("holdout must lie in [0, 1)");
  }
  params.pso.validate();
}

ExperimentConfig config_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("config parse error: " + std::string(e.what()));
  }

  ExperimentConfig cfg;
  for (const auto& d : j.at("datasets")) {
    DatasetSpec spec;
    spec.name = d.at("name").get<std::string>();
    spec.path = d.at("path").get<std::string>();
    spec.label_column = d.at("label_column").get<std::string>();
    if (d.contains("categorical_columns")) {
      spec.categorical_columns = d["categorical_columns"].get<std::vector<std::string>>();
    }
    if (d.contains("missing_token")) spec.missing_token = d["missing_token"].get<std::string>();
    cfg.datasets.push_back(std::move(spec));
  }
  if (j.contains("algorithms")) {
    cfg.algorithms.clear();
    for (const auto& a : j["algorithms"]) {
      cfg.algorithms.push_back(algorithm_from_name(a.get<std::string>()));
    }
  } else {
    cfg.algorithms = {Algorithm::dtree, Algorithm::knn, Algorithm::labelprop, Algorithm::sspso};
  }
  for (const auto& r : j.at("ranges")) {
    cfg.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  }
  cfg.runs_per_range = j.value("runs_per_range", 30);
  cfg.master_seed = j.value("master_seed", std::uint64_t{1});
  cfg.output_dir = j.value("output_dir", std::string("out"));

  if (j.contains("params")) {
    const auto& p = j["params"];
    if (p.contains("pso")) {
      const auto& q = p["pso"];
      cfg.params.pso.inertia = q.value("inertia", cfg.params.pso.inertia);
      cfg.params.pso.cognitive = q.value("cognitive", cfg.params.pso.cognitive);
      cfg.params.pso.social = q.value("social", cfg.params.pso.social);
      cfg.params.pso.particles = q.value("particles", cfg.params.pso.particles);
      cfg.params.pso.max_iterations = q.value("max_iterations", cfg.params.pso.max_iterations);
      cfg.params.pso.stall_window = q.value("stall_window", cfg.params.pso.stall_window);
      cfg.params.pso.stall_tolerance = q.value("stall_tolerance", cfg.params.pso.stall_tolerance);
      cfg.params.pso.max_velocity = q.value("max_velocity", cfg.params.pso.max_velocity);
    }
    cfg.params.cluster_count = p.value("cluster_count", cfg.params.cluster_count);
    cfg.params.knn_k = p.value("knn_k", cfg.params.knn_k);
    if (p.contains("labelprop")) {
      const auto& q = p["labelprop"];
      cfg.params.labelprop.sigma = q.value("sigma", cfg.params.labelprop.sigma);
      cfg.params.labelprop.clamp = q.value("clamp", cfg.params.labelprop.clamp);
      cfg.params.labelprop.max_sweeps = q.value("max_sweeps", cfg.params.labelprop.max_sweeps);
      cfg.params.labelprop.tolerance = q.value("tolerance", cfg.params.labelprop.tolerance);
    }
    if (p.contains("psc")) {
      const auto& q = p["psc"];
      const std::string variant = q.value("variant", std::string("hybrid"));
      if (variant == "misclassification") {
        cfg.params.psc_options.variant = psc::FitnessVariant::misclassification;
      } else if (variant == "mean_distance") {
        cfg.params.psc_options.variant = psc::FitnessVariant::mean_distance;
      } else if (variant == "hybrid") {
        cfg.params.psc_options.variant = psc::FitnessVariant::hybrid;
      } else {
        throw std::runtime_error("unknown psc variant '" + variant + "'");
      }
      cfg.params.psc_options.distance_to_nearest = q.value("distance_to_nearest", false);
    }
    cfg.params.holdout = p.value("holdout", cfg.params.holdout);
    cfg.params.record_wall_time = p.value("record_wall_time", cfg.params.record_wall_time);
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["datasets"] = ordered_json::array();
  for (const auto& d : cfg.datasets) {
    j["datasets"].push_back({{"name", d.name},
                             {"path", d.path},
                             {"label_column", d.label_column},
                             {"categorical_columns", d.categorical_columns},
                             {"missing_token", d.missing_token}});
  }
  j["algorithms"] = ordered_json::array();
  for (Algorithm a : cfg.algorithms) j["algorithms"].push_back(algorithm_name(a));
  j["ranges"] = ordered_json::array();
  for (const auto& r : cfg.ranges) j["ranges"].push_back({r.low, r.high});
  j["runs_per_range"] = cfg.runs_per_range;
  j["master_seed"] = cfg.master_seed;
  j["output_dir"] = cfg.output_dir;
  j["params"] = {
      {"pso",
       {{"inertia", cfg.params.pso.inertia},
        {"cognitive", cfg.params.pso.cognitive},
        {"social", cfg.params.pso.social},
        {"particles", cfg.params.pso.particles},
        {"max_iterations", cfg.params.pso.max_iterations},
        {"stall_window", cfg.params.pso.stall_window},
        {"stall_tolerance", cfg.params.pso.stall_tolerance},
        {"max_velocity", cfg.params.pso.max_velocity}}},
      {"cluster_count", cfg.params.cluster_count},
      {"knn_k", cfg.params.knn_k},
      {"labelprop",
       {{"sigma", cfg.params.labelprop.sigma},
        {"clamp", cfg.params.labelprop.clamp},
        {"max_sweeps", cfg.params.labelprop.max_sweeps},
        {"tolerance", cfg.params.labelprop.tolerance}}},
      {"psc",
       {{"variant", psc::to_string(cfg.params.psc_options.variant)},
        {"distance_to_nearest", cfg.params.psc_options.distance_to_nearest}}},
      {"holdout", cfg.params.holdout},
      {"record_wall_time", cfg.params.record_wall_time}};
  return j.dump(2);
}

bool EvaluationReport::any_failure() const {
  return std::any_of(rows.begin(), rows.end(), [](const RunResult& r) { return !r.ok; });
}

EvaluationReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  std::vector<Dataset> datasets;
  datasets.reserve(cfg.datasets.size());
  for (const DatasetSpec& spec : cfg.datasets) {
    CsvOptions options;
    options.label_column = spec.label_column;
    options.categorical_columns = spec.categorical_columns;
    options.missing_token = spec.missing_token;
    Dataset raw = load_csv(spec.path, options);
    raw.name = spec.name;
    datasets.push_back(normalize_minmax(raw));
  }

  EvaluationReport report;
  report.config = cfg;

  for (int di = 0; di < static_cast<int>(datasets.size()); ++di) {
    const Dataset& data = datasets[static_cast<std::size_t>(di)];
    for (int ri = 0; ri < static_cast<int>(cfg.ranges.size()); ++ri) {
      const RangeSpec& range = cfg.ranges[static_cast<std::size_t>(ri)];
      for (int run = 0; run < cfg.runs_per_range; ++run) {
        const std::uint64_t run_seed =
            mix64(cfg.master_seed, static_cast<std::uint64_t>(di) + 1,
                  static_cast<std::uint64_t>(ri) + 1, static_cast<std::uint64_t>(run) + 1);
        Rng fraction_rng(mix64(run_seed, 1));
        const double fraction = range.low + (range.high - range.low) * fraction_rng.uniform01();

        // holdout carve-out happens before masking so the test set never
        // leaks into training
        HoldoutContext holdout_ctx;
        const Dataset* active = &data;
        if (cfg.params.holdout > 0.0) {
          const SemiSupervisedSplit carve =
              mask_labels(data, cfg.params.holdout, mix64(run_seed, 2));
          holdout_ctx.test_idx = carve.labeled_idx;
          holdout_ctx.train_data.name = data.name;
          holdout_ctx.train_data.class_count = data.class_count;
          holdout_ctx.train_data.label_names = data.label_names;
          holdout_ctx.train_data.features = rows_subset(data.features, carve.unlabeled_idx);
          holdout_ctx.train_data.labels = labels_subset(data.labels, carve.unlabeled_idx);
          active = &holdout_ctx.train_data;
        }

        const SemiSupervisedSplit split = mask_labels(*active, fraction, mix64(run_seed, 3));
        const std::uint64_t split_hash = fnv1a(split.labeled_idx);

        const std::vector<int> eval_truth =
            cfg.params.holdout > 0.0 ? labels_subset(data.labels, holdout_ctx.test_idx)
                                     : labels_subset(data.labels, split.unlabeled_idx);

        for (Algorithm algo : cfg.algorithms) {
          RunResult row;
          row.dataset_index = di;
          row.range_index = ri;
          row.run_index = run;
          row.algorithm = algo;
          row.seed = run_seed;
          row.fraction = fraction;
          row.split_hash = split_hash;

          const auto start = std::chrono::steady_clock::now();
          try {
            if (eval_truth.empty()) throw std::runtime_error("empty evaluation set");
            const std::uint64_t algo_seed =
                mix64(run_seed, 100 + static_cast<std::uint64_t>(rank_of(algo)));
            const AlgoOutput output =
                cfg.params.holdout > 0.0
                    ? evaluate_holdout(algo, holdout_ctx, data, split, cfg.params, algo_seed)
                    : evaluate_algorithm(algo, split, cfg.params, algo_seed);
            score_row(row, eval_truth, output, data.labels, data.class_count);
          } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
          }
          const auto stop = std::chrono::steady_clock::now();
          row.wall_ms = cfg.params.record_wall_time
                            ? std::chrono::duration<double, std::milli>(stop - start).count()
                            : 0.0;
          report.rows.push_back(std::move(row));
        }
      }
    }
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const RunResult& a, const RunResult& b) {
                     return std::tuple(a.dataset_index, rank_of(a.algorithm), a.range_index,
                                       a.run_index) <
                            std::tuple(b.dataset_index, rank_of(b.algorithm), b.range_index,
                                       b.run_index);
                   });

  // aggregates, recomputable from the raw rows
  for (int di = 0; di < static_cast<int>(cfg.datasets.size()); ++di) {
    for (Algorithm algo : kCanonicalOrder) {
      if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), algo) == cfg.algorithms.end()) {
        continue;
      }
      for (int ri = 0; ri < static_cast<int>(cfg.ranges.size()); ++ri) {
        Aggregate agg;
        agg.dataset_index = di;
        agg.range_index = ri;
        agg.algorithm = algo;
        double sum = 0.0, auc_sum = 0.0;
        int auc_n = 0;
        std::vector<double> values;
        for (const RunResult& row : report.rows) {
          if (row.dataset_index != di || row.range_index != ri || row.algorithm != algo) continue;
          if (!row.ok) {
            ++agg.failures;
            continue;
          }
          ++agg.runs;
          sum += row.f1_transductive;
          values.push_back(row.f1_transductive);
          if (row.auc_valid) {
            auc_sum += row.auc;
            ++auc_n;
          }
        }
        if (agg.runs > 0) {
          agg.f1_mean = sum / agg.runs;
          double sq = 0.0;
          for (double v : values) sq += (v - agg.f1_mean) * (v - agg.f1_mean);
          agg.f1_stddev = agg.runs > 1 ? std::sqrt(sq / (agg.runs - 1)) : 0.0;
        }
        if (auc_n > 0) agg.auc_mean = auc_sum / auc_n;
        report.aggregates.push_back(agg);
      }
    }
  }
  return report;
}

std::vector<std::filesystem::path> emit_report(const EvaluationReport& report,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const ExperimentConfig& cfg = report.config;
  std::vector<std::filesystem::path> written;

  auto open = [&](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
  };

  // (a) raw rows
  {
    const auto path = dir / "rows.csv";
    std::ofstream out = open(path);
    out << "dataset,algorithm,range_low,range_high,run,seed,fraction,f1_weighted,"
           "f1_class0,f1_class1,auc,tp,fp,fn,tn,wall_ms\n";
    for (const RunResult& row : report.rows) {
      const RangeSpec& range = cfg.ranges[static_cast<std::size_t>(row.range_index)];
      out << cfg.datasets[static_cast<std::size_t>(row.dataset_index)].name << ','
          << algorithm_name(row.algorithm) << ',' << fmt(range.low) << ',' << fmt(range.high)
          << ',' << row.run_index << ',' << row.seed << ',' << fmt(row.fraction) << ',';
      if (row.ok) {
        out << fmt(row.f1_transductive) << ','
            << (row.f1_class.size() > 0 ? fmt(row.f1_class[0]) : "") << ','
            << (row.f1_class.size() > 1 ? fmt(row.f1_class[1]) : "") << ','
            << (row.auc_valid ? fmt(row.auc) : "") << ',' << row.tp << ',' << row.fp << ','
            << row.fn << ',' << row.tn << ',' << fmt(row.wall_ms) << '\n';
      } else {
        out << ",,,,,,,," << fmt(row.wall_ms) << '\n';
      }
    }
    written.push_back(path);
  }

  // (b) per-range aggregate tables, datasets x algorithms, mean F1 to 2 dp
  for (int ri = 0; ri < static_cast<int>(cfg.ranges.size()); ++ri) {
    const RangeSpec& range = cfg.ranges[static_cast<std::size_t>(ri)];
    const auto path =
        dir / ("table_" + fmt2(range.low) + "-" + fmt2(range.high) + ".csv");
    std::ofstream out = open(path);
    out << "dataset";
    std::vector<Algorithm> columns;
    for (Algorithm a : kCanonicalOrder) {
      if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), a) != cfg.algorithms.end()) {
        columns.push_back(a);
        out << ',' << algorithm_name(a);
      }
    }
    out << '\n';
    for (int di = 0; di < static_cast<int>(cfg.datasets.size()); ++di) {
      out << cfg.datasets[static_cast<std::size_t>(di)].name;
      for (Algorithm a : columns) {
        const auto it = std::find_if(report.aggregates.begin(), report.aggregates.end(),
                                     [&](const Aggregate& g) {
                                       return g.dataset_index == di && g.range_index == ri &&
                                              g.algorithm == a;
                                     });
        out << ',';
        if (it != report.aggregates.end() && it->runs > 0) out << fmt2(it->f1_mean);
      }
      out << '\n';
    }
    written.push_back(path);
  }

  // (c) ROC points
  {
    const auto path = dir / "roc.csv";
    std::ofstream out = open(path);
    out << "dataset,algorithm,range_low,range_high,run,fpr,tpr,threshold\n";
    for (const RunResult& row : report.rows) {
      if (!row.ok || !row.auc_valid) continue;
      const RangeSpec& range = cfg.ranges[static_cast<std::size_t>(row.range_index)];
      for (const metrics::RocPoint& pt : row.roc) {
        out << cfg.datasets[static_cast<std::size_t>(row.dataset_index)].name << ','
            << algorithm_name(row.algorithm) << ',' << fmt(range.low) << ',' << fmt(range.high)
            << ',' << row.run_index << ',' << fmt(pt.fpr) << ',' << fmt(pt.tpr) << ','
            << (std::isfinite(pt.threshold)
                    ? fmt(pt.threshold)
                    : (pt.threshold > 0 ? std::string("inf") : std::string("-inf")))
            << '\n';
      }
    }
    written.push_back(path);
  }

  // (d) JSON mirror with full precision
  {
    const auto path = dir / "report.json";
    std::ofstream out = open(path);
    ordered_json j;
    j["config"] = ordered_json::parse(config_to_json(cfg));
    j["rows"] = ordered_json::array();
    for (const RunResult& row : report.rows) {
      const RangeSpec& range = cfg.ranges[static_cast<std::size_t>(row.range_index)];
      ordered_json r{{"dataset", cfg.datasets[static_cast<std::size_t>(row.dataset_index)].name},
                     {"algorithm", algorithm_name(row.algorithm)},
                     {"range_low", range.low},
                     {"range_high", range.high},
                     {"run", row.run_index},
                     {"seed", row.seed},
                     {"fraction", row.fraction},
                     {"split_hash", row.split_hash},
                     {"ok", row.ok}};
      if (row.ok) {
        r["f1_transductive"] = row.f1_transductive;
        r["f1_all"] = row.f1_all;
        r["f1_per_class"] = row.f1_class;
        if (row.auc_valid) {
          r["auc"] = row.auc;
          r["confusion"] = {{"tp", row.tp}, {"fp", row.fp}, {"fn", row.fn}, {"tn", row.tn}};
        }
      } else {
        r["error"] = row.error;
      }
      r["wall_ms"] = row.wall_ms;
      j["rows"].push_back(std::move(r));
    }
    j["aggregates"] = ordered_json::array();
    for (const Aggregate& agg : report.aggregates) {
      j["aggregates"].push_back(
          {{"dataset", cfg.datasets[static_cast<std::size_t>(agg.dataset_index)].name},
           {"algorithm", algorithm_name(agg.algorithm)},
           {"range_low", cfg.ranges[static_cast<std::size_t>(agg.range_index)].low},
           {"range_high", cfg.ranges[static_cast<std::size_t>(agg.range_index)].high},
           {"runs", agg.runs},
           {"failures", agg.failures},
           {"f1_mean", agg.f1_mean},
           {"f1_stddev", agg.f1_stddev},
           {"auc_mean", agg.auc_mean}});
    }
    out << j.dump(2) << '\n';
    written.push_back(path);
  }
  return written;
}

}  // namespace sswarm::harness
