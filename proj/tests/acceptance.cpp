// Acceptance suite: one pass/fail line per criterion, with every tolerance
// pinned in code. Criteria 6 and 7 need the UCI census CSVs on disk (see
// tools/fetch_datasets.sh); when the files are absent they are reported as
// SKIP and the process exits with code 77 so the test runner can mark them
// skipped rather than silently passing.
//
//   sswarm_acceptance [--data-dir DIR] [--out-dir DIR] [--only core|uci|all]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sswarm/baselines.hpp"
#include "sswarm/dataset.hpp"
#include "sswarm/harness.hpp"
#include "sswarm/metrics.hpp"
#include "sswarm/psc.hpp"
#include "sswarm/rng.hpp"
#include "sswarm/sslpso.hpp"
#include "sswarm/swarm.hpp"

using namespace sswarm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int criterion = 0;
  std::string what;
  enum { pass, fail, skip } status = pass;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
  g_outcomes.push_back({criterion, what, ok ? Outcome::pass : Outcome::fail, detail});
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
}

void report_skip(int criterion, const std::string& what, const std::string& why) {
  g_outcomes.push_back({criterion, what, Outcome::skip, why});
  std::cout << "[SKIP] criterion " << criterion << ": " << what << " (" << why << ")" << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
  Dataset ds;
  ds.name = "synthetic";
  ds.features = Matrix(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) ds.features.set_row(r, rows[r]);
  ds.labels = labels;
  int c = 0;
  for (int y : labels) c = std::max(c, y + 1);
  ds.class_count = c;
  for (int k = 0; k < c; ++k) ds.label_names.push_back(std::to_string(k));
  return ds;
}

SemiSupervisedSplit make_split(const Dataset& ds, std::vector<int> labeled) {
  SemiSupervisedSplit split;
  split.dataset = &ds;
  std::sort(labeled.begin(), labeled.end());
  split.labeled_idx = std::move(labeled);
  std::vector<char> mark(ds.sample_count(), 0);
  for (int i : split.labeled_idx) mark[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = 0; i < ds.sample_count(); ++i) {
    if (!mark[i]) split.unlabeled_idx.push_back(static_cast<int>(i));
  }
  return split;
}

// ---------- criterion 1: silhouette vs a brute-force transcription ----------

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20250511);
  bool all_ok = true;
  std::string first_break;
  for (int instance = 0; instance < 200 && all_ok; ++instance) {
    const std::size_t n = 4 + rng.below(37);           // n <= 40
    const std::size_t d = 1 + rng.below(4);            // d <= 4
    const int K = 2 + static_cast<int>(rng.below(3));  // K in {2,3,4}
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < d; ++f) x(i, f) = rng.uniform01();
    }
    std::vector<int> assign(n);
    int non_empty = 0;
    do {
      for (auto& a : assign) a = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
      std::vector<int> count(static_cast<std::size_t>(K), 0);
      for (int a : assign) ++count[static_cast<std::size_t>(a)];
      non_empty = static_cast<int>(
          std::count_if(count.begin(), count.end(), [](int c) { return c > 0; }));
    } while (non_empty < 2);

    const auto got = metrics::silhouette(x, assign, K);

    // direct transcription: cohesion a(i), separation b(i), s = (b-a)/max
    std::vector<int> count(static_cast<std::size_t>(K), 0);
    for (int a : assign) ++count[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < n && all_ok; ++i) {
      double a_i = 0.0, b_i = 0.0, s_i = 0.0;
      if (count[static_cast<std::size_t>(assign[i])] >= 2) {
        double intra = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || assign[j] != assign[i]) continue;
          double sq = 0.0;
          for (std::size_t f = 0; f < d; ++f) sq += (x(i, f) - x(j, f)) * (x(i, f) - x(j, f));
          intra += std::sqrt(sq);
        }
        a_i = intra / (count[static_cast<std::size_t>(assign[i])] - 1);
        b_i = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
          if (k == assign[i] || count[static_cast<std::size_t>(k)] == 0) continue;
          double inter = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            if (assign[j] != k) continue;
            double sq = 0.0;
            for (std::size_t f = 0; f < d; ++f) sq += (x(i, f) - x(j, f)) * (x(i, f) - x(j, f));
            inter += std::sqrt(sq);
          }
          b_i = std::min(b_i, inter / count[static_cast<std::size_t>(k)]);
        }
        const double denom = std::max(a_i, b_i);
        s_i = denom > 0.0 ? (b_i - a_i) / denom : 0.0;
      }
      if (std::abs(got.per_point[i].a - a_i) > 1e-9 ||
          std::abs(got.per_point[i].b - b_i) > 1e-9 ||
          std::abs(got.per_point[i].s - s_i) > 1e-9) {
        all_ok = false;
        first_break = "instance " + std::to_string(instance);
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(1, "silhouette matches the brute-force oracle on 200 instances (1e-9)",
         all_ok && elapsed < 10.0,
         all_ok ? "elapsed " + std::to_string(elapsed) + "s" : first_break);
}

// ---------- criterion 2: swarm invariants ----------

void criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  swarm::PsoConfig cfg;
  Rng rng(0xACCE5);
  bool bounded = true;

  swarm::Particle p;
  p.position = {0.3, 0.7};
  p.velocity = {0.1, -0.2};
  p.pbest_position = {0.5, 0.5};
  std::vector<double> lbest{0.8, 0.2};
  for (int step = 0; step < 1000; ++step) {
    if (step % 53 == 0) {
      lbest = {rng.uniform01(), rng.uniform01()};
      p.pbest_position = {rng.uniform01(), rng.uniform01()};
    }
    swarm::update_velocity(p, lbest, cfg, rng);
    swarm::update_position(p);
    for (double x : p.position) bounded &= x >= 0.0 && x <= 1.0;
    for (double v : p.velocity) bounded &= std::abs(v) <= cfg.max_velocity;
  }
  report(2, "position stays in the unit box and |v| <= max_velocity over 1000 steps", bounded);

  swarm::Particle still;
  still.position = {0.4, 0.6, 0.1};
  still.velocity = {0.0, 0.0, 0.0};
  still.pbest_position = still.position;
  const std::vector<double> consensus = still.position;
  bool stationary = true;
  for (int step = 0; step < 1000; ++step) {
    swarm::update_velocity(still, consensus, cfg, rng);
    swarm::update_position(still);
    stationary &= still.position == consensus;
  }
  report(2, "a particle at consensus never moves", stationary);

  // lbest monotonicity observed on a real fit trace
  Rng gen(77);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    const int c = i % 2;
    rows.push_back({0.25 * gen.uniform01() + 0.65 * c, 0.25 * gen.uniform01() + 0.65 * c});
    labels.push_back(c);
  }
  const Dataset ds = make_dataset(rows, labels);
  const auto split = make_split(ds, {0, 1, 2, 3});
  swarm::PsoConfig fit_cfg;
  fit_cfg.seed = 5;
  fit_cfg.max_iterations = 60;
  sslpso::FitTrace trace;
  sslpso::fit(split, fit_cfg, 2, &trace);
  bool monotone = !trace.best_fitness_history.empty();
  for (std::size_t t = 1; t < trace.best_fitness_history.size(); ++t) {
    monotone &= trace.best_fitness_history[t] >= trace.best_fitness_history[t - 1];
  }
  const double elapsed = seconds_since(start);
  report(2, "recorded best fitness is non-decreasing", monotone && elapsed < 5.0,
         "elapsed " + std::to_string(elapsed) + "s");
}

// ---------- criterion 3: metric hand cases ----------

void criterion_3() {
  bool ok = true;
  std::string detail;
  auto expect = [&](bool cond, const char* name) {
    if (!cond && ok) {
      ok = false;
      detail = name;
    }
  };

  expect(metrics::f1_weighted(std::vector<int>{0, 1, 1}, std::vector<int>{0, 1, 1}, 2) == 1.0,
         "perfect F1");
  expect(metrics::f1_weighted(std::vector<int>{1, 1, 0, 0}, std::vector<int>{0, 0, 1, 1}, 2) == 0.0,
         "inverted F1");
  expect(std::abs(metrics::f1_weighted(std::vector<int>{1, 1, 1, 0}, std::vector<int>{1, 1, 0, 0},
                                       2) -
                  23.0 / 30.0) < 1e-12,
         "weighted F1 23/30");

  expect(metrics::roc_auc(std::vector<int>{1, 1, 0}, std::vector<double>{0.9, 0.8, 0.1}).auc == 1.0,
         "separating AUC");
  expect(metrics::roc_auc(std::vector<int>{1, 0, 1, 0}, std::vector<double>{0.4, 0.4, 0.4, 0.4})
                 .auc == 0.5,
         "all-ties AUC");
  expect(std::abs(metrics::roc_auc(std::vector<int>{1, 0, 1, 0},
                                   std::vector<double>{0.9, 0.8, 0.4, 0.3})
                      .auc -
                  0.75) < 1e-12,
         "AUC 0.75");

  report(3, "F1 and AUC hand cases reproduce exactly (1e-12)", ok, detail);
}

// ---------- criterion 4: synthetic SSL recovery ----------

void criterion_4() {
  const auto start = std::chrono::steady_clock::now();
  int recovered = 0;
  for (int seed = 0; seed < 30; ++seed) {
    Rng gen(mix64(0xB10B5, static_cast<std::uint64_t>(seed)));
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int blob = 0; blob < 2; ++blob) {
      const double center = blob == 0 ? 0.2 : 0.8;
      for (int i = 0; i < 50; ++i) {
        rows.push_back({std::clamp(center + 0.05 * gen.gaussian(), 0.0, 1.0),
                        std::clamp(center + 0.05 * gen.gaussian(), 0.0, 1.0)});
        labels.push_back(blob);
      }
    }
    const Dataset ds = make_dataset(rows, labels);
    const auto split = mask_labels(ds, 0.02, mix64(0x5EED, static_cast<std::uint64_t>(seed)));
    if (split.labeled_idx.size() != 2) continue;  // one anchor per class

    swarm::PsoConfig cfg;
    cfg.seed = mix64(0xF17, static_cast<std::uint64_t>(seed));
    const auto model = sslpso::fit(split, cfg, 2);
    const auto full = sslpso::transduce(model, split);

    std::vector<int> truth, predicted;
    for (int i : split.unlabeled_idx) {
      truth.push_back(ds.labels[static_cast<std::size_t>(i)]);
      predicted.push_back(full[static_cast<std::size_t>(i)]);
    }
    if (metrics::f1_weighted(truth, predicted, 2) == 1.0) ++recovered;
  }
  const double elapsed = seconds_since(start);
  report(4, "two-blob transductive F1 = 1.0 in >= 29/30 seeds",
         recovered >= 29 && elapsed < 30.0,
         std::to_string(recovered) + "/30, elapsed " + std::to_string(elapsed) + "s");
}

// ---------- criterion 5: desk-scale grid-search equivalence ----------

void criterion_5() {
  const auto start = std::chrono::steady_clock::now();
  int within = 0;
  for (int seed = 0; seed < 30; ++seed) {
    Rng gen(mix64(0xDE5C, static_cast<std::uint64_t>(seed)));
    const double center_a = gen.uniform(0.08, 0.35);
    const double center_b = gen.uniform(0.65, 0.92);
    const std::size_t n_a = 2 + gen.below(5);
    const std::size_t n_b = 2 + gen.below(11 - n_a - 1);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n_a; ++i) {
      rows.push_back({std::clamp(center_a + gen.uniform(-0.06, 0.06), 0.0, 1.0)});
      labels.push_back(0);
    }
    for (std::size_t i = 0; i < n_b; ++i) {
      rows.push_back({std::clamp(center_b + gen.uniform(-0.06, 0.06), 0.0, 1.0)});
      labels.push_back(1);
    }
    const Dataset ds = make_dataset(rows, labels);
    const auto split = make_split(ds, {0, static_cast<int>(n_a)});

    swarm::PsoConfig cfg;
    cfg.seed = mix64(0x6A1D, static_cast<std::uint64_t>(seed));
    double fitted = -2.0;
    try {
      fitted = sslpso::fit(split, cfg, 2).fitness_achieved;
    } catch (const std::exception&) {
      continue;  // counted as a miss
    }

    // dense grid over centroid pairs, step 0.01
    double best = -2.0;
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        Matrix centroids(2, 1);
        centroids(0, 0) = i * 0.01;
        centroids(1, 0) = j * 0.01;
        const auto assign = sslpso::assign_nearest(ds.features, centroids);
        std::vector<int> count(2, 0);
        for (int a : assign) ++count[static_cast<std::size_t>(a)];
        if (count[0] == 0 || count[1] == 0) continue;
        best = std::max(best, metrics::silhouette(ds.features, assign, 2).mean_s);
      }
    }
    if (std::abs(fitted - best) <= 1e-3) ++within;
  }
  const double elapsed = seconds_since(start);
  report(5, "desk-scale fits match 0.01-grid search within 1e-3 in >= 28/30 seeds", within >= 28,
         std::to_string(within) + "/30, elapsed " + std::to_string(elapsed) + "s");
}

// ---------- criterion 8: PSC suite ----------

void criterion_8() {
  bool hand_ok = true;
  {
    Matrix centroids(2, 1);
    centroids(0, 0) = 0.1;
    centroids(1, 0) = 0.9;
    Matrix train(4, 1);
    train(0, 0) = 0.0;
    train(1, 0) = 0.2;
    train(2, 0) = 0.95;
    train(3, 0) = 0.85;
    const std::vector<int> labels{0, 0, 1, 0};  // last point misclassified
    hand_ok &= psc::psc_fitness(psc::FitnessVariant::misclassification, centroids, train,
                                labels) == 25.0;
  }
  {
    Matrix centroids(2, 2);
    centroids.set_row(0, std::vector<double>{0.0, 0.0});
    centroids.set_row(1, std::vector<double>{5.0, 5.0});
    Matrix train(1, 2);
    train.set_row(0, std::vector<double>{2.0, 0.0});
    hand_ok &= psc::psc_fitness(psc::FitnessVariant::mean_distance, centroids, train,
                                std::vector<int>{0}) == 2.0;
  }
  {
    // psi1 = 50, psi2 = 0.3 -> psi3 = 0.4
    Matrix centroids(2, 1);
    centroids(0, 0) = 0.0;
    centroids(1, 0) = 0.5;
    Matrix train(2, 1);
    train(0, 0) = 0.3;
    train(1, 0) = 0.8;
    const std::vector<int> labels{0, 1};
    hand_ok &= std::abs(psc::psc_fitness(psc::FitnessVariant::hybrid, centroids, train, labels) -
                        0.4) < 1e-12;
  }
  report(8, "psi hand cases are exact", hand_ok);

  Rng rng(0xA5C);
  bool identity_ok = true;
  for (int trial = 0; trial < 200 && identity_ok; ++trial) {
    const std::size_t m = 1 + rng.below(15);
    const int C = 2 + static_cast<int>(rng.below(2));
    Matrix centroids(static_cast<std::size_t>(C), 2);
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      centroids(c, 0) = rng.uniform01();
      centroids(c, 1) = rng.uniform01();
    }
    Matrix train(m, 2);
    std::vector<int> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
      train(i, 0) = rng.uniform01();
      train(i, 1) = rng.uniform01();
      labels[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(C)));
    }
    const double p1 = psc::psc_fitness(psc::FitnessVariant::misclassification, centroids, train, labels);
    const double p2 = psc::psc_fitness(psc::FitnessVariant::mean_distance, centroids, train, labels);
    const double p3 = psc::psc_fitness(psc::FitnessVariant::hybrid, centroids, train, labels);
    identity_ok &= p3 == 0.5 * (p1 / 100.0 + p2);
  }
  report(8, "psi3 identity holds under fuzzing", identity_ok);

  int solved = 0;
  Matrix train(4, 1);
  train(0, 0) = 0.0;
  train(1, 0) = 0.1;
  train(2, 0) = 0.9;
  train(3, 0) = 1.0;
  const std::vector<int> labels{0, 0, 1, 1};
  for (int seed = 0; seed < 30; ++seed) {
    swarm::PsoConfig cfg;
    cfg.seed = mix64(0xBAE, static_cast<std::uint64_t>(seed));
    cfg.max_iterations = 200;
    cfg.stall_window = 200;  // let it use the full budget
    psc::PscOptions options;
    options.variant = psc::FitnessVariant::misclassification;
    if (psc::psc_fit(train, labels, 2, cfg, options).training_fitness == 0.0) ++solved;
  }
  report(8, "separable blobs reach psi1 = 0 within 200 iterations in >= 28/30 seeds", solved >= 28,
         std::to_string(solved) + "/30");
}

// ---------- criterion 9: label propagation ----------

void criterion_9() {
  const Dataset ds = make_dataset({{0.0}, {1.0}, {0.1}}, {0, 1, 0});
  const auto split = make_split(ds, {0, 1});

  // clamping holds after every sweep count
  bool clamped = true;
  for (int sweeps = 1; sweeps <= 10; ++sweeps) {
    baselines::LabelPropConfig cfg;
    cfg.sigma = 0.5;
    cfg.max_sweeps = sweeps;
    cfg.tolerance = 0.0;
    const auto result = baselines::labelprop_transduce(split, cfg);
    clamped &= result.labels[0] == 0 && result.labels[1] == 1;
    clamped &= result.scores(0, 0) == 1.0 && result.scores(0, 1) == 0.0;
    clamped &= result.scores(1, 1) == 1.0 && result.scores(1, 0) == 0.0;
  }
  report(9, "labeled rows stay clamped on every sweep", clamped);

  // row-stochastic scores on a larger instance
  Rng gen(0x1AB);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    const int c = i % 2;
    rows.push_back({0.3 * gen.uniform01() + 0.6 * c, gen.uniform01()});
    labels.push_back(c);
  }
  const Dataset big = make_dataset(rows, labels);
  const auto big_split = make_split(big, {0, 1, 2, 3, 4, 5});
  const auto big_result = baselines::labelprop_transduce(big_split, baselines::LabelPropConfig{});
  report(9, "score rows sum to 1 within 1e-9 after every sweep",
         big_result.max_row_sum_error < 1e-9,
         "max deviation " + std::to_string(big_result.max_row_sum_error));

  baselines::LabelPropConfig cfg;
  cfg.sigma = 0.5;
  cfg.tolerance = 1e-12;
  const auto result = baselines::labelprop_transduce(split, cfg);
  const bool hand_ok = result.converged && result.labels[2] == 0 &&
                       std::abs(result.scores(2, 0) - 0.9608342772023968) < 1e-9;
  report(9, "1-D three-point hand case matches its oracle", hand_ok,
         "score " + std::to_string(result.scores(2, 0)));
}

// ---------- criteria 6 & 7: UCI datasets ----------

harness::DatasetSpec uci_spec(const fs::path& data_dir, const std::string& name) {
  harness::DatasetSpec spec;
  spec.name = name;
  spec.path = (data_dir / (name + ".csv")).string();
  if (name == "haberman") {
    spec.label_column = "survival";
  } else if (name == "titanic") {
    spec.label_column = "survived";
    spec.categorical_columns = {"passenger_class", "age_group", "sex"};
  } else if (name == "pima") {
    spec.label_column = "outcome";
  } else if (name == "wisconsin") {
    spec.label_column = "class";
  }
  return spec;
}

void criterion_6(const fs::path& data_dir) {
  const fs::path csv = data_dir / "wisconsin.csv";
  if (!fs::exists(csv)) {
    report_skip(6, "wisconsin reproduction band",
                csv.string() + " not found; run tools/fetch_datasets.sh");
    return;
  }
  const auto start = std::chrono::steady_clock::now();

  harness::ExperimentConfig cfg;
  cfg.datasets = {uci_spec(data_dir, "wisconsin")};
  cfg.algorithms = {harness::Algorithm::dtree, harness::Algorithm::knn,
                    harness::Algorithm::labelprop, harness::Algorithm::sspso};
  cfg.ranges = {{0.01, 0.10}};
  cfg.runs_per_range = 30;
  cfg.master_seed = 20250810;
  cfg.params.record_wall_time = false;
  const auto report_data = harness::run_experiment(cfg);

  double sspso_mean = -1.0, worst_gap = 1.0;
  double baseline_best = 0.0;
  for (const auto& agg : report_data.aggregates) {
    if (agg.algorithm == harness::Algorithm::sspso) {
      sspso_mean = agg.f1_mean;
    } else {
      baseline_best = std::max(baseline_best, agg.f1_mean);
    }
  }
  worst_gap = sspso_mean - baseline_best;
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << "sspso mean F1 " << sspso_mean << ", best baseline " << baseline_best << ", elapsed "
         << elapsed << "s (paper reports 0.98)";
  report(6, "wisconsin 1-10%: sspso mean F1 >= 0.90 and >= every baseline - 0.02",
         sspso_mean >= 0.90 && worst_gap >= -0.02 && elapsed < 300.0, detail.str());
}

std::string sha_of_file(const fs::path& p) {
  // cheap content fingerprint (FNV over bytes); adequate for equality checks
  std::ifstream in(p, std::ios::binary);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return std::to_string(h);
}

void criterion_7(const fs::path& data_dir, const fs::path& out_dir) {
  const std::vector<std::string> names{"haberman", "titanic", "pima", "wisconsin"};
  for (const auto& name : names) {
    if (!fs::exists(data_dir / (name + ".csv"))) {
      report_skip(7, "full protocol run",
                  (data_dir / (name + ".csv")).string() + " not found; run tools/fetch_datasets.sh");
      return;
    }
  }
  const auto start = std::chrono::steady_clock::now();

  harness::ExperimentConfig cfg;
  for (const auto& name : names) cfg.datasets.push_back(uci_spec(data_dir, name));
  cfg.algorithms = {harness::Algorithm::dtree, harness::Algorithm::knn,
                    harness::Algorithm::labelprop, harness::Algorithm::sspso};
  cfg.ranges = {{0.01, 0.10}, {0.11, 0.20}, {0.21, 0.40}, {0.41, 0.90}};
  cfg.runs_per_range = 30;
  cfg.master_seed = 20250810;
  cfg.params.record_wall_time = false;
  cfg.output_dir = "out";

  const auto first = harness::run_experiment(cfg);
  const auto files_a = harness::emit_report(first, out_dir / "protocol_a");
  const auto second = harness::run_experiment(cfg);
  const auto files_b = harness::emit_report(second, out_dir / "protocol_b");

  const bool counts_ok = first.rows.size() == 4ull * 4 * 30 * 4;
  bool identical = files_a.size() == files_b.size();
  for (std::size_t i = 0; identical && i < files_a.size(); ++i) {
    identical = sha_of_file(files_a[i]) == sha_of_file(files_b[i]);
  }
  bool no_failures = !first.any_failure();

  // paper table values for inspection (Tables II-V, F1 by range)
  const char* range_names[4] = {"1-10%", "11-20%", "21-40%", "41-90%"};
  const double paper[4][4][4] = {
      // rows: haberman, titanic, pima, wisconsin; cols: dtree, knn, lp, spso
      {{0.81, 0.82, 0.83, 0.86}, {0.53, 0.48, 0.56, 0.58}, {0.74, 0.80, 0.78, 0.89},
       {0.84, 0.79, 0.87, 0.98}},
      {{0.81, 0.82, 0.83, 0.88}, {0.58, 0.55, 0.54, 0.59}, {0.79, 0.77, 0.80, 0.80},
       {0.95, 0.95, 0.97, 0.97}},
      {{0.73, 0.80, 0.82, 0.84}, {0.56, 0.57, 0.54, 0.55}, {0.75, 0.78, 0.81, 0.83},
       {0.94, 0.98, 0.97, 0.98}},
      {{0.86, 0.80, 0.77, 0.73}, {0.56, 0.77, 0.52, 0.53}, {0.78, 0.84, 0.82, 0.83},
       {0.95, 0.99, 0.98, 0.97}}};
  std::cout << "    measured mean F1 (paper value) per dataset/range:\n";
  for (int ri = 0; ri < 4; ++ri) {
    for (int di = 0; di < 4; ++di) {
      std::cout << "      " << names[static_cast<std::size_t>(di)] << " " << range_names[ri]
                << ":";
      for (int ai = 0; ai < 4; ++ai) {
        const harness::Algorithm algo = cfg.algorithms[static_cast<std::size_t>(ai)];
        for (const auto& agg : first.aggregates) {
          if (agg.dataset_index == di && agg.range_index == ri && agg.algorithm == algo) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), " %s %.2f (%.2f)", harness::algorithm_name(algo),
                          agg.f1_mean, paper[ri][di][ai]);
            std::cout << buf;
          }
        }
      }
      std::cout << '\n';
    }
  }

  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << first.rows.size() << " rows, elapsed " << elapsed << "s";
  if (!identical) detail << ", re-run differed";
  if (!no_failures) detail << ", some rows failed";
  report(7, "full protocol completes, emits reports, and re-runs byte-identically",
         counts_ok && identical && no_failures && elapsed < 1800.0, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  fs::path data_dir = "data";
  fs::path out_dir = fs::temp_directory_path() / "sswarm_acceptance";
  std::string only = "all";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--data-dir") == 0 && i + 1 < argc) data_dir = argv[++i];
    if (std::strcmp(argv[i], "--out-dir") == 0 && i + 1 < argc) out_dir = argv[++i];
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
  }

  const bool core = only == "all" || only == "core";
  const bool uci = only == "all" || only == "uci";

  if (core) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_8();
    criterion_9();
  }
  if (uci) {
    criterion_6(data_dir);
    criterion_7(data_dir, out_dir);
  }

  int failed = 0, skipped = 0;
  for (const auto& o : g_outcomes) {
    failed += o.status == Outcome::fail ? 1 : 0;
    skipped += o.status == Outcome::skip ? 1 : 0;
  }
  std::cout << g_outcomes.size() - static_cast<std::size_t>(failed + skipped) << " passed, "
            << failed << " failed, " << skipped << " skipped" << std::endl;
  if (failed > 0) return 1;
  if (skipped > 0) return 77;
  return 0;
}
