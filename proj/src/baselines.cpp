#include "sswarm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sswarm/metrics.hpp"

namespace sswarm::baselines {

namespace {

// index order of the k nearest training points; distance ties keep the
// lower training index
std::vector<int> nearest_indices(const Matrix& train, std::span<const double> x, int k) {
  const std::size_t m = train.rows();
  std::vector<std::pair<double, int>> ranked(m);
  for (std::size_t i = 0; i < m; ++i) {
    ranked[i] = {squared_distance(train.row_span(i), x), static_cast<int>(i)};
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = ranked[static_cast<std::size_t>(i)].second;
  return out;
}

int majority_class(std::span<const long> votes) {
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

double gini(std::span<const long> counts, long total) {
  if (total == 0) return 0.0;
  double impurity = 1.0;
  for (long c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    impurity -= p * p;
  }
  return impurity;
}

}  // namespace

int knn_predict(const Matrix& train_features, std::span<const int> train_labels,
                std::span<const double> x, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (train_features.rows() == 0) throw std::invalid_argument("empty training set");
  if (static_cast<std::size_t>(k) > train_features.rows()) {
    throw std::invalid_argument("k exceeds training set size");
  }
  int class_count = 0;
  for (int y : train_labels) class_count = std::max(class_count, y + 1);
  std::vector<long> votes(static_cast<std::size_t>(class_count), 0);
  for (int i : nearest_indices(train_features, x, k)) {
    ++votes[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(i)])];
  }
  return majority_class(votes);
}

std::vector<double> knn_scores(const Matrix& train_features, std::span<const int> train_labels,
                               int class_count, std::span<const double> x, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > train_features.rows()) {
    throw std::invalid_argument("bad k");
  }
  std::vector<double> scores(static_cast<std::size_t>(class_count), 0.0);
  for (int i : nearest_indices(train_features, x, k)) {
    scores[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(i)])] += 1.0;
  }
  for (double& s : scores) s /= static_cast<double>(k);
  return scores;
}

void DecisionTree::fit(const Matrix& features, std::span<const int> labels, int class_count) {
  if (features.rows() == 0) throw std::invalid_argument("empty training set");
  if (features.rows() != labels.size()) throw std::invalid_argument("label count mismatch");
  nodes_.clear();
  class_count_ = class_count;
  std::vector<int> indices(features.rows());
  std::iota(indices.begin(), indices.end(), 0);
  build(features, labels, indices, 0, static_cast<int>(indices.size()));
}

int DecisionTree::build(const Matrix& features, std::span<const int> labels,
                        std::vector<int>& indices, int begin, int end) {
  const int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  const long total = end - begin;
  std::vector<long> counts(static_cast<std::size_t>(class_count_), 0);
  for (int i = begin; i < end; ++i) {
    ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])])];
  }

  auto make_leaf = [&]() {
    Node& node = nodes_[static_cast<std::size_t>(node_id)];
    node.leaf_class = majority_class(counts);
    node.fractions.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
      node.fractions[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
    }
    return node_id;
  };

  const double parent_gini = gini(counts, total);
  const bool pure = std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; }) <= 1;
  if (pure || total < 2) return make_leaf();

  // best axis-aligned split at a midpoint of sorted distinct values
  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  const std::size_t d = features.cols();
  std::vector<int> sorted(indices.begin() + begin, indices.begin() + end);
  for (std::size_t f = 0; f < d; ++f) {
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      const double va = features(static_cast<std::size_t>(a), f);
      const double vb = features(static_cast<std::size_t>(b), f);
      return va != vb ? va < vb : a < b;
    });
    std::vector<long> left(static_cast<std::size_t>(class_count_), 0);
    std::vector<long> right = counts;
    for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
      const int idx = sorted[pos];
      ++left[static_cast<std::size_t>(labels[static_cast<std::size_t>(idx)])];
      --right[static_cast<std::size_t>(labels[static_cast<std::size_t>(idx)])];
      const double lo = features(static_cast<std::size_t>(idx), f);
      const double hi = features(static_cast<std::size_t>(sorted[pos + 1]), f);
      if (lo == hi) continue;
      const long nl = static_cast<long>(pos) + 1;
      const long nr = total - nl;
      const double gain = parent_gini -
                          (static_cast<double>(nl) / static_cast<double>(total)) * gini(left, nl) -
                          (static_cast<double>(nr) / static_cast<double>(total)) * gini(right, nr);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = static_cast<int>(f);
        best_threshold = 0.5 * (lo + hi);
      }
    }
  }
  if (best_feature < 0) return make_leaf();  // zero gain everywhere

  const auto mid = std::stable_partition(
      indices.begin() + begin, indices.begin() + end, [&](int i) {
        return features(static_cast<std::size_t>(i), static_cast<std::size_t>(best_feature)) <=
               best_threshold;
      });
  const int split_at = static_cast<int>(mid - indices.begin());

  nodes_[static_cast<std::size_t>(node_id)].feature = best_feature;
  nodes_[static_cast<std::size_t>(node_id)].threshold = best_threshold;
  const int left_id = build(features, labels, indices, begin, split_at);
  nodes_[static_cast<std::size_t>(node_id)].left = left_id;
  const int right_id = build(features, labels, indices, split_at, end);
  nodes_[static_cast<std::size_t>(node_id)].right = right_id;
  return node_id;
}

const DecisionTree::Node& DecisionTree::route(std::span<const double> x) const {
  if (nodes_.empty()) throw std::logic_error("tree not fitted");
  int id = 0;
  while (nodes_[static_cast<std::size_t>(id)].leaf_class < 0) {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(id)];
}

int DecisionTree::predict(std::span<const double> x) const { return route(x).leaf_class; }

std::vector<double> DecisionTree::scores(std::span<const double> x) const {
  return route(x).fractions;
}

std::vector<int> dtree_fit_predict(const Matrix& train_features, std::span<const int> train_labels,
                                   int class_count, const Matrix& queries) {
  DecisionTree tree;
  tree.fit(train_features, train_labels, class_count);
  std::vector<int> out(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) out[q] = tree.predict(queries.row_span(q));
  return out;
}

LabelPropResult labelprop_transduce(const SemiSupervisedSplit& split, const LabelPropConfig& cfg) {
  split.validate();
  if (cfg.max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");
  if (split.labeled_idx.empty()) throw std::invalid_argument("no labeled points");
  const Dataset& data = split.data();
  const std::size_t n = data.sample_count();
  const int C = data.class_count;

  const Matrix distances = metrics::pairwise_distances(data.features);

  double sigma = cfg.sigma;
  if (!(sigma > 0.0)) {
    // median pairwise distance heuristic, floored away from zero
    std::vector<double> upper;
    upper.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) upper.push_back(distances(i, j));
    }
    std::nth_element(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(upper.size() / 2),
                     upper.end());
    sigma = std::max(upper[upper.size() / 2], 1e-6);
  }

  // row-normalized RBF affinity (self-affinity included, so rows never
  // normalize by zero)
  Matrix transition(n, n);
  const double inv_s2 = 1.0 / (sigma * sigma);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
    const std::size_t i = static_cast<std::size_t>(ip);
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::exp(-distances(i, j) * distances(i, j) * inv_s2);
      transition(i, j) = w;
      row_sum += w;
    }
    for (std::size_t j = 0; j < n; ++j) transition(i, j) /= row_sum;
  }

  std::vector<char> is_labeled(n, 0);
  for (int i : split.labeled_idx) is_labeled[static_cast<std::size_t>(i)] = 1;

  Matrix scores(n, static_cast<std::size_t>(C), 1.0 / C);
  auto clamp_labeled = [&](Matrix& m) {
    for (int i : split.labeled_idx) {
      for (int c = 0; c < C; ++c) m(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = 0.0;
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])) = 1.0;
    }
  };
  clamp_labeled(scores);

  LabelPropResult result;
  result.sigma_used = sigma;
  Matrix next(n, static_cast<std::size_t>(C));

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
      const std::size_t i = static_cast<std::size_t>(ip);
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += transition(i, j) * scores(j, static_cast<std::size_t>(c));
        }
        next(i, static_cast<std::size_t>(c)) = acc;
      }
    }
    if (cfg.clamp) clamp_labeled(next);

    double max_change = 0.0;
    double row_sum_error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (int c = 0; c < C; ++c) {
        max_change = std::max(max_change,
                              std::abs(next(i, static_cast<std::size_t>(c)) -
                                       scores(i, static_cast<std::size_t>(c))));
        row_sum += next(i, static_cast<std::size_t>(c));
      }
      row_sum_error = std::max(row_sum_error, std::abs(row_sum - 1.0));
    }
    std::swap(scores, next);
    result.change_history.push_back(max_change);
    result.max_row_sum_error = std::max(result.max_row_sum_error, row_sum_error);
    result.sweeps = sweep + 1;
    if (max_change < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }

  const std::size_t tail = std::min<std::size_t>(5, result.change_history.size());
  for (std::size_t t = result.change_history.size() - tail + 1; t < result.change_history.size();
       ++t) {
    if (result.change_history[t] > result.change_history[t - 1]) result.monotone_tail = false;
  }

  result.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_labeled[i]) {
      result.labels[i] = data.labels[i];
      continue;
    }
    int best = 0;
    for (int c = 1; c < C; ++c) {
      if (scores(i, static_cast<std::size_t>(c)) > scores(i, static_cast<std::size_t>(best))) {
        best = c;
      }
    }
    result.labels[i] = best;
  }
  result.scores = std::move(scores);
  return result;
}

}  // namespace sswarm::baselines
