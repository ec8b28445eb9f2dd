#include "sswarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sswarm::metrics {

namespace {

void check_assignment(std::size_t n, const std::vector<int>& assignment, int cluster_count) {
  if (assignment.size() != n) throw std::invalid_argument("assignment length mismatch");
  if (cluster_count < 1) throw std::invalid_argument("cluster_count must be positive");
  for (int a : assignment) {
    if (a < 0 || a >= cluster_count) throw std::invalid_argument("cluster index out of range");
  }
}

// Shared kernel. dist(i, j) must be symmetric with dist(i, i) == 0; both
// the feature path and the precomputed path call this with bit-identical
// distance values, which keeps their outputs bit-identical too.
template <class DistFn>
SilhouetteBreakdown silhouette_impl(std::size_t n, const std::vector<int>& assignment,
                                    int cluster_count, DistFn&& dist) {
  check_assignment(n, assignment, cluster_count);

  std::vector<std::size_t> counts(static_cast<std::size_t>(cluster_count), 0);
  for (int a : assignment) ++counts[static_cast<std::size_t>(a)];
  const int non_empty =
      static_cast<int>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
  if (non_empty < 2) {
    throw std::invalid_argument("silhouette undefined with fewer than 2 non-empty clusters");
  }

  SilhouetteBreakdown out;
  out.per_point.resize(n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
    const std::size_t i = static_cast<std::size_t>(ip);
    std::vector<double> sums(static_cast<std::size_t>(cluster_count), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      sums[static_cast<std::size_t>(assignment[j])] += dist(i, j);
    }
    const std::size_t own = static_cast<std::size_t>(assignment[i]);
    SilhouettePoint pt;
    if (counts[own] >= 2) {
      pt.a = sums[own] / static_cast<double>(counts[own] - 1);
      pt.b = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < counts.size(); ++k) {
        if (k == own || counts[k] == 0) continue;
        pt.b = std::min(pt.b, sums[k] / static_cast<double>(counts[k]));
      }
      const double denom = std::max(pt.a, pt.b);
      pt.s = denom > 0.0 ? (pt.b - pt.a) / denom : 0.0;
    }
    // singleton-cluster members keep the all-zero convention
    out.per_point[i] = pt;
  }

  double total = 0.0;
  for (const SilhouettePoint& pt : out.per_point) total += pt.s;
  out.mean_s = total / static_cast<double>(n);
  return out;
}

double point_distance(const Matrix& features, std::size_t i, std::size_t j, Distance metric) {
  switch (metric) {
    case Distance::manhattan:
      return manhattan_distance(features.row_span(i), features.row_span(j));
    case Distance::euclidean:
    default:
      return euclidean_distance(features.row_span(i), features.row_span(j));
  }
}

}  // namespace

SilhouetteBreakdown silhouette(const Matrix& features, const std::vector<int>& assignment,
                               int cluster_count, Distance metric) {
  return silhouette_impl(features.rows(), assignment, cluster_count,
                         [&](std::size_t i, std::size_t j) {
                           return point_distance(features, i, j, metric);
                         });
}

SilhouetteBreakdown silhouette_from_distances(const Matrix& distances,
                                              const std::vector<int>& assignment,
                                              int cluster_count) {
  if (distances.rows() != distances.cols()) {
    throw std::invalid_argument("distance matrix must be square");
  }
  return silhouette_impl(distances.rows(), assignment, cluster_count,
                         [&](std::size_t i, std::size_t j) { return distances(i, j); });
}

Matrix pairwise_distances(const Matrix& features, Distance metric) {
  const std::size_t n = features.rows();
  Matrix d(n, n, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
    const std::size_t i = static_cast<std::size_t>(ip);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = point_distance(features, i, j, metric);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

long ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 int class_count) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("length mismatch");
  if (truth.empty()) throw std::invalid_argument("empty evaluation set");
  ConfusionMatrix cm;
  cm.class_count = class_count;
  cm.counts.assign(static_cast<std::size_t>(class_count) * class_count, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= class_count || predicted[i] < 0 ||
        predicted[i] >= class_count) {
      throw std::invalid_argument("label out of range");
    }
    ++cm.at(truth[i], predicted[i]);
  }
  return cm;
}

std::vector<double> f1_per_class(const ConfusionMatrix& cm) {
  const int C = cm.class_count;
  std::vector<double> f1(static_cast<std::size_t>(C), 0.0);
  for (int c = 0; c < C; ++c) {
    long tp = cm.at(c, c), fp = 0, fn = 0;
    for (int o = 0; o < C; ++o) {
      if (o == c) continue;
      fp += cm.at(o, c);
      fn += cm.at(c, o);
    }
    const double precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    f1[static_cast<std::size_t>(c)] =
        (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return f1;
}

double f1_weighted(std::span<const int> truth, std::span<const int> predicted, int class_count) {
  const ConfusionMatrix cm = confusion_matrix(truth, predicted, class_count);
  const std::vector<double> f1 = f1_per_class(cm);
  // single division keeps the perfect-classifier case exactly 1
  double weighted = 0.0;
  for (int c = 0; c < class_count; ++c) {
    long support = 0;
    for (int p = 0; p < class_count; ++p) support += cm.at(c, p);
    weighted += static_cast<double>(support) * f1[static_cast<std::size_t>(c)];
  }
  return weighted / static_cast<double>(truth.size());
}

RocCurve roc_auc(std::span<const int> truth, std::span<const double> scores) {
  if (truth.size() != scores.size()) throw std::invalid_argument("length mismatch");
  long positives = 0, negatives = 0;
  for (int t : truth) {
    if (t == 1) {
      ++positives;
    } else if (t == 0) {
      ++negatives;
    } else {
      throw std::invalid_argument("roc_auc expects binary 0/1 truth labels");
    }
  }
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc_auc needs both classes present");
  }

  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // consume the whole tie group: predict positive when score >= threshold
    while (i < order.size() && scores[order[i]] == threshold) {
      if (truth[order[i]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives), threshold});
  }
  curve.points.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});

  double auc = 0.0;
  for (std::size_t p = 1; p < curve.points.size(); ++p) {
    const RocPoint& lo = curve.points[p - 1];
    const RocPoint& hi = curve.points[p];
    auc += (hi.fpr - lo.fpr) * (hi.tpr + lo.tpr) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

}  // namespace sswarm::metrics
