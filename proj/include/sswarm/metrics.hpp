#pragma once

// Cluster-validity and classification metrics: silhouette, weighted F1,
// confusion counts, and ROC/AUC. All functions are pure; per-point work is
// parallelizable, with sums accumulated in index order for determinism.

#include <span>
#include <vector>

#include "sswarm/core.hpp"

namespace sswarm::metrics {

enum class Distance { euclidean, manhattan };

struct SilhouettePoint {
  double a = 0.0;  // mean intra-cluster distance
  double b = 0.0;  // min mean distance to another non-empty cluster
  double s = 0.0;  // (b - a) / max(a, b); 0 for singleton-cluster members
};

struct SilhouetteBreakdown {
  std::vector<SilhouettePoint> per_point;
  double mean_s = 0.0;
};

// Silhouette over an explicit assignment. cluster_count may exceed the
// indices actually used; empty clusters are ignored in the b minimum.
// Throws std::invalid_argument with fewer than 2 non-empty clusters.
SilhouetteBreakdown silhouette(const Matrix& features, const std::vector<int>& assignment,
                               int cluster_count, Distance metric = Distance::euclidean);

// Same computation against a precomputed n x n distance matrix; produces
// bit-identical results to the overload above for the same metric.
SilhouetteBreakdown silhouette_from_distances(const Matrix& distances,
                                              const std::vector<int>& assignment,
                                              int cluster_count);

Matrix pairwise_distances(const Matrix& features, Distance metric = Distance::euclidean);

struct ConfusionMatrix {
  int class_count = 0;
  std::vector<long> counts;  // entry (t, p): truth t predicted p

  long& at(int t, int p) { return counts[static_cast<std::size_t>(t) * class_count + p]; }
  long at(int t, int p) const { return counts[static_cast<std::size_t>(t) * class_count + p]; }
  long total() const;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 int class_count);

// Per-class F1 with the 0/0 -> 0 convention.
std::vector<double> f1_per_class(const ConfusionMatrix& cm);

// Class-frequency-weighted mean of per-class F1 (weights from truth).
double f1_weighted(std::span<const int> truth, std::span<const int> predicted, int class_count);

struct RocPoint {
  double fpr = 0.0, tpr = 0.0, threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // descending threshold, sentinels (0,0) and (1,1)
  double auc = 0.0;              // trapezoidal; ties count 1/2
};

// truth must contain both classes (0 and 1).
RocCurve roc_auc(std::span<const int> truth, std::span<const double> scores);

}  // namespace sswarm::metrics
