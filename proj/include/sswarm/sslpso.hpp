#pragma once

// Semi-supervised cluster-and-label classifier. One PSO neighborhood per
// cluster positions a single centroid; fitness is the mean silhouette of
// the clustering a candidate induces, gated by agreement with the labeled
// data. Disagreeing particles are reset. Unlabeled points in impure
// clusters fall back to the nearest labeled point.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sswarm/core.hpp"
#include "sswarm/dataset.hpp"
#include "sswarm/swarm.hpp"

namespace sswarm::sslpso {

struct ClusterLabelModel {
  Matrix centroids;                // K x d, one row per neighborhood
  std::vector<int> cluster_class;  // class each cluster predicts
  std::vector<bool> cluster_pure;  // all labeled members share one class
  Matrix anchor_features;          // labeled training points, split order
  std::vector<int> anchor_labels;
  int class_count = 0;
  double fitness_achieved = 0.0;   // mean silhouette of the final assignment

  int cluster_count() const { return static_cast<int>(centroids.rows()); }
};

struct Prediction {
  int label = 0;
  std::vector<double> class_scores;  // softmax of negative centroid distances, summed per class
};

// Per-iteration trace, for diagnostics and the monotonicity tests.
struct FitTrace {
  std::vector<double> best_fitness_history;  // running best assembled fitness
  int iterations_run = 0;
  int resets = 0;
};

// Nearest-centroid assignment; ties break toward the lowest cluster index.
std::vector<int> assign_nearest(const Matrix& features, const Matrix& centroids);

// True iff every cluster holding at least one labeled point has its
// bound class among the majority classes of those points.
bool check_agreement(const std::vector<int>& assignment, const SemiSupervisedSplit& split,
                     std::span<const int> bound_classes);

// Mean silhouette of the induced clustering, or -infinity when the
// candidate disagrees with the labels or induces < 2 non-empty clusters.
double evaluate_candidate_fitness(const Matrix& centroids, const SemiSupervisedSplit& split,
                                  std::span<const int> bound_classes);

// cluster_class[k]: labeled majority (ties prefer the bound class, then the
// lowest class index); clusters without labeled points take their bound
// class and are marked impure.
std::pair<std::vector<int>, std::vector<bool>> label_clusters(
    const std::vector<int>& assignment, const SemiSupervisedSplit& split,
    std::span<const int> bound_classes);

// Runs cluster_count neighborhoods (neighborhood k bound to class k mod C).
// Throws std::invalid_argument for cluster_count < class_count and
// std::runtime_error when the final centroids are degenerate.
ClusterLabelModel fit(const SemiSupervisedSplit& split, const swarm::PsoConfig& cfg,
                      int cluster_count, FitTrace* trace = nullptr);

// Labels for the unlabeled points, aligned with split.unlabeled_idx.
std::vector<int> resolve_impure(const ClusterLabelModel& model, const SemiSupervisedSplit& split);

// Full-length label vector: given labels kept, unlabeled points filled in.
std::vector<int> transduce(const ClusterLabelModel& model, const SemiSupervisedSplit& split);

// x must be normalized with the training dataset's column min/max.
Prediction predict(const ClusterLabelModel& model, std::span<const double> x);

}  // namespace sswarm::sslpso
