#pragma once

// Supervised PSO classifier: global-best PSO over a flat vector of one
// centroid per class, minimizing one of three training-set fitnesses
// (misclassification rate, mean distance to the class centroid, or their
// hybrid). Prediction is nearest class centroid.

#include <span>
#include <vector>

#include "sswarm/core.hpp"
#include "sswarm/swarm.hpp"

namespace sswarm::psc {

enum class FitnessVariant {
  misclassification,  // percentage of misclassified training points
  mean_distance,      // mean distance from each point to its class centroid
  hybrid,             // (misclassification/100 + mean_distance) / 2
};

const char* to_string(FitnessVariant v);

struct PscOptions {
  FitnessVariant variant = FitnessVariant::hybrid;
  // mean_distance normally attracts each point to its true class centroid;
  // this switches it to the nearest centroid instead.
  bool distance_to_nearest = false;
};

struct PscModel {
  Matrix class_centroids;  // C x d
  FitnessVariant variant = FitnessVariant::hybrid;
  double training_fitness = 0.0;

  int class_count() const { return static_cast<int>(class_centroids.rows()); }
};

// Minimized fitness of a candidate centroid set on labeled training data.
double psc_fitness(FitnessVariant variant, const Matrix& centroids, const Matrix& features,
                   std::span<const int> labels, const PscOptions& options = {});

// Global-best PSO over the (C*d)-dimensional flattened centroid vector.
// Every class needs at least one training point.
PscModel psc_fit(const Matrix& features, std::span<const int> labels, int class_count,
                 const swarm::PsoConfig& cfg, const PscOptions& options = {});

// Nearest class centroid; ties break toward the lowest class index.
int psc_predict(const PscModel& model, std::span<const double> x);

// Softmax of negative centroid distances (for ROC curves).
std::vector<double> psc_scores(const PscModel& model, std::span<const double> x);

}  // namespace sswarm::psc
