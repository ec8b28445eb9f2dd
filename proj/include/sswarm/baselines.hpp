#pragma once

// Comparison models implemented natively: k-nearest neighbors, a CART/Gini
// decision tree, and iterative graph label propagation.

#include <span>
#include <vector>

#include "sswarm/core.hpp"
#include "sswarm/dataset.hpp"

namespace sswarm::baselines {

// Majority class among the k Euclidean-nearest training points.
// Distance ties -> lower training index; vote ties -> lowest class index.
int knn_predict(const Matrix& train_features, std::span<const int> train_labels,
                std::span<const double> x, int k);

// Per-class vote fractions of the k nearest neighbors.
std::vector<double> knn_scores(const Matrix& train_features, std::span<const int> train_labels,
                               int class_count, std::span<const double> x, int k);

class DecisionTree {
 public:
  void fit(const Matrix& features, std::span<const int> labels, int class_count);
  int predict(std::span<const double> x) const;
  std::vector<double> scores(std::span<const double> x) const;  // leaf class fractions

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1, right = -1;
    int leaf_class = -1;
    std::vector<double> fractions;
  };
  int build(const Matrix& features, std::span<const int> labels,
            std::vector<int>& indices, int begin, int end);
  const Node& route(std::span<const double> x) const;

  std::vector<Node> nodes_;
  int class_count_ = 0;
};

// Convenience wrapper: fit on the training points, label the queries.
std::vector<int> dtree_fit_predict(const Matrix& train_features, std::span<const int> train_labels,
                                   int class_count, const Matrix& queries);

struct LabelPropConfig {
  double sigma = 0.0;        // RBF bandwidth; <= 0 selects the median-distance heuristic
  bool clamp = true;         // labeled rows reset to one-hot each sweep
  int max_sweeps = 1000;
  double tolerance = 1e-6;   // max entry change to declare convergence
};

struct LabelPropResult {
  std::vector<int> labels;      // full length n; labeled points keep their labels
  Matrix scores;                // n x C row-stochastic class scores
  bool converged = false;
  int sweeps = 0;
  double sigma_used = 0.0;
  std::vector<double> change_history;   // max entry change per sweep
  double max_row_sum_error = 0.0;       // worst |row sum - 1| seen after any sweep
  bool monotone_tail = true;            // changes non-increasing over the last 5 sweeps
};

// Row-normalized RBF affinity, iterated with labeled rows re-clamped until
// the max change drops below tolerance or max_sweeps is reached.
// Non-convergence is reported, not thrown.
LabelPropResult labelprop_transduce(const SemiSupervisedSplit& split, const LabelPropConfig& cfg);

}  // namespace sswarm::baselines
