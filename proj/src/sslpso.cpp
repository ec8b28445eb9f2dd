#include "sswarm/sslpso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "sswarm/metrics.hpp"

namespace sswarm::sslpso {

namespace {

enum class CandidateStatus { ok, degenerate, disagree };

struct CandidateEval {
  double fitness = swarm::kWorstFitness;
  CandidateStatus status = CandidateStatus::degenerate;
};

int nearest_centroid(const Matrix& centroids, std::span<const double> x) {
  int best = 0;
  double best_d = squared_distance(centroids.row_span(0), x);
  for (std::size_t k = 1; k < centroids.rows(); ++k) {
    const double d = squared_distance(centroids.row_span(k), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

// Duplicate feature rows (common with categorical data) collapse into
// weighted distinct points. Assignment, the agreement gate, and the
// silhouette are all computed per group; the results equal the per-point
// computation exactly, and bit for bit when every row is unique.
struct PointGroups {
  Matrix points;                                 // G x d, first-appearance order
  std::vector<int> group_of;                     // n -> g
  std::vector<double> weight;                    // members per group
  std::vector<std::vector<int>> labeled_counts;  // G x C labeled member counts
  std::size_t total_points = 0;
};

PointGroups build_groups(const SemiSupervisedSplit& split) {
  const Dataset& data = split.data();
  const std::size_t n = data.sample_count();
  const std::size_t d = data.feature_count();

  PointGroups groups;
  groups.total_points = n;
  groups.group_of.resize(n);
  std::vector<std::size_t> representative;
  std::unordered_map<std::string, int> seen;  // row bytes -> group index
  for (std::size_t i = 0; i < n; ++i) {
    std::string key(reinterpret_cast<const char*>(data.features.row(i)), d * sizeof(double));
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(representative.size()));
    if (inserted) {
      representative.push_back(i);
      groups.weight.push_back(0.0);
    }
    groups.group_of[i] = it->second;
    groups.weight[static_cast<std::size_t>(it->second)] += 1.0;
  }
  groups.points = Matrix(representative.size(), d);
  for (std::size_t g = 0; g < representative.size(); ++g) {
    groups.points.set_row(g, data.features.row_span(representative[g]));
  }
  groups.labeled_counts.assign(
      representative.size(), std::vector<int>(static_cast<std::size_t>(data.class_count), 0));
  for (int i : split.labeled_idx) {
    ++groups.labeled_counts[static_cast<std::size_t>(groups.group_of[static_cast<std::size_t>(i)])]
                           [static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])];
  }
  return groups;
}

// Mean silhouette over the weighted groups, matching the per-point value.
double grouped_mean_silhouette(const Matrix& group_distances, const PointGroups& groups,
                               const std::vector<int>& g_assign, int K,
                               std::span<const double> cluster_points) {
  const std::size_t G = groups.points.rows();
  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(K));
  for (std::size_t g = 0; g < G; ++g) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t h = 0; h < G; ++h) {
      sums[static_cast<std::size_t>(g_assign[h])] += groups.weight[h] * group_distances(g, h);
    }
    const std::size_t own = static_cast<std::size_t>(g_assign[g]);
    if (cluster_points[own] < 2.0) continue;  // singleton convention: s = 0
    const double a = sums[own] / (cluster_points[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sums.size(); ++k) {
      if (k == own || cluster_points[k] == 0.0) continue;
      b = std::min(b, sums[k] / cluster_points[k]);
    }
    const double denom = std::max(a, b);
    total += groups.weight[g] * (denom > 0.0 ? (b - a) / denom : 0.0);
  }
  return total / static_cast<double>(groups.total_points);
}

// labeled class counts per cluster, in one pass
std::vector<std::vector<int>> labeled_counts(const std::vector<int>& assignment,
                                             const SemiSupervisedSplit& split, int cluster_count) {
  const Dataset& data = split.data();
  std::vector<std::vector<int>> counts(
      static_cast<std::size_t>(cluster_count),
      std::vector<int>(static_cast<std::size_t>(data.class_count), 0));
  for (int i : split.labeled_idx) {
    ++counts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])]
            [static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])];
  }
  return counts;
}

bool agreement_from_counts(const std::vector<std::vector<int>>& counts,
                           std::span<const int> bound_classes) {
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const std::vector<int>& row = counts[k];
    const int max_count = *std::max_element(row.begin(), row.end());
    if (max_count == 0) continue;  // no labeled points in this cluster
    if (row[static_cast<std::size_t>(bound_classes[k])] != max_count) return false;
  }
  return true;
}

// Fit-loop evaluation over the compressed groups.
CandidateEval evaluate_grouped(const Matrix& centroids, const Matrix& group_distances,
                               const PointGroups& groups, int class_count,
                               std::span<const int> bound_classes,
                               std::vector<int>& g_assign_buffer) {
  const std::size_t G = groups.points.rows();
  const int K = static_cast<int>(centroids.rows());
  g_assign_buffer.resize(G);
  std::vector<double> cluster_points(static_cast<std::size_t>(K), 0.0);
  for (std::size_t g = 0; g < G; ++g) {
    const int k = nearest_centroid(centroids, groups.points.row_span(g));
    g_assign_buffer[g] = k;
    cluster_points[static_cast<std::size_t>(k)] += groups.weight[g];
  }
  const int non_empty = static_cast<int>(
      std::count_if(cluster_points.begin(), cluster_points.end(), [](double s) { return s > 0.0; }));

  CandidateEval eval;
  if (non_empty < 2) {
    eval.status = CandidateStatus::degenerate;
    return eval;
  }

  std::vector<std::vector<int>> counts(
      static_cast<std::size_t>(K), std::vector<int>(static_cast<std::size_t>(class_count), 0));
  for (std::size_t g = 0; g < G; ++g) {
    auto& row = counts[static_cast<std::size_t>(g_assign_buffer[g])];
    const auto& labeled = groups.labeled_counts[g];
    for (int c = 0; c < class_count; ++c) row[static_cast<std::size_t>(c)] += labeled[static_cast<std::size_t>(c)];
  }
  if (!agreement_from_counts(counts, bound_classes)) {
    eval.status = CandidateStatus::disagree;
    return eval;
  }
  eval.status = CandidateStatus::ok;
  eval.fitness = grouped_mean_silhouette(group_distances, groups, g_assign_buffer, K, cluster_points);
  return eval;
}

int classify_point(const ClusterLabelModel& model, std::span<const double> x) {
  const int k = nearest_centroid(model.centroids, x);
  if (model.cluster_pure[static_cast<std::size_t>(k)]) {
    return model.cluster_class[static_cast<std::size_t>(k)];
  }
  // impure cluster: class of the nearest labeled anchor, ties to the
  // lowest anchor index
  int best = 0;
  double best_d = squared_distance(model.anchor_features.row_span(0), x);
  for (std::size_t a = 1; a < model.anchor_features.rows(); ++a) {
    const double d = squared_distance(model.anchor_features.row_span(a), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(a);
    }
  }
  return model.anchor_labels[static_cast<std::size_t>(best)];
}

}  // namespace

std::vector<int> assign_nearest(const Matrix& features, const Matrix& centroids) {
  if (features.cols() != centroids.cols()) throw std::invalid_argument("dimension mismatch");
  if (centroids.rows() == 0) throw std::invalid_argument("no centroids");
  std::vector<int> assignment(features.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(features.rows()); ++i) {
    assignment[static_cast<std::size_t>(i)] =
        nearest_centroid(centroids, features.row_span(static_cast<std::size_t>(i)));
  }
  return assignment;
}

bool check_agreement(const std::vector<int>& assignment, const SemiSupervisedSplit& split,
                     std::span<const int> bound_classes) {
  return agreement_from_counts(
      labeled_counts(assignment, split, static_cast<int>(bound_classes.size())), bound_classes);
}

double evaluate_candidate_fitness(const Matrix& centroids, const SemiSupervisedSplit& split,
                                  std::span<const int> bound_classes) {
  const Dataset& data = split.data();
  const int K = static_cast<int>(centroids.rows());
  const std::vector<int> assignment = assign_nearest(data.features, centroids);

  std::vector<std::size_t> sizes(static_cast<std::size_t>(K), 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  const int non_empty =
      static_cast<int>(std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
  if (non_empty < 2) return swarm::kWorstFitness;
  if (!check_agreement(assignment, split, bound_classes)) return swarm::kWorstFitness;
  return metrics::silhouette(data.features, assignment, K).mean_s;
}

std::pair<std::vector<int>, std::vector<bool>> label_clusters(
    const std::vector<int>& assignment, const SemiSupervisedSplit& split,
    std::span<const int> bound_classes) {
  const int K = static_cast<int>(bound_classes.size());
  const std::vector<std::vector<int>> counts = labeled_counts(assignment, split, K);

  std::vector<int> cluster_class(static_cast<std::size_t>(K));
  std::vector<bool> cluster_pure(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const std::vector<int>& row = counts[static_cast<std::size_t>(k)];
    const int max_count = *std::max_element(row.begin(), row.end());
    if (max_count == 0) {
      cluster_class[static_cast<std::size_t>(k)] = bound_classes[static_cast<std::size_t>(k)];
      cluster_pure[static_cast<std::size_t>(k)] = false;
      continue;
    }
    const int bound = bound_classes[static_cast<std::size_t>(k)];
    int chosen = -1;
    if (row[static_cast<std::size_t>(bound)] == max_count) {
      chosen = bound;
    } else {
      for (int c = 0; c < static_cast<int>(row.size()); ++c) {
        if (row[static_cast<std::size_t>(c)] == max_count) {
          chosen = c;
          break;
        }
      }
    }
    cluster_class[static_cast<std::size_t>(k)] = chosen;
    int represented = 0;
    for (int v : row) represented += v > 0 ? 1 : 0;
    cluster_pure[static_cast<std::size_t>(k)] = represented == 1;
  }
  return {std::move(cluster_class), std::move(cluster_pure)};
}

ClusterLabelModel fit(const SemiSupervisedSplit& split, const swarm::PsoConfig& cfg,
                      int cluster_count, FitTrace* trace) {
  cfg.validate();
  split.validate();
  const Dataset& data = split.data();
  const int C = data.class_count;
  const std::size_t d = data.feature_count();
  if (cluster_count < C) {
    throw std::invalid_argument("cluster_count must be at least the class count");
  }
  const int K = cluster_count;

  std::vector<int> bound(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) bound[static_cast<std::size_t>(k)] = k % C;

  // labeled class means, used to seed one particle per neighborhood and the
  // initial local bests
  Matrix class_mean(static_cast<std::size_t>(C), d, 0.0);
  std::vector<std::size_t> class_n(static_cast<std::size_t>(C), 0);
  for (int i : split.labeled_idx) {
    const std::size_t c = static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)]);
    ++class_n[c];
    for (std::size_t f = 0; f < d; ++f) {
      class_mean(c, f) += data.features(static_cast<std::size_t>(i), f);
    }
  }
  for (int c = 0; c < C; ++c) {
    if (class_n[static_cast<std::size_t>(c)] == 0) {
      throw std::invalid_argument("a bound class has no labeled anchor");
    }
    for (std::size_t f = 0; f < d; ++f) {
      class_mean(static_cast<std::size_t>(c), f) /=
          static_cast<double>(class_n[static_cast<std::size_t>(c)]);
    }
  }

  const PointGroups groups = build_groups(split);
  const Matrix group_distances = metrics::pairwise_distances(groups.points);

  std::vector<swarm::Neighborhood> hoods(static_cast<std::size_t>(K));
  std::vector<std::vector<Rng>> streams(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    swarm::Neighborhood& hood = hoods[static_cast<std::size_t>(k)];
    hood.bound_class = bound[static_cast<std::size_t>(k)];
    hood.particles.resize(static_cast<std::size_t>(cfg.particles));
    hood.lbest_position.assign(
        class_mean.row(static_cast<std::size_t>(hood.bound_class)),
        class_mean.row(static_cast<std::size_t>(hood.bound_class)) + d);
    hood.lbest_fitness = swarm::kWorstFitness;
    for (int p = 0; p < cfg.particles; ++p) {
      streams[static_cast<std::size_t>(k)].push_back(swarm::particle_stream(cfg.seed, k, p));
      Rng& rng = streams[static_cast<std::size_t>(k)].back();
      swarm::Particle& particle = hood.particles[static_cast<std::size_t>(p)];
      particle.position.resize(d);
      if (p == 0) {
        // mild label guidance: one particle starts at the class mean
        particle.position = hood.lbest_position;
      } else {
        for (auto& x : particle.position) x = rng.uniform01();
      }
      particle.velocity.resize(d);
      for (auto& v : particle.velocity) v = rng.uniform(-cfg.max_velocity, cfg.max_velocity);
      particle.pbest_position = particle.position;
      particle.pbest_fitness = swarm::kWorstFitness;
    }
  }

  const int total_particles = K * cfg.particles;
  std::vector<CandidateEval> evals(static_cast<std::size_t>(total_particles));
  Matrix lbest_snapshot(static_cast<std::size_t>(K), d);
  std::vector<double> best_history;
  double running_best = swarm::kWorstFitness;
  int iterations_run = 0;
  int resets = 0;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    ++iterations_run;
    for (int k = 0; k < K; ++k) {
      lbest_snapshot.set_row(static_cast<std::size_t>(k),
                             hoods[static_cast<std::size_t>(k)].lbest_position);
    }

    // candidate evaluations read only the frozen snapshot: parallel-safe
#pragma omp parallel
    {
      Matrix candidate = lbest_snapshot;
      std::vector<int> g_assign;
#pragma omp for schedule(dynamic)
      for (int slot = 0; slot < total_particles; ++slot) {
        const int k = slot / cfg.particles;
        const int p = slot % cfg.particles;
        candidate.set_row(static_cast<std::size_t>(k),
                          hoods[static_cast<std::size_t>(k)]
                              .particles[static_cast<std::size_t>(p)]
                              .position);
        evals[static_cast<std::size_t>(slot)] =
            evaluate_grouped(candidate, group_distances, groups, C, bound, g_assign);
        candidate.set_row(static_cast<std::size_t>(k),
                          lbest_snapshot.row_span(static_cast<std::size_t>(k)));
      }
    }

    double iter_best = swarm::kWorstFitness;
    for (int slot = 0; slot < total_particles; ++slot) {
      const int k = slot / cfg.particles;
      const int p = slot % cfg.particles;
      swarm::Particle& particle =
          hoods[static_cast<std::size_t>(k)].particles[static_cast<std::size_t>(p)];
      const CandidateEval& eval = evals[static_cast<std::size_t>(slot)];
      if (eval.status == CandidateStatus::disagree) {
        swarm::reset_particle(particle, cfg,
                              streams[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)]);
        ++resets;
        continue;
      }
      iter_best = std::max(iter_best, eval.fitness);
      if (eval.fitness > particle.pbest_fitness) {
        particle.pbest_fitness = eval.fitness;
        particle.pbest_position = particle.position;
      }
    }

    // local bests are monotone: resets touch pbest, never the recorded lbest
    for (auto& hood : hoods) {
      for (const auto& particle : hood.particles) {
        if (particle.pbest_fitness > hood.lbest_fitness) {
          hood.lbest_fitness = particle.pbest_fitness;
          hood.lbest_position = particle.pbest_position;
        }
      }
    }

    for (int k = 0; k < K; ++k) {
      swarm::Neighborhood& hood = hoods[static_cast<std::size_t>(k)];
      for (int p = 0; p < cfg.particles; ++p) {
        swarm::Particle& particle = hood.particles[static_cast<std::size_t>(p)];
        Rng& rng = streams[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
        swarm::update_velocity(particle, hood.lbest_position, cfg, rng);
        swarm::update_position(particle);
      }
    }

    running_best = std::max(running_best, iter_best);
    best_history.push_back(running_best);
    const int t = static_cast<int>(best_history.size()) - 1;
    if (t >= cfg.stall_window) {
      const double then = best_history[static_cast<std::size_t>(t - cfg.stall_window)];
      if (std::isfinite(then) && running_best - then < cfg.stall_tolerance) break;
    }
  }

  ClusterLabelModel model;
  model.centroids = Matrix(static_cast<std::size_t>(K), d);
  for (int k = 0; k < K; ++k) {
    model.centroids.set_row(static_cast<std::size_t>(k),
                            hoods[static_cast<std::size_t>(k)].lbest_position);
  }
  model.class_count = C;

  const std::vector<int> final_assignment = assign_nearest(data.features, model.centroids);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(K), 0);
  for (int a : final_assignment) ++sizes[static_cast<std::size_t>(a)];
  const int non_empty =
      static_cast<int>(std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
  if (non_empty < 2) {
    throw std::runtime_error("fit produced a degenerate clustering (fewer than 2 clusters)");
  }

  auto [cluster_class, cluster_pure] = label_clusters(final_assignment, split, bound);
  model.cluster_class = std::move(cluster_class);
  model.cluster_pure = std::move(cluster_pure);

  std::vector<char> covered(static_cast<std::size_t>(C), 0);
  for (int c : model.cluster_class) covered[static_cast<std::size_t>(c)] = 1;
  for (int c = 0; c < C; ++c) {
    if (!covered[static_cast<std::size_t>(c)]) {
      throw std::runtime_error("fitted clusters do not cover every class");
    }
  }

  // recomputed through the public metric so the stored value matches it
  // bit for bit
  model.fitness_achieved = metrics::silhouette(data.features, final_assignment, K).mean_s;

  const std::size_t l = split.labeled_idx.size();
  model.anchor_features = Matrix(l, d);
  model.anchor_labels.resize(l);
  for (std::size_t a = 0; a < l; ++a) {
    const std::size_t row = static_cast<std::size_t>(split.labeled_idx[a]);
    model.anchor_features.set_row(a, data.features.row_span(row));
    model.anchor_labels[a] = data.labels[row];
  }

  if (trace != nullptr) {
    trace->best_fitness_history = std::move(best_history);
    trace->iterations_run = iterations_run;
    trace->resets = resets;
  }
  return model;
}

std::vector<int> resolve_impure(const ClusterLabelModel& model, const SemiSupervisedSplit& split) {
  const Dataset& data = split.data();
  std::vector<int> out(split.unlabeled_idx.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t u = 0; u < static_cast<std::ptrdiff_t>(split.unlabeled_idx.size()); ++u) {
    const std::size_t row = static_cast<std::size_t>(split.unlabeled_idx[static_cast<std::size_t>(u)]);
    out[static_cast<std::size_t>(u)] = classify_point(model, data.features.row_span(row));
  }
  return out;
}

std::vector<int> transduce(const ClusterLabelModel& model, const SemiSupervisedSplit& split) {
  const Dataset& data = split.data();
  std::vector<int> labels(data.sample_count());
  for (int i : split.labeled_idx) {
    labels[static_cast<std::size_t>(i)] = data.labels[static_cast<std::size_t>(i)];
  }
  const std::vector<int> unlabeled = resolve_impure(model, split);
  for (std::size_t u = 0; u < unlabeled.size(); ++u) {
    labels[static_cast<std::size_t>(split.unlabeled_idx[u])] = unlabeled[u];
  }
  return labels;
}

Prediction predict(const ClusterLabelModel& model, std::span<const double> x) {
  if (x.size() != model.centroids.cols()) throw std::invalid_argument("dimension mismatch");
  Prediction pred;
  pred.label = classify_point(model, x);

  // softmax of negative centroid distances, aggregated per class
  const std::size_t K = model.centroids.rows();
  std::vector<double> weights(K);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    weights[k] = std::exp(-euclidean_distance(model.centroids.row_span(k), x));
    total += weights[k];
  }
  pred.class_scores.assign(static_cast<std::size_t>(model.class_count), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    pred.class_scores[static_cast<std::size_t>(model.cluster_class[k])] += weights[k] / total;
  }
  return pred;
}

}  // namespace sswarm::sslpso
