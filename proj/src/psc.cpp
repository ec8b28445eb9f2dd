#include "sswarm/psc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sswarm::psc {

namespace {

int nearest_class(const Matrix& centroids, std::span<const double> x) {
  int best = 0;
  double best_d = squared_distance(centroids.row_span(0), x);
  for (std::size_t c = 1; c < centroids.rows(); ++c) {
    const double d = squared_distance(centroids.row_span(c), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

double misclassification_rate(const Matrix& centroids, const Matrix& features,
                              std::span<const int> labels) {
  long wrong = 0;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    if (nearest_class(centroids, features.row_span(i)) != labels[i]) ++wrong;
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(features.rows());
}

double mean_centroid_distance(const Matrix& centroids, const Matrix& features,
                              std::span<const int> labels, bool to_nearest) {
  double total = 0.0;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const int c = to_nearest ? nearest_class(centroids, features.row_span(i)) : labels[i];
    total += euclidean_distance(centroids.row_span(static_cast<std::size_t>(c)),
                                features.row_span(i));
  }
  return total / static_cast<double>(features.rows());
}

Matrix reshape_centroids(std::span<const double> flat, int class_count, std::size_t d) {
  Matrix centroids(static_cast<std::size_t>(class_count), d);
  for (int c = 0; c < class_count; ++c) {
    for (std::size_t f = 0; f < d; ++f) {
      centroids(static_cast<std::size_t>(c), f) = flat[static_cast<std::size_t>(c) * d + f];
    }
  }
  return centroids;
}

}  // namespace

const char* to_string(FitnessVariant v) {
  switch (v) {
    case FitnessVariant::misclassification:
      return "misclassification";
    case FitnessVariant::mean_distance:
      return "mean_distance";
    case FitnessVariant::hybrid:
    default:
      return "hybrid";
  }
}

double psc_fitness(FitnessVariant variant, const Matrix& centroids, const Matrix& features,
                   std::span<const int> labels, const PscOptions& options) {
  if (features.rows() == 0) throw std::invalid_argument("empty training set");
  if (features.rows() != labels.size()) throw std::invalid_argument("label count mismatch");
  if (features.cols() != centroids.cols()) throw std::invalid_argument("dimension mismatch");
  switch (variant) {
    case FitnessVariant::misclassification:
      return misclassification_rate(centroids, features, labels);
    case FitnessVariant::mean_distance:
      return mean_centroid_distance(centroids, features, labels, options.distance_to_nearest);
    case FitnessVariant::hybrid:
    default:
      return 0.5 * (misclassification_rate(centroids, features, labels) / 100.0 +
                    mean_centroid_distance(centroids, features, labels,
                                           options.distance_to_nearest));
  }
}

PscModel psc_fit(const Matrix& features, std::span<const int> labels, int class_count,
                 const swarm::PsoConfig& cfg, const PscOptions& options) {
  cfg.validate();
  if (class_count < 2) throw std::invalid_argument("need at least 2 classes");
  if (features.rows() == 0) throw std::invalid_argument("empty training set");
  std::vector<char> present(static_cast<std::size_t>(class_count), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count) throw std::invalid_argument("label out of range");
    present[static_cast<std::size_t>(labels[i])] = 1;
  }
  for (int c = 0; c < class_count; ++c) {
    if (!present[static_cast<std::size_t>(c)]) {
      throw std::invalid_argument("a class has no training point");
    }
  }

  const std::size_t d = features.cols();
  const std::size_t dims = static_cast<std::size_t>(class_count) * d;

  // single global neighborhood; fitness is maximized as -psi
  std::vector<swarm::Particle> particles(static_cast<std::size_t>(cfg.particles));
  std::vector<Rng> streams;
  streams.reserve(particles.size());
  for (int p = 0; p < cfg.particles; ++p) {
    streams.push_back(swarm::particle_stream(cfg.seed, 0, p));
    Rng& rng = streams.back();
    swarm::Particle& particle = particles[static_cast<std::size_t>(p)];
    particle.position.resize(dims);
    for (auto& x : particle.position) x = rng.uniform01();
    particle.velocity.resize(dims);
    for (auto& v : particle.velocity) v = rng.uniform(-cfg.max_velocity, cfg.max_velocity);
    particle.pbest_position = particle.position;
    particle.pbest_fitness = swarm::kWorstFitness;
  }

  std::vector<double> gbest_position = particles[0].position;
  double gbest_fitness = swarm::kWorstFitness;
  std::vector<double> history;
  std::vector<double> fitnesses(particles.size());

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < cfg.particles; ++p) {
      const Matrix centroids =
          reshape_centroids(particles[static_cast<std::size_t>(p)].position, class_count, d);
      fitnesses[static_cast<std::size_t>(p)] =
          -psc_fitness(options.variant, centroids, features, labels, options);
    }
    for (int p = 0; p < cfg.particles; ++p) {
      swarm::Particle& particle = particles[static_cast<std::size_t>(p)];
      if (fitnesses[static_cast<std::size_t>(p)] > particle.pbest_fitness) {
        particle.pbest_fitness = fitnesses[static_cast<std::size_t>(p)];
        particle.pbest_position = particle.position;
      }
      if (particle.pbest_fitness > gbest_fitness) {
        gbest_fitness = particle.pbest_fitness;
        gbest_position = particle.pbest_position;
      }
    }
    for (int p = 0; p < cfg.particles; ++p) {
      swarm::Particle& particle = particles[static_cast<std::size_t>(p)];
      swarm::update_velocity(particle, gbest_position, cfg, streams[static_cast<std::size_t>(p)]);
      swarm::update_position(particle);
    }
    history.push_back(gbest_fitness);
    const int t = static_cast<int>(history.size()) - 1;
    if (t >= cfg.stall_window) {
      const double then = history[static_cast<std::size_t>(t - cfg.stall_window)];
      if (std::isfinite(then) && gbest_fitness - then < cfg.stall_tolerance) break;
    }
  }

  PscModel model;
  model.class_centroids = reshape_centroids(gbest_position, class_count, d);
  model.variant = options.variant;
  model.training_fitness = -gbest_fitness;
  return model;
}

int psc_predict(const PscModel& model, std::span<const double> x) {
  if (x.size() != model.class_centroids.cols()) throw std::invalid_argument("dimension mismatch");
  return nearest_class(model.class_centroids, x);
}

std::vector<double> psc_scores(const PscModel& model, std::span<const double> x) {
  const std::size_t C = model.class_centroids.rows();
  std::vector<double> scores(C);
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    scores[c] = std::exp(-euclidean_distance(model.class_centroids.row_span(c), x));
    total += scores[c];
  }
  for (double& s : scores) s /= total;
  return scores;
}

}  // namespace sswarm::psc
