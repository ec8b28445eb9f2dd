#pragma once

// Local-best PSO primitives: particle state, velocity/position updates with
// clamping, and stochastic reset. The objective is maximized; the worst
// fitness sentinel is -infinity.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sswarm/rng.hpp"

namespace sswarm::swarm {

inline constexpr double kWorstFitness = -std::numeric_limits<double>::infinity();

struct PsoConfig {
  double inertia = 0.72;
  double cognitive = 1.49;       // scales the pbest attraction
  double social = 1.49;          // scales the lbest attraction
  int particles = 10;            // per neighborhood
  int max_iterations = 100;
  int stall_window = 20;         // iterations without improvement before stopping
  double stall_tolerance = 1e-6;
  double max_velocity = 0.25;    // per-dimension speed clamp
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

struct Particle {
  std::vector<double> position;        // in [0,1]^d after every update
  std::vector<double> velocity;        // |v_k| <= max_velocity
  std::vector<double> pbest_position;
  double pbest_fitness = kWorstFitness;
};

struct Neighborhood {
  std::vector<Particle> particles;
  std::vector<double> lbest_position;
  double lbest_fitness = kWorstFitness;  // non-decreasing once finite
  int bound_class = 0;
};

// Deterministic substream for one particle; evaluation order and thread
// scheduling cannot perturb the draws.
inline Rng particle_stream(std::uint64_t seed, int neighborhood, int particle) {
  return Rng(mix64(seed, static_cast<std::uint64_t>(neighborhood) + 1,
                   static_cast<std::uint64_t>(particle) + 1));
}

// v' = w*v + c1*r1*(pbest - x) + c2*r2*(lbest - x) with fresh per-dimension
// uniform(0,1) draws (r1 first, then r2), then clamped per dimension.
template <class R>
void update_velocity(Particle& p, std::span<const double> lbest, const PsoConfig& cfg, R& rng) {
  for (std::size_t k = 0; k < p.position.size(); ++k) {
    const double r1 = rng.uniform01();
    const double r2 = rng.uniform01();
    double v = cfg.inertia * p.velocity[k] +
               cfg.cognitive * r1 * (p.pbest_position[k] - p.position[k]) +
               cfg.social * r2 * (lbest[k] - p.position[k]);
    p.velocity[k] = std::clamp(v, -cfg.max_velocity, cfg.max_velocity);
  }
}

// x' = x + v, clamped to the unit box; a velocity component that hits a
// wall is zeroed (absorbing boundary).
void update_position(Particle& p);

// Uniform position in [0,1]^d, velocity in [-max_velocity, max_velocity]^d,
// pbest moved to the new position with the worst-fitness sentinel.
template <class R>
void reset_particle(Particle& p, const PsoConfig& cfg, R& rng) {
  for (auto& x : p.position) x = rng.uniform01();
  for (auto& v : p.velocity) v = rng.uniform(-cfg.max_velocity, cfg.max_velocity);
  p.pbest_position = p.position;
  p.pbest_fitness = kWorstFitness;
}

}  // namespace sswarm::swarm
