#include "sswarm/swarm.hpp"

#include <stdexcept>

namespace sswarm::swarm {

void PsoConfig::validate() const {
  if (!(inertia >= 0.0 && inertia < 1.0)) {
    throw std::invalid_argument("inertia must lie in [0, 1)");
  }
  if (!(cognitive > 0.0) || !(social > 0.0)) {
    throw std::invalid_argument("cognitive and social coefficients must be positive");
  }
  if (particles < 2) throw std::invalid_argument("need at least 2 particles per neighborhood");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (stall_window < 1) throw std::invalid_argument("stall_window must be at least 1");
  if (!(max_velocity > 0.0)) throw std::invalid_argument("max_velocity must be positive");
}

void update_position(Particle& p) {
  for (std::size_t k = 0; k < p.position.size(); ++k) {
    double x = p.position[k] + p.velocity[k];
    if (x < 0.0) {
      x = 0.0;
      p.velocity[k] = 0.0;
    } else if (x > 1.0) {
      x = 1.0;
      p.velocity[k] = 0.0;
    }
    p.position[k] = x;
  }
}

}  // namespace sswarm::swarm
