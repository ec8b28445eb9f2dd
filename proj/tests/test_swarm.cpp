#include "doctest.h"

#include <cmath>

#include "sswarm/swarm.hpp"

using namespace sswarm;
using namespace sswarm::swarm;

namespace {

struct OnesRng {
  double uniform01() { return 1.0; }
};

Particle make_particle(std::vector<double> x, std::vector<double> v) {
  Particle p;
  p.position = x;
  p.velocity = std::move(v);
  p.pbest_position = std::move(x);
  return p;
}

}  // namespace

TEST_SUITE("swarm") {

TEST_CASE("config validation") {
  PsoConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.inertia = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PsoConfig{};
  cfg.cognitive = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PsoConfig{};
  cfg.max_velocity = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PsoConfig{};
  cfg.particles = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("velocity update vanishes at consensus") {
  PsoConfig cfg;
  Rng rng(3);
  Particle p = make_particle({0.4, 0.6}, {0.0, 0.0});
  const std::vector<double> lbest = p.position;
  for (int step = 0; step < 50; ++step) {
    update_velocity(p, lbest, cfg, rng);
    CHECK(p.velocity[0] == 0.0);
    CHECK(p.velocity[1] == 0.0);
    update_position(p);
    CHECK(p.position[0] == 0.4);
    CHECK(p.position[1] == 0.6);
  }
}

TEST_CASE("velocity update forced arithmetic with unit draws") {
  PsoConfig cfg;
  cfg.inertia = 0.0;  // validated range excludes 1; exercise the terms directly
  cfg.cognitive = 1.0;
  cfg.social = 1.0;
  cfg.max_velocity = 10.0;
  OnesRng ones;
  Particle p = make_particle({0.0}, {0.0});
  p.pbest_position = {2.0};
  const std::vector<double> lbest{4.0};
  update_velocity(p, lbest, cfg, ones);
  CHECK(p.velocity[0] == 6.0);  // 1*(2-0) + 1*(4-0)

  p.velocity = {0.0};
  cfg.max_velocity = 3.0;
  update_velocity(p, lbest, cfg, ones);
  CHECK(p.velocity[0] == 3.0);  // clamped
}

TEST_CASE("velocity clamp applies per dimension") {
  PsoConfig cfg;
  cfg.max_velocity = 3.0;
  cfg.cognitive = 5.0;
  cfg.social = 5.0;
  OnesRng ones;
  Particle p = make_particle({0.0, 0.5}, {0.0, 0.0});
  p.pbest_position = {1.0, 0.5};
  update_velocity(p, std::vector<double>{1.0, 0.5}, cfg, ones);
  CHECK(p.velocity[0] == 3.0);  // 5+5 = 10 -> clamp
  CHECK(p.velocity[1] == 0.0);
}

TEST_CASE("position update follows x + v with absorbing walls") {
  Particle p = make_particle({0.5}, {0.2});
  update_position(p);
  CHECK(p.position[0] == doctest::Approx(0.7).epsilon(1e-15));

  p = make_particle({0.9}, {0.3});
  update_position(p);
  CHECK(p.position[0] == 1.0);
  CHECK(p.velocity[0] == 0.0);

  p = make_particle({0.3}, {0.0});
  update_position(p);
  CHECK(p.position[0] == 0.3);
}

TEST_CASE("reset lands in range with the worst-fitness sentinel") {
  PsoConfig cfg;
  Rng rng(17);
  Particle p = make_particle({2.0, -1.0}, {9.0, 9.0});
  p.pbest_fitness = 0.5;
  reset_particle(p, cfg, rng);
  for (double x : p.position) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  for (double v : p.velocity) {
    CHECK(std::abs(v) <= cfg.max_velocity);
  }
  CHECK(p.pbest_fitness == kWorstFitness);
  CHECK(p.pbest_position == p.position);
}

TEST_CASE("reset is a pure function of the stream state") {
  PsoConfig cfg;
  Rng a(123), b(123);
  Particle pa = make_particle({0.5, 0.5, 0.5}, {0, 0, 0});
  Particle pb = pa;
  reset_particle(pa, cfg, a);
  reset_particle(pb, cfg, b);
  CHECK(pa.position == pb.position);
  CHECK(pa.velocity == pb.velocity);
}

TEST_CASE("random update steps keep position and velocity bounded") {
  PsoConfig cfg;
  Rng rng(2027);
  Particle p = make_particle({0.2, 0.8, 0.5}, {0.1, -0.1, 0.0});
  std::vector<double> lbest{0.9, 0.1, 0.4};
  for (int step = 0; step < 1000; ++step) {
    if (step % 97 == 0) {
      for (auto& v : lbest) v = rng.uniform01();
      p.pbest_position = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
    }
    update_velocity(p, lbest, cfg, rng);
    update_position(p);
    for (double x : p.position) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
    for (double v : p.velocity) CHECK(std::abs(v) <= cfg.max_velocity);
  }
}

TEST_CASE("particle streams are deterministic and distinct") {
  Rng a = particle_stream(42, 1, 2);
  Rng b = particle_stream(42, 1, 2);
  Rng c = particle_stream(42, 2, 1);
  const double va = a.uniform01();
  CHECK(va == b.uniform01());
  CHECK(va != c.uniform01());
}

}  // TEST_SUITE
