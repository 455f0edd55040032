#pragma once

#include <cmath>
#include <random>
#include <string>

#include "cruiseopt/io.hpp"
#include "cruiseopt/scenario.hpp"

namespace cruiseopt::test {

inline std::string data_path(const std::string& rel) {
  return std::string(CRUISEOPT_DATA_DIR) + "/" + rel;
}

inline Scenario table1(double alpha = 0.4) {
  Scenario s = load_scenario(data_path("scenarios/table1.json"));
  s.alpha = alpha;
  return s;
}

inline Scenario constant_wind(double alpha = 0.4) {
  Scenario s = load_scenario(data_path("scenarios/constant_wind.json"));
  s.alpha = alpha;
  return s;
}

/// Random admissible point of the cruise state space.
struct Draw {
  StateVector x;
  double heading;
  double throttle;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Draw draw() {
    Draw d;
    d.x << uniform(-2e5, 1.7e6), uniform(-3e5, 9e5), uniform(150.0, 300.0),
        uniform(40000.0, 59000.0);
    d.heading = uniform(-M_PI, M_PI);
    d.throttle = uniform(0.0, 1.0);
    return d;
  }

 private:
  std::mt19937_64 rng_;
};

/// Default central-difference steps per state coordinate.
inline const StateVector& fd_steps() {
  static const StateVector h{1.0, 1.0, 1e-4, 1e-2};
  return h;
}

/// max |a - b| / max(max |b|, floor), the matrix-wise relative error used
/// throughout the derivative checks.
template <class A, class B>
double rel_err(const A& a, const B& b, double floor = 1e-300) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

}  // namespace cruiseopt::test
