#pragma once

#include <cstdint>
#include <stdexcept>

namespace miron::engine {

struct EngineParams {
  double epsilon = 0.001;
  double eta_max = 1e-6;
  std::uint64_t rng_seed = 0;

  double theta() const { return 1.0 - epsilon; }

  /// Largest branch arity whose 1/n weights still clear θ after the loss of one input.
  std::size_t max_arity() const { return static_cast<std::size_t>(1.0 / (2.0 * epsilon)); }

  /// Throws std::invalid_argument unless 0 < ε < 0.01 and 0 < η_max < ε/10.
  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.01)) throw std::invalid_argument("epsilon must lie in (0, 0.01)");
    if (!(eta_max > 0.0 && eta_max < epsilon / 10.0)) throw std::invalid_argument("eta_max must lie in (0, epsilon/10)");
  }

  bool operator==(const EngineParams&) const = default;
};

inline double rho(double x) { return x <= 0.0 ? 0.0 : 1.0; }
inline double sigma(double x) { return x <= 0.0 ? 0.0 : x; }
inline double f(double x, const EngineParams& p) { return rho(x - p.theta()); }

}  // namespace miron::engine
