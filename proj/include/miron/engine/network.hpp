#pragma once

#include "miron/engine/params.hpp"
#include "miron/engine/weights.hpp"

#include <memory>
#include <random>

namespace miron::engine {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Source of the small WTA tie-breaking values η[k, m] ∈ [0, η_max).
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual void begin_step(std::uint64_t /*step*/) {}
  virtual double eta(std::uint32_t k, std::uint32_t m) = 0;
};

/// Fresh uniform draws from a seeded 64-bit Mersenne Twister, in the order requested.
class RngNoise final : public NoiseSource {
 public:
  RngNoise(std::uint64_t seed, double eta_max) : rng_(seed), eta_max_(eta_max) {}
  double eta(std::uint32_t, std::uint32_t) override {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53 * eta_max_;
  }

 private:
  std::mt19937_64 rng_;
  double eta_max_;
};

Binary and_layer(const Binary& c, const Binary& r, const WeightSet& w, const EngineParams& p);

/// Winner-takes-all preselection. For every active predecessor column m, the cells k with
/// w_rule[k,m] > 0 and r_and[k] = 1 compete with value 1 + η[k,m]; the column maximum
/// (first index on an exact tie) contributes 1 to cell k, which is then thresholded
/// together with w_cond·c.
Binary wta_preselect(const Binary& r_and, const Binary& r, const Binary& c, const WeightSet& w, const EngineParams& p,
                     NoiseSource& noise);

/// r_next = f(σ(W)·x ⊙ (1 − σ(−W)·x)) with W = w_or, σ applied to each weight.
Binary or_layer(const Binary& r_wta, const WeightSet& w, const EngineParams& p);

Binary action_layer(const Binary& r_next, const WeightSet& w, const EngineParams& p);

struct StepOutput {
  Binary r_and;
  Binary r_wta;
  Binary r_next;
  Binary actions;
};

/// One synchronous step; `r` is replaced by r_next.
StepOutput engine_step(const Binary& c, Binary& r, const WeightSet& w, const EngineParams& p, NoiseSource& noise);

/// Owns the rule state and noise source of one network instance. Single-threaded.
class Stepper {
 public:
  /// Uses RngNoise seeded from `params.rng_seed` unless a noise source is given.
  Stepper(std::shared_ptr<const WeightSet> weights, EngineParams params, std::unique_ptr<NoiseSource> noise = nullptr);

  const StepOutput& step(const Binary& c);
  const Binary& rules() const { return r_; }
  const StepOutput& last() const { return last_; }
  std::uint64_t steps() const { return steps_; }
  const WeightSet& weights() const { return *weights_; }
  const EngineParams& params() const { return params_; }
  bool any_active() const;
  /// Clears the rule state (not the noise stream).
  void reset();

 private:
  std::shared_ptr<const WeightSet> weights_;
  EngineParams params_;
  std::unique_ptr<NoiseSource> noise_;
  Binary r_;
  StepOutput last_;
  std::uint64_t steps_ = 0;
};

}  // namespace miron::engine
