#include "miron/engine/network.hpp"

#include <algorithm>

namespace miron::engine {

namespace {

void require(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(got) + ", expected " +
                            std::to_string(want));
  }
}

}  // namespace

Binary and_layer(const Binary& c, const Binary& r, const WeightSet& w, const EngineParams& p) {
  require(c.size(), w.conditions(), "condition vector");
  require(r.size(), w.rules(), "rule state");
  const auto cond = w.w_cond.multiply(c);
  const auto rule = w.w_rule.multiply(r);
  Binary out(w.cells());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<std::uint8_t>(f(cond[k] + rule[k], p));
  return out;
}

Binary wta_preselect(const Binary& r_and, const Binary& r, const Binary& c, const WeightSet& w, const EngineParams& p,
                     NoiseSource& noise) {
  require(r_and.size(), w.cells(), "AND vector");
  require(r.size(), w.rules(), "rule state");
  std::vector<double> x = w.w_cond.multiply(c);
  for (std::uint32_t m = 0; m < w.rules(); ++m) {
    if (!r[m]) continue;
    std::uint32_t best = UINT32_MAX;
    double best_value = 0.0;
    for (const auto& cell : w.w_rule.col(m)) {
      if (!(cell.value > 0.0) || !r_and[cell.index]) continue;
      const double v = 1.0 + noise.eta(cell.index, m);
      if (best == UINT32_MAX || v > best_value) {
        best = cell.index;
        best_value = v;
      }
    }
    if (best != UINT32_MAX) x[best] += 1.0;
  }
  Binary out(w.cells());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<std::uint8_t>(f(x[k], p));
  return out;
}

Binary or_layer(const Binary& r_wta, const WeightSet& w, const EngineParams& p) {
  require(r_wta.size(), w.cells(), "WTA vector");
  std::vector<double> pos, neg;
  w.w_or.multiply_split(r_wta, pos, neg);
  Binary out(w.rules());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = static_cast<std::uint8_t>(f(pos[m] * (1.0 - neg[m]), p));
  return out;
}

Binary action_layer(const Binary& r_next, const WeightSet& w, const EngineParams& p) {
  require(r_next.size(), w.rules(), "rule vector");
  const auto y = w.w_act.multiply(r_next);
  Binary out(w.actions());
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = static_cast<std::uint8_t>(f(y[q], p));
  return out;
}

StepOutput engine_step(const Binary& c, Binary& r, const WeightSet& w, const EngineParams& p, NoiseSource& noise) {
  StepOutput out;
  out.r_and = and_layer(c, r, w, p);
  out.r_wta = wta_preselect(out.r_and, r, c, w, p, noise);
  out.r_next = or_layer(out.r_wta, w, p);
  out.actions = action_layer(out.r_next, w, p);
  r = out.r_next;
  return out;
}

Stepper::Stepper(std::shared_ptr<const WeightSet> weights, EngineParams params, std::unique_ptr<NoiseSource> noise)
    : weights_(std::move(weights)), params_(params), noise_(std::move(noise)) {
  params_.validate();
  weights_->validate();
  if (!noise_) noise_ = std::make_unique<RngNoise>(params_.rng_seed, params_.eta_max);
  r_.assign(weights_->rules(), 0);
}

const StepOutput& Stepper::step(const Binary& c) {
  noise_->begin_step(steps_);
  last_ = engine_step(c, r_, *weights_, params_, *noise_);
  ++steps_;
  return last_;
}

bool Stepper::any_active() const { return std::any_of(r_.begin(), r_.end(), [](std::uint8_t v) { return v != 0; }); }

void Stepper::reset() { std::fill(r_.begin(), r_.end(), 0); }

}  // namespace miron::engine
