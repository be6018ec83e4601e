#include "rwr/walk.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "rwr/error.hpp"

namespace rwr {

void WeightTree::reserve(std::size_t n) {
  tree_.reserve(n + 1);
  weights_.reserve(n);
}

double WeightTree::prefix(std::size_t count) const {
  double sum = 0.0;
  for (std::size_t i = count; i > 0; i &= i - 1) sum += tree_[i];
  return sum;
}

void WeightTree::push_back(double weight) {
  if (tree_.empty()) tree_.push_back(0.0);
  const std::size_t i = weights_.size() + 1;
  const std::size_t low = i & (~i + 1);
  // Node i covers (i - low, i]; everything but the new entry is already stored.
  tree_.push_back(weight + prefix(i - 1) - prefix(i - low));
  weights_.push_back(weight);
  total_ += weight;
}

void WeightTree::add(std::size_t index, double delta) {
  weights_[index] += delta;
  total_ += delta;
  for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

std::size_t WeightTree::find(double target) const {
  const std::size_t n = weights_.size();
  std::size_t pos = 0;
  for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= n && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return std::min(pos, n - 1);
}

void WalkConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("memory parameter p must lie in (0, 1), got " + std::to_string(p));
  if (!(b >= 0.0)) throw ParameterError("reinforcement b must be nonnegative, got " + std::to_string(b));
  if (steps == StepKind::Stable) stable.validate();
}

WalkState::WalkState(int dim) : dim_(dim), positions_(static_cast<std::size_t>(dim), 0.0) {
  if (dim < 1) throw ParameterError("walk dimension must be positive");
}

void WalkState::reserve(std::int64_t n) {
  const auto count = static_cast<std::size_t>(n);
  weights_.reserve(count);
  increments_.reserve(count * static_cast<std::size_t>(dim_));
  positions_.reserve((count + 1) * static_cast<std::size_t>(dim_));
}

std::span<const double> WalkState::increment(std::int64_t k) const {
  if (k < 1 || k > time()) throw UsageError("increment index out of range");
  return std::span<const double>(increments_).subspan(static_cast<std::size_t>(k - 1) * dim_, dim_);
}

std::span<const double> WalkState::position(std::int64_t k) const {
  if (k < 0 || k > time()) throw UsageError("position index out of range");
  return std::span<const double>(positions_).subspan(static_cast<std::size_t>(k) * dim_, dim_);
}

void WalkState::append(std::span<const double> zeta) {
  const std::size_t d = static_cast<std::size_t>(dim_);
  const std::size_t last = positions_.size() - d;
  for (std::size_t j = 0; j < d; ++j) {
    increments_.push_back(zeta[j]);
    positions_.push_back(positions_[last + j] + zeta[j]);
  }
  weights_.push_back(1.0);
}

std::int64_t select_memory_index(const WalkState& state, Rng& rng) {
  if (state.time() < 1) throw UsageError("memory selection needs at least one past step");
  const auto& w = state.weights_;
  return static_cast<std::int64_t>(w.find(rng.uniform() * w.total())) + 1;
}

void draw_fresh_step(const WalkConfig& config, Rng& rng, std::span<double> out) {
  if (config.steps == StepKind::Rademacher) {
    out[0] = rng.uniform() < 0.5 ? 1.0 : -1.0;
  } else {
    sample_isotropic_stable(config.stable, rng, out);
  }
}

std::span<const double> advance(WalkState& state, const WalkConfig& config, Rng& rng, bool memory_time) {
  const std::size_t d = static_cast<std::size_t>(state.dim_);
  double buffer[8];
  std::vector<double> heap;
  std::span<double> zeta(buffer, d);
  if (d > 8) {
    heap.resize(d);
    zeta = heap;
  }
  if (state.time() == 0) {
    draw_fresh_step(config, rng, zeta);
  } else {
    const std::int64_t chosen = select_memory_index(state, rng);
    if (memory_time) {
      const auto past = state.increment(chosen);
      std::copy(past.begin(), past.end(), zeta.begin());
    } else {
      draw_fresh_step(config, rng, zeta);
    }
    if (memory_time || config.rule == UpdateRule::Always)
      state.weights_.add(static_cast<std::size_t>(chosen - 1), config.b);
  }
  state.append(zeta);
  return state.increment(state.time());
}

std::span<const double> step(WalkState& state, const WalkConfig& config, Rng& rng) {
  if (state.time() == 0) return advance(state, config, rng, false);
  const bool memory_time = rng.bernoulli(config.p);
  return advance(state, config, rng, memory_time);
}

WalkState run(const WalkConfig& config, std::int64_t n, Rng& rng) {
  config.validate();
  if (config.dim() != 1 && config.steps == StepKind::Rademacher)
    throw ParameterError("Rademacher steps are one-dimensional");
  WalkState state(config.dim());
  if (n <= 0) return state;
  state.reserve(n);
  for (std::int64_t k = 0; k < n; ++k) step(state, config, rng);
  return state;
}

}  // namespace rwr
