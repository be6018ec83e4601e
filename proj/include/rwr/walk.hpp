#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwr/rng.hpp"
#include "rwr/stable.hpp"

namespace rwr {

/// Prefix-sum (Fenwick) tree over positive weights with O(log n) append,
/// point update and proportional selection.
class WeightTree {
public:
  WeightTree() = default;

  void reserve(std::size_t n);
  void push_back(double weight);
  void add(std::size_t index, double delta);  // 0-based
  /// Smallest index whose inclusive prefix sum exceeds `target`.
  std::size_t find(double target) const;
  double prefix(std::size_t count) const;  // sum of the first `count` weights

  double total() const { return total_; }
  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t index) const { return weights_[index]; }
  std::span<const double> weights() const { return weights_; }

private:
  std::vector<double> tree_;  // 1-based Fenwick array, tree_[0] unused
  std::vector<double> weights_;
  double total_ = 0.0;
};

enum class UpdateRule {
  OnMemoryOnly,  // weight of I_n grows only when n is a memory time
  Always,        // weight of I_n grows at every n >= 2
};

enum class StepKind { Rademacher, Stable };

struct WalkConfig {
  double p = 0.5;
  double b = 0.0;
  UpdateRule rule = UpdateRule::OnMemoryOnly;
  StepKind steps = StepKind::Rademacher;
  StableParams stable{};  // used when steps == Stable

  int dim() const { return steps == StepKind::Stable ? stable.dim : 1; }
  void validate() const;
};

/// Live state of a memory-reinforced walk after n steps. Times are 1-based in
/// the accessors; increments and positions are stored row-major with stride dim.
class WalkState {
public:
  explicit WalkState(int dim = 1);

  std::int64_t time() const { return static_cast<std::int64_t>(weights_.size()); }
  int dim() const { return dim_; }

  std::span<const double> increment(std::int64_t k) const;  // zeta_k, 1 <= k <= n
  std::span<const double> position(std::int64_t k) const;   // S_k, 0 <= k <= n
  const WeightTree& weights() const { return weights_; }

  void reserve(std::int64_t n);

private:
  friend std::span<const double> advance(WalkState&, const WalkConfig&, Rng&, bool);
  friend std::span<const double> step(WalkState&, const WalkConfig&, Rng&);
  friend std::int64_t select_memory_index(const WalkState&, Rng&);

  void append(std::span<const double> zeta);

  int dim_;
  WeightTree weights_;
  std::vector<double> increments_;
  std::vector<double> positions_;
};

/// Draws I in 1..n with probability proportional to the current weights.
std::int64_t select_memory_index(const WalkState& state, Rng& rng);

/// Performs one step. RNG draw order: epsilon_n, then I_n, then (fresh times
/// only) the new step xi_n. The first step is xi_1.
std::span<const double> step(WalkState& state, const WalkConfig& config, Rng& rng);

/// Step with a prescribed memory/fresh decision; I_n and xi_n are still drawn from rng.
std::span<const double> advance(WalkState& state, const WalkConfig& config, Rng& rng, bool memory_time);

/// Fresh step from the configured source.
void draw_fresh_step(const WalkConfig& config, Rng& rng, std::span<double> out);

/// Runs n steps from S_0 = 0.
WalkState run(const WalkConfig& config, std::int64_t n, Rng& rng);

}  // namespace rwr
