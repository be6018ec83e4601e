#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "rwr/rng.hpp"

namespace rwr {

/// Increasing tree on labels 1..n. Vectors are indexed by label; slot 0 is unused.
/// The root carries one half-edge, so degree[1] counts it.
struct PATree {
  double b = 0.0;
  std::vector<std::int64_t> parent;   // parent[1] == 0
  std::vector<std::int64_t> degree;
  std::vector<double> event_times;    // tau_1..tau_n (slot 0 unused), continuous builds only

  std::int64_t size() const { return static_cast<std::int64_t>(parent.size()) - 1; }
  double weight(std::int64_t i) const { return b * static_cast<double>(degree[i] - 1) + 1.0; }
  double total_weight() const;
  bool timed() const { return !event_times.empty(); }
};

PATree grow_discrete(std::int64_t n, double b, Rng& rng);
PATree grow_continuous(std::int64_t n, double b, Rng& rng);
/// Continuous build stopped at time t_max; the tree is T(t_max).
PATree grow_continuous_until(double t_max, double b, Rng& rng);

/// Throws std::logic_error if the weight/degree bookkeeping is off.
void check_tree(const PATree& tree);

struct Cluster {
  std::int64_t root = 0;
  std::int64_t size = 0;
  std::int64_t half_edges = 0;  // H_i
  double birth_time = 0.0;
};

/// Tree plus midpoint cuts. cut[i] refers to the edge from node i >= 2 to its parent.
/// Clusters are numbered 1, 2, ... in increasing root label; cluster_id is by label.
struct PATForest {
  PATree tree;
  std::vector<char> cut;
  std::vector<std::int64_t> cluster_id;
  std::vector<Cluster> clusters;  // clusters[0] unused

  std::int64_t cluster_count() const { return static_cast<std::int64_t>(clusters.size()) - 1; }
  std::int64_t cut_count() const;
};

/// Cuts each edge independently with probability 1 - p.
PATForest percolate(PATree tree, double p, Rng& rng);
/// Deterministic cut pattern; cuts[i] for labels i (entries 0 and 1 ignored).
PATForest percolate_with_cuts(PATree tree, std::span<const char> cuts);

/// Throws std::logic_error if a cluster invariant fails.
void check_forest(const PATForest& forest);

/// Y_i = b(|c_i| - 2 + H_i) + |c_i| at the build horizon; 0 for absent clusters.
double cluster_y_value(const PATForest& forest, std::int64_t i);

void write_tree_csv(const PATForest& forest, std::ostream& out);

/// Whole-tree martingale e^{-(b+1)t} Y(t) at t = t_max, from the node-count chain.
double sample_W(double t_max, double b, Rng& rng);

/// Root-cluster state of T(tau_n) after percolation, by the exact reduced chain.
struct RootCluster {
  std::int64_t size = 1;
  std::int64_t half_edges = 1;
  double y = 1.0;
};
RootCluster sample_root_cluster(std::int64_t n, double b, double p, Rng& rng);

/// |c_{1,n}| / n^kappa.
double sample_root_cluster_scaled(std::int64_t n, double b, double p, Rng& rng);

/// Size process of one cluster from its birth (size 1, one half-edge) up to
/// `horizon`. jump_times[k] is the time the size reaches k + 2.
struct ClusterPath {
  double horizon = 0.0;
  std::int64_t half_edges = 1;
  double y = 1.0;
  std::vector<double> jump_times;

  /// Size at elapsed time s (right-continuous); 0 for s < 0.
  std::int64_t size_at(double s) const;
};
ClusterPath sample_cluster_path(double horizon, double b, double p, Rng& rng);

/// f(x) = |T_1((ln(1-p) - ln x)/(b+1))| on an ascending positive grid.
std::vector<double> sample_f_path(std::span<const double> x_grid, double b, double p, Rng& rng);

/// (lower, upper) = cluster size of one fresh cluster read at t_minus and t_plus.
std::pair<std::int64_t, std::int64_t> sample_Xbar_Xunder(std::int64_t i, std::int64_t n, double eps, double b, double p,
                                                         Rng& rng);

}  // namespace rwr
