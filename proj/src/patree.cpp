#include "rwr/patree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rwr/error.hpp"
#include "rwr/theory.hpp"

namespace rwr {

namespace {

void check_b(double b) {
  if (!(b >= 0.0)) throw ParameterError("reinforcement b must be nonnegative, got " + std::to_string(b));
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1), got " + std::to_string(p));
}

double total_weight_of(std::int64_t k, double b) {
  return static_cast<double>(k) + b * static_cast<double>(k - 1);
}

// Weight-proportional choice among labels 1..k. The weight b*children + 1 splits
// into a uniform part (mass k) and a part proportional to child counts (mass
// b(k-1)), which is the parent of a uniform non-root node.
std::int64_t pick_target(const PATree& tree, std::int64_t k, Rng& rng) {
  const double kd = static_cast<double>(k);
  const double u = rng.uniform() * total_weight_of(k, tree.b);
  if (u < kd) return std::min<std::int64_t>(static_cast<std::int64_t>(u) + 1, k);
  const auto j = std::min<std::int64_t>(2 + static_cast<std::int64_t>((u - kd) / tree.b), k);
  return tree.parent[j];
}

PATree seed_tree(double b, std::int64_t reserve) {
  PATree tree;
  tree.b = b;
  tree.parent.reserve(reserve + 1);
  tree.degree.reserve(reserve + 1);
  tree.parent = {0, 0};
  tree.degree = {0, 1};
  return tree;
}

void attach(PATree& tree, std::int64_t target) {
  tree.parent.push_back(target);
  tree.degree.push_back(1);
  ++tree.degree[target];
}

}  // namespace

double PATree::total_weight() const {
  double sum = 0.0;
  for (std::int64_t i = 1; i <= size(); ++i) sum += weight(i);
  return sum;
}

PATree grow_discrete(std::int64_t n, double b, Rng& rng) {
  if (n < 1) throw ParameterError("tree size must be >= 1");
  check_b(b);
  PATree tree = seed_tree(b, n);
  for (std::int64_t k = 1; k < n; ++k) attach(tree, pick_target(tree, k, rng));
  return tree;
}

PATree grow_continuous(std::int64_t n, double b, Rng& rng) {
  if (n < 1) throw ParameterError("tree size must be >= 1");
  check_b(b);
  PATree tree = seed_tree(b, n);
  tree.event_times.reserve(n + 1);
  tree.event_times = {0.0, 0.0};
  double t = 0.0;
  for (std::int64_t k = 1; k < n; ++k) {
    t += rng.exponential(total_weight_of(k, b));
    attach(tree, pick_target(tree, k, rng));
    tree.event_times.push_back(t);
  }
  return tree;
}

PATree grow_continuous_until(double t_max, double b, Rng& rng) {
  if (!(t_max >= 0.0) || std::isinf(t_max)) throw ParameterError("t_max must be finite and nonnegative");
  check_b(b);
  PATree tree = seed_tree(b, 16);
  tree.event_times = {0.0, 0.0};
  double t = 0.0;
  for (std::int64_t k = 1;; ++k) {
    t += rng.exponential(total_weight_of(k, b));
    if (t > t_max) break;
    attach(tree, pick_target(tree, k, rng));
    tree.event_times.push_back(t);
  }
  return tree;
}

void check_tree(const PATree& tree) {
  const std::int64_t n = tree.size();
  if (n < 1 || tree.degree.size() != tree.parent.size()) throw std::logic_error("malformed tree arrays");
  std::vector<std::int64_t> degree(n + 1, 0);
  degree[1] = 1;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (tree.parent[i] < 1 || tree.parent[i] >= i) throw std::logic_error("tree is not increasing");
    ++degree[i];
    ++degree[tree.parent[i]];
  }
  std::int64_t degree_sum = 0;
  for (std::int64_t i = 1; i <= n; ++i) {
    if (degree[i] != tree.degree[i]) throw std::logic_error("degree bookkeeping mismatch at node " + std::to_string(i));
    degree_sum += degree[i];
  }
  if (degree_sum != 2 * (n - 1) + 1) throw std::logic_error("degree sum mismatch");
  if (tree.timed()) {
    if (tree.event_times.size() != tree.parent.size()) throw std::logic_error("event time count mismatch");
    for (std::int64_t i = 2; i <= n; ++i)
      if (!(tree.event_times[i] > tree.event_times[i - 1])) throw std::logic_error("event times not increasing");
  }
}

std::int64_t PATForest::cut_count() const {
  return std::count(cut.begin(), cut.end(), char{1});
}

PATForest percolate(PATree tree, double p, Rng& rng) {
  check_p(p);
  const std::int64_t n = tree.size();
  std::vector<char> cuts(n + 1, 0);
  for (std::int64_t i = 2; i <= n; ++i) cuts[i] = rng.uniform() > p ? 1 : 0;
  return percolate_with_cuts(std::move(tree), cuts);
}

PATForest percolate_with_cuts(PATree tree, std::span<const char> cuts) {
  const std::int64_t n = tree.size();
  if (static_cast<std::int64_t>(cuts.size()) < n + 1) throw UsageError("cut vector shorter than the tree");
  PATForest forest;
  forest.cut.assign(n + 1, 0);
  forest.cluster_id.assign(n + 1, 0);
  forest.clusters.reserve(static_cast<std::size_t>(std::count(cuts.begin() + 2, cuts.begin() + n + 1, char{1})) + 2);
  forest.clusters.emplace_back();
  const double no_time = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t i = 1; i <= n; ++i) {
    const bool root = i == 1 || cuts[i] != 0;
    if (i >= 2) forest.cut[i] = cuts[i] != 0 ? 1 : 0;
    if (root) {
      Cluster c;
      c.root = i;
      c.half_edges = 1;
      c.birth_time = tree.timed() ? tree.event_times[i] : no_time;
      forest.clusters.push_back(c);
      forest.cluster_id[i] = forest.cluster_count();
      if (i >= 2) ++forest.clusters[forest.cluster_id[tree.parent[i]]].half_edges;
    } else {
      forest.cluster_id[i] = forest.cluster_id[tree.parent[i]];
    }
    ++forest.clusters[forest.cluster_id[i]].size;
  }
  forest.tree = std::move(tree);
  return forest;
}

void check_forest(const PATForest& forest) {
  check_tree(forest.tree);
  const std::int64_t n = forest.tree.size();
  std::int64_t sizes = 0;
  double y_sum = 0.0;
  for (std::int64_t c = 1; c <= forest.cluster_count(); ++c) {
    const Cluster& cl = forest.clusters[c];
    if (cl.half_edges < 1) throw std::logic_error("live cluster without a half-edge");
    if (c > 1) {
      if (cl.root <= forest.clusters[c - 1].root) throw std::logic_error("clusters not ordered by root label");
      if (forest.tree.timed() && !(cl.birth_time > forest.clusters[c - 1].birth_time))
        throw std::logic_error("root-label and birth-time orders disagree");
    }
    sizes += cl.size;
    y_sum += cluster_y_value(forest, c);
  }
  if (sizes != n) throw std::logic_error("cluster sizes do not sum to n");
  if (forest.cluster_count() != 1 + forest.cut_count()) throw std::logic_error("cluster count != 1 + cuts");
  const double expected = forest.tree.b * static_cast<double>(n - 1) + static_cast<double>(n);
  if (std::abs(y_sum - expected) > 1e-9 * expected) throw std::logic_error("sum of Y_i differs from b(n-1)+n");
}

double cluster_y_value(const PATForest& forest, std::int64_t i) {
  if (i < 1 || i > forest.cluster_count()) return 0.0;
  const Cluster& c = forest.clusters[i];
  return forest.tree.b * static_cast<double>(c.size - 2 + c.half_edges) + static_cast<double>(c.size);
}

void write_tree_csv(const PATForest& forest, std::ostream& out) {
  out << "node,parent,cut,cluster\n";
  for (std::int64_t i = 1; i <= forest.tree.size(); ++i)
    out << i << ',' << forest.tree.parent[i] << ',' << int(forest.cut[i]) << ',' << forest.cluster_id[i] << '\n';
}

double sample_W(double t_max, double b, Rng& rng) {
  if (!(t_max >= 0.0) || std::isinf(t_max)) throw ParameterError("t_max must be finite and nonnegative");
  check_b(b);
  double y = 1.0;
  double t = rng.exponential(y);
  while (t <= t_max) {
    y += b + 1.0;
    t += rng.exponential(y);
  }
  return std::exp(-(b + 1.0) * t_max) * y;
}

RootCluster sample_root_cluster(std::int64_t n, double b, double p, Rng& rng) {
  if (n < 1) throw ParameterError("tree size must be >= 1");
  check_b(b);
  check_p(p);
  RootCluster rc;
  for (std::int64_t k = 1; k < n; ++k) {
    if (rng.uniform() * total_weight_of(k, b) >= rc.y) continue;
    if (rng.uniform() < p) {
      ++rc.size;
      rc.y += b + 1.0;
    } else {
      ++rc.half_edges;
      rc.y += b;
    }
  }
  return rc;
}

double sample_root_cluster_scaled(std::int64_t n, double b, double p, Rng& rng) {
  const RootCluster rc = sample_root_cluster(n, b, p, rng);
  return static_cast<double>(rc.size) / std::pow(static_cast<double>(n), theory::kappa_strong(b, p));
}

std::int64_t ClusterPath::size_at(double s) const {
  if (s < 0.0) return 0;
  if (s > horizon) throw UsageError("cluster path read beyond its horizon");
  return 1 + (std::upper_bound(jump_times.begin(), jump_times.end(), s) - jump_times.begin());
}

ClusterPath sample_cluster_path(double horizon, double b, double p, Rng& rng) {
  if (!(horizon >= 0.0) || std::isinf(horizon)) throw ParameterError("cluster horizon must be finite and nonnegative");
  check_b(b);
  check_p(p);
  ClusterPath path;
  path.horizon = horizon;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(path.y);
    if (t > horizon) break;
    if (rng.uniform() < p) {
      path.jump_times.push_back(t);
      path.y += b + 1.0;
    } else {
      ++path.half_edges;
      path.y += b;
    }
  }
  return path;
}

std::vector<double> sample_f_path(std::span<const double> x_grid, double b, double p, Rng& rng) {
  if (x_grid.empty()) throw ParameterError("f-path grid is empty");
  check_b(b);
  check_p(p);
  for (std::size_t k = 0; k < x_grid.size(); ++k) {
    if (!(x_grid[k] > 0.0)) throw ParameterError("f-path grid must be positive");
    if (k > 0 && !(x_grid[k] > x_grid[k - 1])) throw ParameterError("f-path grid must be strictly ascending");
  }
  const double lq = std::log(1.0 - p);
  auto elapsed = [&](double x) { return (lq - std::log(x)) / (b + 1.0); };
  const ClusterPath path = sample_cluster_path(std::max(0.0, elapsed(x_grid.front())), b, p, rng);
  std::vector<double> f(x_grid.size());
  for (std::size_t k = 0; k < x_grid.size(); ++k) f[k] = static_cast<double>(path.size_at(elapsed(x_grid[k])));
  return f;
}

std::pair<std::int64_t, std::int64_t> sample_Xbar_Xunder(std::int64_t i, std::int64_t n, double eps, double b, double p,
                                                         Rng& rng) {
  if (i < 2) throw ParameterError("the upper birth-time bound needs i >= 2");
  const auto [t_minus, t_plus] = theory::birth_time_bounds(n, i, b, p, eps);
  const ClusterPath path = sample_cluster_path(std::max(0.0, t_plus), b, p, rng);
  return {path.size_at(t_minus), path.size_at(t_plus)};
}

}  // namespace rwr
