#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "rwr/error.hpp"
#include "rwr/patree.hpp"
#include "rwr/stats.hpp"
#include "rwr/theory.hpp"

using namespace rwr;

TEST_CASE("small trees") {
  Rng rng(1);
  const PATree one = grow_discrete(1, 0.5, rng);
  CHECK(one.size() == 1);
  CHECK(one.degree[1] == 1);
  CHECK(one.total_weight() == doctest::Approx(1.0));
  const PATree two = grow_discrete(2, 0.5, rng);
  CHECK(two.parent[2] == 1);
  CHECK(two.degree[1] == 2);
  CHECK(two.degree[2] == 1);
  CHECK(two.weight(1) == doctest::Approx(1.5));
  CHECK(two.total_weight() == doctest::Approx(2.5));
  CHECK_THROWS_AS(grow_discrete(0, 0.5, rng), ParameterError);
  CHECK_THROWS_AS(grow_discrete(3, -0.5, rng), ParameterError);
}

TEST_CASE("third node attaches to the root with probability (b+1)/(b+2)") {
  for (double b : {0.0, 10.0}) {
    Rng rng(static_cast<std::uint64_t>(b) + 3);
    constexpr int reps = 100000;
    std::vector<double> hit(reps);
    for (double& h : hit) h = grow_discrete(3, b, rng).parent[3] == 1 ? 1.0 : 0.0;
    const Moments m = mc_moments(hit);
    CHECK(std::abs(m.mean - (b + 1.0) / (b + 2.0)) < 3.5 * m.se_mean);
  }
}

TEST_CASE("four-node tree law") {
  const double b = 1.5;
  // exact probabilities of (parent[3], parent[4])
  std::map<std::pair<int, int>, double> law;
  for (int p3 : {1, 2}) {
    double deg[5] = {0, 2, 1, 0, 0};
    const double w3 = b * (deg[p3] - 1) + 1;
    const double pr3 = w3 / (2.0 + b);
    deg[p3] += 1;
    deg[3] = 1;
    double total = 0.0;
    for (int i = 1; i <= 3; ++i) total += b * (deg[i] - 1) + 1;
    for (int p4 = 1; p4 <= 3; ++p4) law[{p3, p4}] = pr3 * (b * (deg[p4] - 1) + 1) / total;
  }
  double mass = 0.0;
  for (const auto& [k, v] : law) mass += v;
  CHECK(mass == doctest::Approx(1.0));
  for (bool continuous : {false, true}) {
    Rng rng(continuous ? 77 : 78);
    constexpr int reps = 120000;
    std::map<std::pair<int, int>, double> count;
    for (int r = 0; r < reps; ++r) {
      const PATree t = continuous ? grow_continuous(4, b, rng) : grow_discrete(4, b, rng);
      count[{static_cast<int>(t.parent[3]), static_cast<int>(t.parent[4])}] += 1.0;
    }
    std::vector<double> obs, expd;
    for (const auto& [k, v] : law) {
      obs.push_back(count[k]);
      expd.push_back(v * reps);
    }
    CHECK(chi_square_test(obs, expd).p_value > 1e-3);
  }
}

TEST_CASE("continuous-time event clock") {
  Rng rng(9);
  std::vector<double> gap(50000), mart(50000);
  const double b = 0.8;
  const std::int64_t n = 30;
  for (std::size_t r = 0; r < gap.size(); ++r) {
    const PATree t = grow_continuous(n, b, rng);
    CHECK(t.event_times[1] == 0.0);
    gap[r] = t.event_times[2] - t.event_times[1];
    // Y(t) = b(n-1)+n is a martingale after scaling by e^{-(b+1)t}; checked at the last event
    mart[r] = std::exp(-(b + 1.0) * t.event_times[n]) * (b * (n - 1) + n);
  }
  const Moments g = mc_moments(gap);
  CHECK(std::abs(g.mean - 1.0) < 4.0 * g.se_mean);
  // the stopped value is biased at the event time, so only its order is checked
  CHECK(mc_moments(mart).mean > 0.5);
  CHECK(mc_moments(mart).mean < 2.0);
}

TEST_CASE("whole-tree martingale W") {
  Rng rng(10);
  for (double b : {0.0, 1.0}) {
    const double t_max = std::log(2e4) / (b + 1.0);
    std::vector<double> w(20000);
    for (double& v : w) v = sample_W(t_max, b, rng);
    const Moments m = mc_moments(w);
    CHECK(std::abs(m.mean - 1.0) < 4.0 * m.se_mean);
    CHECK(std::abs(m.variance - (b + 1.0)) < 4.0 * m.se_variance + 0.01 * (b + 1.0));
  }
  Rng a(3);
  const PATree t = grow_continuous_until(3.0, 1.0, a);
  check_tree(t);
  CHECK(t.event_times.back() <= 3.0);
  CHECK_THROWS_AS(sample_W(-1.0, 0.0, a), ParameterError);
}

TEST_CASE("forced cut patterns") {
  // 1 -> {2, 3}, 2 -> {4, 5}
  PATree t;
  t.b = 1.0;
  t.parent = {0, 0, 1, 1, 2, 2};
  t.degree = {0, 3, 3, 1, 1, 1};
  check_tree(t);
  const std::vector<char> cuts = {0, 0, 1, 0, 0, 1};
  const PATForest f = percolate_with_cuts(t, cuts);
  check_forest(f);
  REQUIRE(f.cluster_count() == 3);
  CHECK(f.cut_count() == 2);
  CHECK(f.clusters[1].root == 1);
  CHECK(f.clusters[1].size == 2);       // {1, 3}
  CHECK(f.clusters[1].half_edges == 2);  // own plus the cut to 2
  CHECK(f.clusters[2].root == 2);
  CHECK(f.clusters[2].size == 2);  // {2, 4}
  CHECK(f.clusters[2].half_edges == 2);
  CHECK(f.clusters[3].size == 1);
  CHECK(f.cluster_id[4] == 2);
  CHECK(f.cluster_id[5] == 3);
  CHECK(cluster_y_value(f, 1) == doctest::Approx(1.0 * (2 - 2 + 2) + 2));
  CHECK(cluster_y_value(f, 3) == doctest::Approx(1.0));
  CHECK(cluster_y_value(f, 4) == 0.0);
  std::ostringstream csv;
  write_tree_csv(f, csv);
  CHECK(csv.str().rfind("node,parent,cut,cluster\n1,0,0,1\n2,1,1,2\n", 0) == 0);
  CHECK_THROWS_AS(percolate_with_cuts(t, std::vector<char>(3, 0)), UsageError);
}

TEST_CASE("random forests satisfy the structural invariants") {
  Rng rng(31);
  for (double b : {0.0, 0.5, 2.0})
    for (double p : {0.2, 0.7}) {
      const std::int64_t n = 2000;
      std::vector<double> count(400);
      for (std::size_t r = 0; r < count.size(); ++r) {
        const PATForest f = percolate(r % 2 ? grow_continuous(n, b, rng) : grow_discrete(n, b, rng), p, rng);
        check_forest(f);
        count[r] = static_cast<double>(f.cluster_count());
      }
      const Moments m = mc_moments(count);
      CHECK(std::abs(m.mean - (1.0 + (n - 1) * (1.0 - p))) < 4.0 * m.se_mean);
    }
}

TEST_CASE("invariant checks detect corruption") {
  Rng rng(2);
  PATree t = grow_continuous(50, 1.0, rng);
  check_tree(t);
  PATree bad = t;
  bad.parent[10] = 20;
  CHECK_THROWS_AS(check_tree(bad), std::logic_error);
  bad = t;
  bad.degree[5] += 1;
  CHECK_THROWS_AS(check_tree(bad), std::logic_error);
  bad = t;
  std::swap(bad.event_times[7], bad.event_times[8]);
  CHECK_THROWS_AS(check_tree(bad), std::logic_error);
  PATForest f = percolate(t, 0.5, rng);
  f.clusters[1].size += 1;
  CHECK_THROWS_AS(check_forest(f), std::logic_error);
}

TEST_CASE("discrete and continuous builds agree in law") {
  Rng rng(40);
  const std::int64_t n = 300;
  std::vector<double> a(4000), c(4000);
  for (std::size_t r = 0; r < a.size(); ++r) {
    a[r] = static_cast<double>(grow_discrete(n, 1.0, rng).degree[1]);
    c[r] = static_cast<double>(grow_continuous(n, 1.0, rng).degree[1]);
  }
  CHECK(ks_two_sample(a, c).p_value > 1e-3);
}

TEST_CASE("reduced root-cluster chain matches the full forest") {
  for (auto [b, p] : {std::pair{0.0, 0.5}, {1.0, 0.6}}) {
    Rng rng(50);
    const std::int64_t n = 500;
    std::vector<double> s1(5000), s2(5000), h1(5000), h2(5000);
    for (std::size_t r = 0; r < s1.size(); ++r) {
      const RootCluster rc = sample_root_cluster(n, b, p, rng);
      s1[r] = static_cast<double>(rc.size);
      h1[r] = static_cast<double>(rc.half_edges);
      CHECK(rc.y == doctest::Approx(b * (rc.size - 2 + rc.half_edges) + rc.size));
      const PATForest f = percolate(grow_discrete(n, b, rng), p, rng);
      s2[r] = static_cast<double>(f.clusters[1].size);
      h2[r] = static_cast<double>(f.clusters[1].half_edges);
    }
    CHECK(ks_two_sample(s1, s2).p_value > 1e-3);
    CHECK(ks_two_sample(h1, h2).p_value > 1e-3);
    // each attachment joins with probability p, so (size-1)/(half_edges-1) -> p/(1-p)
    double ds = 0.0, dh = 0.0;
    for (std::size_t r = 0; r < s1.size(); ++r) {
      ds += s1[r] - 1.0;
      dh += h1[r] - 1.0;
    }
    CHECK(ds / dh == doctest::Approx(p / (1.0 - p)).epsilon(0.03));
  }
}

TEST_CASE("fresh cluster path matches the root cluster of a continuous tree") {
  Rng rng(60);
  const double b = 1.0, p = 0.5, t = 2.0;
  std::vector<double> a(4000), c(4000);
  for (std::size_t r = 0; r < a.size(); ++r) {
    a[r] = static_cast<double>(sample_cluster_path(t, b, p, rng).size_at(t));
    const PATForest f = percolate(grow_continuous_until(t, b, rng), p, rng);
    c[r] = static_cast<double>(f.clusters[1].size);
  }
  CHECK(ks_two_sample(a, c).p_value > 1e-3);
}

TEST_CASE("cluster paths") {
  Rng rng(70);
  const ClusterPath path = sample_cluster_path(3.0, 0.5, 0.6, rng);
  CHECK(path.size_at(-0.1) == 0);
  CHECK(path.size_at(0.0) == 1);
  CHECK(path.size_at(3.0) == static_cast<std::int64_t>(path.jump_times.size()) + 1);
  CHECK(std::is_sorted(path.jump_times.begin(), path.jump_times.end()));
  CHECK(path.y == doctest::Approx(0.5 * (path.size_at(3.0) - 2 + path.half_edges) + path.size_at(3.0)));
  CHECK_THROWS_AS(path.size_at(3.5), UsageError);
  CHECK_THROWS_AS(sample_cluster_path(-1.0, 0.5, 0.6, rng), ParameterError);
}

TEST_CASE("f-paths") {
  Rng rng(80);
  const double b = 0.5, p = 0.4;
  std::vector<double> grid;
  for (double x = 1e-3; x < 2.0; x *= 1.1) grid.push_back(x);
  grid.push_back(1.0 - p);
  std::sort(grid.begin(), grid.end());
  for (int r = 0; r < 200; ++r) {
    const std::vector<double> f = sample_f_path(grid, b, p, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid[k] > 1.0 - p) CHECK(f[k] == 0.0);
      if (grid[k] == 1.0 - p) CHECK(f[k] == 1.0);
      if (k > 0) CHECK(f[k] <= f[k - 1]);
    }
  }
  // E f(x) grows like x^{-kappa} as x -> 0
  const double kappa = theory::kappa_strong(b, p);
  std::vector<double> xs = {1e-4, 1e-3, 1e-2};
  std::vector<double> sums(3, 0.0);
  for (int r = 0; r < 20000; ++r) {
    const std::vector<double> f = sample_f_path(xs, b, p, rng);
    for (int k = 0; k < 3; ++k) sums[k] += f[k];
  }
  const LoglogFit fit = loglog_slope(xs, sums);
  CHECK(-fit.slope == doctest::Approx(kappa).epsilon(0.05));
  CHECK_THROWS_AS(sample_f_path(std::vector<double>{}, b, p, rng), ParameterError);
  CHECK_THROWS_AS(sample_f_path(std::vector<double>{0.5, 0.2}, b, p, rng), ParameterError);
  CHECK_THROWS_AS(sample_f_path(std::vector<double>{0.0, 0.2}, b, p, rng), ParameterError);
}

TEST_CASE("window bounds bracket the cluster size") {
  Rng rng(90);
  for (int r = 0; r < 500; ++r) {
    const auto [lo, hi] = sample_Xbar_Xunder(3, 10000, 0.1, 1.0, 0.5, rng);
    CHECK(lo <= hi);
    CHECK(lo >= 1);
  }
  CHECK_THROWS_AS(sample_Xbar_Xunder(1, 100, 0.0, 1.0, 0.5, rng), ParameterError);
}

TEST_CASE("root cluster after percolation agrees between discrete and continuous builds") {
  Rng rng(100);
  const std::int64_t n = 500;
  std::vector<double> a(10000), c(10000);
  for (std::size_t r = 0; r < a.size(); ++r) {
    a[r] = static_cast<double>(percolate(grow_discrete(n, 1.0, rng), 0.5, rng).clusters[1].size);
    c[r] = static_cast<double>(percolate(grow_continuous(n, 1.0, rng), 0.5, rng).clusters[1].size);
  }
  CHECK(ks_two_sample(a, c).p_value > 1e-3);
}

TEST_CASE("half-edges track Y on the root cluster") {
  const double b = 1.0, p = 0.5;
  const std::int64_t n = 10000;
  const double scale = std::pow(static_cast<double>(n), theory::kappa_strong(b, p));
  Rng rng(101);
  std::vector<double> d(10000);
  for (double& v : d) {
    const RootCluster rc = sample_root_cluster(n, b, p, rng);
    v = (static_cast<double>(rc.half_edges) - (1.0 - p) / (b + p) * rc.y) / scale;
  }
  const Moments m = mc_moments(d);
  CHECK(std::abs(m.mean) < 4.0 * m.se_mean);
}
