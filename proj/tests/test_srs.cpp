#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rwr/error.hpp"
#include "rwr/srs.hpp"
#include "rwr/stats.hpp"
#include "rwr/theory.hpp"

using namespace rwr;

namespace {

SRSConfig config(double alpha, int dim, double b, double p, std::int64_t n) {
  SRSConfig c;
  c.alpha = alpha;
  c.dim = dim;
  c.b = b;
  c.p = p;
  c.n = n;
  return c;
}

}  // namespace

TEST_CASE("a single step is one stable draw under both methods") {
  const SRSConfig c = config(1.3, 2, 0.5, 0.5, 1);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng a(seed), b(seed);
    CHECK(simulate_srs(c, a, SrsMethod::Direct) == simulate_srs(c, b, SrsMethod::Clusters));
  }
}

TEST_CASE("Gaussian steps give variance 2 sum |c|^2 given the forest") {
  Rng rng(4);
  const PATForest f = percolate(grow_discrete(200, 1.0, rng), 0.5, rng);
  double sq = 0.0;
  for (std::int64_t c = 1; c <= f.cluster_count(); ++c) sq += std::pow(static_cast<double>(f.clusters[c].size), 2);
  std::vector<double> s(40000);
  for (double& v : s) v = cluster_sum(f, StableParams{2.0, 1}, rng)[0];
  const Moments m = mc_moments(s);
  CHECK(std::abs(m.variance - 2.0 * sq) < 4.0 * m.se_variance);
  CHECK(std::abs(m.mean) < 4.0 * m.se_mean);
}

TEST_CASE("direct and cluster simulations agree in law") {
  for (double alpha : {1.0, 1.8})
    for (std::int64_t n : {200, 1000}) {
      const SRSConfig c = config(alpha, 1, 1.0, 0.5, n);
      Rng rng(5);
      std::vector<double> a(5000), b(5000);
      for (std::size_t r = 0; r < a.size(); ++r) {
        a[r] = simulate_srs(c, rng, SrsMethod::Direct)[0];
        b[r] = simulate_srs(c, rng, SrsMethod::Clusters)[0];
      }
      CAPTURE(alpha);
      CAPTURE(n);
      CHECK(ks_two_sample(a, b).p_value > 1e-3);
    }
}

TEST_CASE("limit evaluators refuse parameters outside their regime") {
  // b = 1, p = 0.5 has kappa = 3/4 and critical alpha 4/3
  const std::vector<std::vector<double>> th = {{0.5}};
  const double t1[] = {1.0};
  for (double alpha : {0.8, 1.2, 4.0 / 3.0, 1.5, 2.0}) {
    const double ak = alpha * 0.75;
    CAPTURE(alpha);
    if (ak < 1.0 - 1e-9) {
      CHECK_NOTHROW(subcritical_limit_cf(th, t1, alpha, 1.0, 0.5, {50, 1e-2, 1}));
      CHECK_THROWS_AS(critical_limit_cf(th, t1, alpha, 1.0, 0.5, 1.0), RegimeError);
    } else if (ak > 1.0 + 1e-9) {
      CHECK_THROWS_AS(subcritical_limit_cf(th, t1, alpha, 1.0, 0.5, {50, 1e-2, 1}), RegimeError);
      CHECK_THROWS_AS(critical_limit_cf(th, t1, alpha, 1.0, 0.5, 1.0), RegimeError);
    } else {
      CHECK_THROWS_AS(subcritical_limit_cf(th, t1, alpha, 1.0, 0.5, {50, 1e-2, 1}), RegimeError);
      CHECK_NOTHROW(critical_limit_cf(th, t1, alpha, 1.0, 0.5, 1.0));
    }
    Rng rng(1);
    SRSConfig c = config(alpha, 1, 1.0, 0.5, 100);
    if (ak > 1.0 + 1e-9) CHECK_NOTHROW(sample_supercritical_Z(c, 100, rng));
    else CHECK_THROWS_AS(sample_supercritical_Z(c, 100, rng), RegimeError);
  }
}

TEST_CASE("configuration checks") {
  Rng rng(1);
  CHECK_THROWS_AS(simulate_srs(config(0.0, 1, 0.0, 0.5, 10), rng, SrsMethod::Direct), ParameterError);
  CHECK_THROWS_AS(simulate_srs(config(2.0, 0, 0.0, 0.5, 10), rng, SrsMethod::Direct), ParameterError);
  CHECK_THROWS_AS(simulate_srs(config(2.0, 1, -1.0, 0.5, 10), rng, SrsMethod::Clusters), ParameterError);
  CHECK_THROWS_AS(simulate_srs(config(2.0, 1, 0.0, 0.5, 0), rng, SrsMethod::Clusters), ParameterError);
  CHECK(config(2.0, 1, 1.0, 0.5, 10).kappa() == doctest::Approx(0.75));
}

TEST_CASE("piecewise f-path integral on hand-built paths") {
  const double b = 0.5, p = 0.2, alpha = 1.0;
  const double q = 1.0 - p, ak = alpha * theory::kappa_strong(b, p);
  const double x_min = 1e-6;
  ClusterPath flat;
  flat.horizon = 50.0;
  const double theta[] = {1.5};
  const double t1[] = {2.0};
  CHECK(f_path_integral(flat, x_min, theta, t1, alpha, b, p) ==
        doctest::Approx(1.5 * ((2.0 * q - x_min) + x_min / (1.0 - ak))).epsilon(1e-12));
  ClusterPath jump = flat;
  jump.jump_times = {0.7};
  const double x1 = 2.0 * q * std::exp(-(b + 1.0) * 0.7);
  CHECK(f_path_integral(jump, x_min, theta, t1, alpha, b, p) ==
        doctest::Approx(1.5 * ((2.0 * q - x1) + 2.0 * (x1 - x_min) + 2.0 * x_min / (1.0 - ak))).epsilon(1e-12));
  // two times, opposite thetas: the first time's window cancels once both f are equal
  const double th2[] = {1.0, -1.0};
  const double t2[] = {1.0, 2.0};
  const double val = f_path_integral(flat, x_min, th2, t2, alpha, b, p);
  CHECK(val == doctest::Approx(2.0 * q - q).epsilon(1e-12));
}

TEST_CASE("subcritical evaluator") {
  const std::vector<std::vector<double>> zero = {{0.0}};
  const double t1[] = {1.0};
  const auto cf0 = subcritical_limit_cf(zero, t1, 1.0, 0.5, 0.2, {200, 1e-3, 1});
  CHECK(cf0[0].value.real() == 1.0);
  CHECK_THROWS_AS(subcritical_limit_cf(zero, t1, 2.0, 1.0, 0.5), RegimeError);
  CHECK_THROWS_AS(subcritical_limit_cf(zero, t1, 2.0, 0.5, 0.25), RegimeError);
  const double bad_times[] = {1.0, 0.5};
  const std::vector<std::vector<double>> two = {{1.0, 1.0}};
  CHECK_THROWS_AS(subcritical_limit_cf(two, bad_times, 1.0, 0.5, 0.2), ParameterError);
  const std::vector<std::vector<double>> odd = {{1.0, 1.0, 1.0}};
  const double t2[] = {0.5, 1.0};
  CHECK_THROWS_AS(subcritical_limit_cf(odd, t2, 1.0, 0.5, 0.2), ParameterError);
  CHECK_THROWS_AS(subcritical_limit_cf(zero, t1, 1.0, 0.5, 0.2, {1, 1e-3, 1}), ParameterError);
}

TEST_CASE("alpha = 2 evaluator reproduces the strong ERW covariance") {
  // N(0, 2) steps double the covariance and the Gaussian CF halves it again
  const double b = 0.2, p = 0.1;
  const double times[] = {0.5, 1.0};
  const std::vector<std::vector<double>> thetas = {{0.0, 0.7}, {0.6, -0.3}, {0.5, 0.5}};
  const auto cf = subcritical_limit_cf(thetas, times, 2.0, b, p, {8000, 1e-3, 3});
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    double q = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        q += thetas[k][i] * thetas[k][j] * theory::cov_erw2(std::min(times[i], times[j]), std::max(times[i], times[j]), b, p);
    CAPTURE(k);
    CHECK(std::abs(cf[k].value.real() - std::exp(-q)) < 4.0 * cf[k].se + 2e-3);
  }
}

TEST_CASE("critical limit CF") {
  // b = 1, p = 0.5: kappa = 3/4, critical at alpha = 4/3
  const double b = 1.0, p = 0.5, alpha = 4.0 / 3.0, z = 1.7;
  const double scale = (1.0 - p) / (b + 1.0) * z;
  const double t1[] = {2.0};
  const std::vector<std::vector<double>> one = {{0.8}, {0.0}, {-0.8}};
  const auto c1 = critical_limit_cf(one, t1, alpha, b, p, z);
  CHECK(c1[0].real() == doctest::Approx(std::exp(-scale * 2.0 * std::pow(0.8, alpha))));
  CHECK(c1[1].real() == 1.0);
  CHECK(c1[2].real() == doctest::Approx(c1[0].real()));
  // log CF is linear in t for a single time
  const double t2[] = {4.0};
  const auto c2 = critical_limit_cf(one, t2, alpha, b, p, z);
  CHECK(std::log(c2[0].real()) == doctest::Approx(2.0 * std::log(c1[0].real())));
  // independent increments: (theta, -theta) at (s, t) sees only S_t - S_s
  const double ts[] = {1.0, 3.0};
  const std::vector<std::vector<double>> inc = {{0.8, -0.8}, {0.0, 0.8}};
  const auto ci = critical_limit_cf(inc, ts, alpha, b, p, z);
  CHECK(ci[0].real() == doctest::Approx(std::exp(-scale * 2.0 * std::pow(0.8, alpha))));
  CHECK(ci[1].real() == doctest::Approx(std::exp(-scale * 3.0 * std::pow(0.8, alpha))));
  CHECK_THROWS_AS(critical_limit_cf(one, t1, 1.0, b, p, z), RegimeError);
}

TEST_CASE("root-cluster alpha moments") {
  const Estimate e0 = estimate_z1_alpha_moment(0.0, 1.0, 0.5, 100, 10, 1);
  CHECK(e0.value == 1.0);
  CHECK(e0.se == 0.0);
  const Estimate e1 = estimate_z1_alpha_moment(1.0, 1.0, 0.5, 10000, 10000, 2);
  CHECK(std::abs(e1.value - theory::z1_moments(1.0, 0.5).z_mean) < 4.0 * e1.se);
  CHECK_THROWS_AS(estimate_z1_alpha_moment(-1.0, 1.0, 0.5, 10, 10, 1), ParameterError);
}

TEST_CASE("supercritical weights") {
  Rng rng(8);
  const double b = 1.0, p = 0.5;
  const std::int64_t n = 5000;
  const double kappa = theory::kappa_strong(b, p);
  for (int r = 0; r < 20; ++r) {
    const std::vector<double> w = supercritical_weights(n, b, p, rng);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == doctest::Approx(std::pow(static_cast<double>(n), 1.0 - kappa)).epsilon(1e-12));
    CHECK(w[1] > 0.0);
  }
  SRSConfig c = config(2.0, 2, b, p, n);
  const SupercriticalSample s = sample_supercritical_Z(c, n, rng);
  CHECK(s.z.size() == 2);
  c.alpha = 1.0;
  CHECK_THROWS_AS(sample_supercritical_Z(c, n, rng), RegimeError);
}

TEST_CASE("supercritical growth exponent") {
  const SRSConfig c = config(2.0, 1, 1.0, 0.5, 1);
  const std::vector<std::int64_t> grid = {300, 1000, 3000, 10000};
  SRSConfig run = c;
  run.replicas = 2000;
  run.seed = 11;
  const ScalingResult r = scaling_exponent(run, grid, SrsMethod::Clusters, SizeStatistic::Mean);
  CHECK(r.fit.slope == doctest::Approx(0.75).epsilon(0.05));
  const std::vector<std::int64_t> short_grid = {100, 1000, 10000};
  CHECK_THROWS_AS(scaling_exponent(run, short_grid, SrsMethod::Clusters), UsageError);
  const std::vector<std::int64_t> flat = {100, 100, 1000, 10000};
  CHECK_THROWS_AS(scaling_exponent(run, flat, SrsMethod::Clusters), UsageError);
}
