#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>
#include <limits>

#include "rwr/error.hpp"
#include "rwr/patree.hpp"
#include "rwr/stats.hpp"
#include "rwr/theory.hpp"
#include "rwr/urn.hpp"

using namespace rwr;
using namespace rwr::theory;

TEST_CASE("regime thresholds") {
  CHECK(regime(Model::ERW1, 1.0, 0.3).regime == Regime::Sub);
  CHECK(regime(Model::ERW1, 1.0, 1.0 / 3.0).regime == Regime::Critical);
  CHECK(regime(Model::ERW1, 1.0, 0.34).regime == Regime::Super);
  CHECK(regime(Model::ERW1, 0.0, 0.5).regime == Regime::Critical);
  CHECK(regime(Model::ERW2, 0.5, 0.2).regime == Regime::Sub);
  CHECK(regime(Model::ERW2, 0.5, 0.25).regime == Regime::Critical);
  CHECK(regime(Model::ERW2, 1.0, 0.01).regime == Regime::Super);
  CHECK(regime(Model::ERW2, 0.0, 0.5).regime == Regime::Critical);
  CHECK(regime(Model::SRS, 1.0, 0.5, 2.0).regime == Regime::Super);
  CHECK(regime(Model::SRS, 0.5, 0.2, 1.0).regime == Regime::Sub);
  CHECK(regime(Model::SRS, 0.5, 0.25, 2.0).regime == Regime::Critical);
  CHECK(regime(Model::SRS, 1.0, 0.5, 4.0 / 3.0).regime == Regime::Critical);

  const RegimeReport r = regime(Model::ERW1, 2.0, 0.5);
  CHECK(r.threshold == doctest::Approx(0.25));
  CHECK(r.kappa == doctest::Approx(0.75));
  CHECK(r.constants.at("position_exponent") == doctest::Approx(0.75));
  CHECK(r.constants.at("lambda_ratio") == doctest::Approx(0.75));
  const RegimeReport s = regime(Model::SRS, 1.0, 0.5, 1.5);
  CHECK(s.threshold == doctest::Approx(4.0 / 3.0));
  CHECK(s.constants.at("alpha_kappa") == doctest::Approx(1.125));
  CHECK(regime(Model::SRS, 0.5, 0.2, 1.0).constants.at("position_exponent") == 1.0);

  CHECK_THROWS_AS(regime(Model::SRS, 0.5, 0.2), ParameterError);
  CHECK_THROWS_AS(regime(Model::SRS, 0.5, 0.2, 2.5), ParameterError);
  CHECK_THROWS_AS(regime(Model::ERW1, -0.5, 0.2), ParameterError);
  CHECK_THROWS_AS(regime(Model::ERW2, 0.5, 1.0), ParameterError);
}

TEST_CASE("exponents") {
  CHECK(kappa_erw1(0.0, 0.3) == doctest::Approx(0.3));
  CHECK(kappa_strong(0.0, 0.3) == doctest::Approx(0.3));
  CHECK(kappa_erw1(1.0, 0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(kappa_strong(1.0, 0.5) == doctest::Approx(0.75));
  // the ERW1 ratio of eigenvalues is its exponent
  for (double b : {0.0, 0.5, 3.0})
    for (double p : {0.1, 0.6}) {
      const EigenData e = eigen_data(UrnModel::ReinforcedERW, b, p);
      CHECK(e.eigenvalues[1] / e.eigenvalues[0] == doctest::Approx(kappa_erw1(b, p)));
      const EigenData f = eigen_data(UrnModel::StrongERW, b, p);
      CHECK(f.eigenvalues[1] / f.eigenvalues[0] == doctest::Approx(kappa_strong(b, p)));
    }
}

TEST_CASE("subcritical covariances against frozen spectral values") {
  struct Row {
    int model;
    double b, p, c11, c51, c32;
  };
  // computed independently from the urn's spectral decomposition
  const Row rows[] = {
      {1, 1.0, 0.2, 2.11111111111111, 1.25049634297671, 1.03026575932626},
      {1, 0.5, 0.1, 1.28707482993197, 0.692112521347099, 0.4732857620688},
      {1, 0.0, 0.3, 2.5, 1.53893051668114, 1.32505494037694},
      {2, 0.4, 0.2, 2.2, 1.34213013484265, 1.18700666707893},
      {2, 0.0, 0.3, 2.5, 1.53893051668114, 1.32505494037694},
      {2, 0.2, 0.1, 1.26666666666667, 0.683788564000725, 0.477097094062289},
  };
  for (const Row& r : rows) {
    auto cov = [&](double s, double t) { return r.model == 1 ? cov_erw1(s, t, r.b, r.p) : cov_erw2(s, t, r.b, r.p); };
    CHECK(cov(1.0, 1.0) == doctest::Approx(r.c11).epsilon(1e-12));
    CHECK(cov(0.5, 1.0) == doctest::Approx(r.c51).epsilon(1e-12));
    CHECK(cov(0.3, 2.0) == doctest::Approx(r.c32).epsilon(1e-12));
  }
}

TEST_CASE("b = 0 covariance is the classical elephant one") {
  for (double p : {0.05, 0.2, 0.45})
    for (auto [s, t] : {std::pair{1.0, 1.0}, {0.2, 0.9}, {1.5, 4.0}}) {
      const double classic = std::pow(s, 1.0 - p) * std::pow(t, p) / (1.0 - 2.0 * p);
      CHECK(cov_erw1(s, t, 0.0, p) == doctest::Approx(classic).epsilon(1e-12));
      CHECK(cov_erw2(s, t, 0.0, p) == doctest::Approx(classic).epsilon(1e-12));
    }
  CHECK(cov_erw2(1.0, 1.0, 0.0, 0.3) == doctest::Approx(2.5));
}

TEST_CASE("covariance argument checks") {
  CHECK_THROWS_AS(cov_erw1(2.0, 1.0, 0.0, 0.2), ParameterError);
  CHECK_THROWS_AS(cov_erw2(0.0, 1.0, 0.0, 0.2), ParameterError);
  CHECK_THROWS_AS(cov_erw1(1.0, 1.0, 1.0, 0.5), RegimeError);
  CHECK_THROWS_AS(cov_erw2(1.0, 1.0, 0.5, 0.25), RegimeError);
  CHECK_THROWS_AS(cov_erw2(1.0, 1.0, 2.0, 0.1), RegimeError);
}

TEST_CASE("critical prefactors") {
  const double p = 0.25;
  CHECK(critical_prefactor(Model::ERW1, p) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(critical_prefactor(Model::ERW2, p) == doctest::Approx(std::sqrt(1.0 / 6.0)));
  for (double q : {0.1, 0.3, 0.5})
    CHECK(critical_prefactor(Model::SRS, q) / critical_prefactor(Model::ERW2, q) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(critical_prefactor(Model::ERW1, 0.6), ParameterError);
  CHECK_THROWS_AS(critical_prefactor(Model::ERW2, 0.0), ParameterError);
  CHECK(regime(Model::ERW2, 0.5, 0.25).constants.at("critical_prefactor") == doctest::Approx(std::sqrt(1.0 / 6.0)));
}

TEST_CASE("strong critical prefactor from the exact urn recursion") {
  // Var(S_n) = c^2 n ln n + O(n), so doubling n isolates c^2
  for (double p : {0.25, 0.4}) {
    const ReplacementRule rule = replacement_rule(UrnModel::StrongERW, 1.0 - 2.0 * p, p);
    const std::int64_t n = 200000;
    const double v1 = exact_position_moments(rule, n, n).var_t / static_cast<double>(n);
    const double v2 = exact_position_moments(rule, 2 * n, 2 * n).var_t / static_cast<double>(2 * n);
    const double c = critical_prefactor(Model::ERW2, p);
    CAPTURE(p);
    CHECK((v2 - v1) / std::log(2.0) == doctest::Approx(c * c).epsilon(0.02));
  }
}

namespace {

// forward equations for (E Y, E Y^2) with jumps b + 1 (prob p) or b (prob 1 - p) at rate Y
std::pair<double, double> rk4_moments(double t, double b, double p) {
  const double m = b + p, j2 = p * (b + 1.0) * (b + 1.0) + (1.0 - p) * b * b;
  double y1 = 1.0, y2 = 1.0;
  const int steps = 20000;
  const double h = t / steps;
  auto f = [&](double a1, double a2) { return std::pair{m * a1, 2.0 * m * a2 + j2 * a1}; };
  for (int k = 0; k < steps; ++k) {
    auto [k1a, k1b] = f(y1, y2);
    auto [k2a, k2b] = f(y1 + h / 2 * k1a, y2 + h / 2 * k1b);
    auto [k3a, k3b] = f(y1 + h / 2 * k2a, y2 + h / 2 * k2b);
    auto [k4a, k4b] = f(y1 + h * k3a, y2 + h * k3b);
    y1 += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
    y2 += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
  }
  return {y1, y2};
}

}  // namespace

TEST_CASE("branching moments solve the forward equations") {
  for (double b : {0.0, 0.5, 2.0})
    for (double p : {0.2, 0.7})
      for (double t : {0.3, 1.0, 2.5}) {
        const auto [m1, m2] = branching_moments(t, b, p);
        const auto [r1, r2] = rk4_moments(t, b, p);
        CHECK(m1 == doctest::Approx(r1).epsilon(1e-10));
        CHECK(m2 == doctest::Approx(r2).epsilon(1e-10));
      }
  CHECK(branching_moments(0.0, 1.0, 0.5) == std::pair{1.0, 1.0});
  CHECK_THROWS_AS(branching_moments(-1.0, 1.0, 0.5), ParameterError);
}

TEST_CASE("simulated clusters reject C(e^{2mt} - e^{mt}) for the second moment") {
  const double b = 1.0, p = 0.5, t = 0.25;
  Rng rng(12);
  std::vector<double> y2(40000);
  for (double& v : y2) {
    const double y = sample_cluster_path(t, b, p, rng).y;
    v = y * y;
  }
  const Moments m = mc_moments(y2);
  const auto [m1, m2] = branching_moments(t, b, p);
  const double c = w_constants(b, p).second_wi, g = std::exp((b + p) * t);
  CHECK(std::abs(m.mean - m2) < 4.0 * m.se_mean);
  CHECK(std::abs(m.mean - c * (g * g - g)) > 10.0 * m.se_mean);
}

TEST_CASE("martingale limit constants") {
  const WConstants w = w_constants(1.0, 0.5);
  CHECK(w.gamma_shape == doctest::Approx(0.5));
  CHECK(w.gamma_rate == doctest::Approx(0.5));
  // Gamma(1/(b+1), 1/(b+1)) has mean 1 and variance b + 1
  for (double b : {0.0, 0.7, 3.0}) {
    const WConstants v = w_constants(b, 0.4);
    CHECK(v.gamma_shape / v.gamma_rate == doctest::Approx(1.0));
    CHECK(v.gamma_shape / (v.gamma_rate * v.gamma_rate) == doctest::Approx(b + 1.0));
    CHECK(v.mean_wi == 1.0);
    // second moment of the cluster martingale is the e^{2mt} coefficient
    const auto [m1, m2] = branching_moments(30.0, b, 0.4);
    CHECK(m2 / (m1 * m1) == doctest::Approx(v.second_wi).epsilon(1e-4));
  }
}

TEST_CASE("root cluster moments") {
  // b = 0: Mittag-Leffler moments k! / Gamma(1 + k p)
  for (double p : {0.2, 0.5, 0.8}) {
    const Z1Moments z = z1_moments(0.0, p);
    CHECK(z.z_mean == doctest::Approx(1.0 / std::tgamma(1.0 + p)));
    CHECK(z.z_second == doctest::Approx(2.0 / std::tgamma(1.0 + 2.0 * p)));
    CHECK(z.zhat_mean == doctest::Approx(z.z_mean));
  }
  for (double p : {0.1, 0.25, 0.45}) {
    const Z1Moments z = z1_moments(1.0 - 2.0 * p, p);
    CHECK(z.z_second == doctest::Approx(4.0 * p * p / (1.0 - p)));
    CHECK(z.z_second == doctest::Approx(std::pow(critical_prefactor(Model::SRS, p), 2)));
  }
  const Z1Moments z = z1_moments(1.0, 0.5);
  CHECK(z.z_mean == doctest::Approx(z.zhat_mean / 3.0));
  CHECK(z.z_second == doctest::Approx(z.zhat_second / 9.0));
}

TEST_CASE("birth time window") {
  const auto [lo, hi] = birth_time_bounds(1000, 5, 1.0, 0.5, 0.1);
  CHECK(lo == doctest::Approx((std::log(1000.0) + std::log(0.5) - std::log(6.0) - 0.1) / 2.0));
  CHECK(hi == doctest::Approx((std::log(1000.0) + std::log(0.5) - std::log(4.0) + 0.1) / 2.0));
  CHECK(lo < hi);
  CHECK(birth_time_bounds(10, 1, 0.0, 0.5).second == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(birth_time_bounds(10, 0, 0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(birth_time_bounds(10, 11, 0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(birth_time_bounds(10, 2, 0.0, 0.5, -1.0), ParameterError);
}

TEST_CASE("beta moments") {
  for (double b : {0.0, 1.0, 2.5})
    for (long long i : {2LL, 3LL, 10LL}) {
      const double r = 1.0 / (b + 1.0), s = static_cast<double>(i - 1);
      CHECK(beta_moment(i, b, 0.0) == doctest::Approx(1.0));
      CHECK(beta_moment(i, b, 1.0) == doctest::Approx(r / (r + s)));
      CHECK(beta_moment(i, b, 2.0) == doctest::Approx(r * (r + 1.0) / ((r + s) * (r + s + 1.0))));
    }
  CHECK(beta_moment(1, 3.0, 0.7) == 1.0);
  CHECK_THROWS_AS(beta_moment(0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(beta_moment(2, 0.0, -1.0), ParameterError);
}

TEST_CASE("summability of cluster moments") {
  CHECK(zi_alpha_moment_summable(2.0, 1.0, 0.5));
  CHECK_FALSE(zi_alpha_moment_summable(1.0, 1.0, 0.5));
  CHECK_FALSE(zi_alpha_moment_summable(2.0, 0.5, 0.25));
  CHECK(zi_alpha_moment_summable(1.5, 3.0, 0.75));
}

TEST_CASE("thresholds classify as critical across b") {
  for (double b : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(regime(Model::ERW1, b, 1.0 / (2.0 + b)).regime == Regime::Critical);
    if (b < 1.0) CHECK(regime(Model::ERW2, b, (1.0 - b) / 2.0).regime == Regime::Critical);
  }
}

TEST_CASE("covariance kernels are positive semidefinite") {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(7));
    std::vector<double> t(k);
    for (double& v : t) v = 0.01 + 3.0 * rng.uniform();
    std::sort(t.begin(), t.end());
    for (int model : {1, 2}) {
      const double b = model == 1 ? 1.0 : 0.4, p = 0.2;
      std::vector<double> m(k * k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double s = std::min(t[i], t[j]), u = std::max(t[i], t[j]);
          m[i * k + j] = model == 1 ? cov_erw1(s, u, b, p) : cov_erw2(s, u, b, p);
        }
      // Cholesky with a small relative jitter for coincident draws
      bool ok = true;
      for (int j = 0; j < k && ok; ++j) {
        double d = m[j * k + j];
        for (int l = 0; l < j; ++l) d -= m[j * k + l] * m[j * k + l];
        if (!(d > -1e-12 * m[j * k + j])) ok = false;
        d = std::sqrt(std::max(d, 1e-300));
        m[j * k + j] = d;
        for (int i = j + 1; i < k; ++i) {
          double v = m[i * k + j];
          for (int l = 0; l < j; ++l) v -= m[i * k + l] * m[j * k + l];
          m[i * k + j] = v / d;
        }
      }
      CHECK(ok);
    }
  }
}

TEST_CASE("moment inequalities") {
  for (double b : {0.0, 0.3, 1.0, 4.0})
    for (double p : {0.1, 0.5, 0.9}) {
      const Z1Moments z = z1_moments(b, p);
      CHECK(z.zhat_second >= z.zhat_mean * z.zhat_mean);
      CHECK(z.z_second >= z.z_mean * z.z_mean);
      for (double q : {0.5, 1.0, 3.0})
        for (long long i = 1; i < 20; ++i) CHECK(beta_moment(i + 1, b, q) < beta_moment(i, b, q));
    }
}
