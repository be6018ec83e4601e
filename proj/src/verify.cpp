#include "rwr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rwr/error.hpp"
#include "rwr/parallel.hpp"
#include "rwr/patree.hpp"
#include "rwr/srs.hpp"
#include "rwr/theory.hpp"
#include "rwr/urn.hpp"
#include "rwr/walk.hpp"

namespace rwr::verify {

namespace {

using theory::Model;

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

template <class Fn>
std::vector<double> replicate(std::size_t count, std::uint64_t seed, unsigned threads, Fn&& fn) {
  std::vector<double> out(count);
  for_each_replica(count, threads, [&](std::size_t r) {
    Rng rng = Rng::for_replica(seed, r);
    out[r] = fn(rng);
  });
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

WalkConfig erw_config(Model model, double b, double p) {
  WalkConfig c;
  c.b = b;
  c.p = p;
  c.rule = model == Model::ERW1 ? UpdateRule::OnMemoryOnly : UpdateRule::Always;
  return c;
}

UrnModel urn_model(Model model) { return model == Model::ERW1 ? UrnModel::ReinforcedERW : UrnModel::StrongERW; }

std::vector<std::int64_t> log_grid(double lo_exp, double hi_exp, int points) {
  std::vector<std::int64_t> g;
  for (int k = 0; k < points; ++k) {
    const double e = lo_exp + (hi_exp - lo_exp) * k / (points - 1);
    g.push_back(static_cast<std::int64_t>(std::llround(std::pow(10.0, e))));
  }
  return g;
}

// ---- criterion 1

std::vector<MCReport> urn_walk_equivalence(const Options& o) {
  constexpr std::size_t kReplicas = 10000;
  const std::pair<double, double> params[] = {{1.0, 0.2}, {1.0, 0.5}, {0.0, 0.5}};
  std::vector<MCReport> out;
  std::uint64_t tag = 0;
  for (Model model : {Model::ERW1, Model::ERW2}) {
    for (auto [b, p] : params) {
      for (std::int64_t n : {500, 2000}) {
        const std::uint64_t seed = derive_seed(o.seed, 100 + tag++);
        const WalkConfig cfg = erw_config(model, b, p);
        const auto walk = replicate(kReplicas, derive_seed(seed, 0), o.threads, [&](Rng& rng) {
          return run(cfg, n, rng).position(n)[0];
        });
        const ReplacementRule rule = replacement_rule(urn_model(model), b, p);
        const auto urn = replicate(kReplicas, derive_seed(seed, 1), o.threads,
                                   [&](Rng& rng) { return sample_urn_position(rule, n, rng); });
        const KsResult ks = ks_two_sample(walk, urn);
        out.push_back(make_report(std::string(theory::to_string(model)) + " urn vs walk S_n, b=" + num(b) +
                                      ", p=" + num(p) + ", n=" + num(double(n)),
                                  ks.p_value, 0.0, 1e-3, Rule::PValue, 1e-3, seed, kReplicas,
                                  "two-sample KS statistic " + num(ks.statistic)));
      }
    }
  }
  return out;
}

// ---- criterion 2

std::vector<MCReport> subcritical_cov(Model model, double b, double p, const Options& o) {
  constexpr std::int64_t n = 10000;
  constexpr std::size_t kReplicas = 10000;
  const std::uint64_t seed = derive_seed(o.seed, model == Model::ERW1 ? 201 : 202);
  const WalkConfig cfg = erw_config(model, b, p);
  std::vector<double> rows(2 * kReplicas);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for_each_replica(kReplicas, o.threads, [&](std::size_t r) {
    Rng rng = Rng::for_replica(seed, r);
    const WalkState w = run(cfg, n, rng);
    rows[2 * r] = w.position(n / 2)[0] * scale;
    rows[2 * r + 1] = w.position(n)[0] * scale;
  });
  const CovMatrix c = mc_cov(rows, 2);
  const ReplacementRule rule = replacement_rule(UrnModel::StrongERW, b, p);
  const double times[2] = {0.5, 1.0};
  const std::int64_t steps[2] = {n / 2, n};
  std::vector<MCReport> out;
  const std::string tag = std::string(theory::to_string(model)) + " b=" + num(b) + ", p=" + num(p);
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      const double limit = model == Model::ERW1 ? theory::cov_erw1(times[i], times[j], b, p)
                                                : theory::cov_erw2(times[i], times[j], b, p);
      const std::string entry = "(" + num(times[i]) + "," + num(times[j]) + ")";
      if (model == Model::ERW1) {
        out.push_back(make_report(tag + " cov" + entry + " vs limit covariance", c.at(i, j), c.se_at(i, j), limit,
                                  Rule::Sigma, 4.0, seed, kReplicas));
        continue;
      }
      const ExactPositionMoments exact = exact_position_moments(rule, steps[i], steps[j]);
      const double finite = (i == j ? exact.var_t : exact.cov) / static_cast<double>(n);
      out.push_back(make_report(tag + " cov" + entry + " vs limit covariance", c.at(i, j), c.se_at(i, j), limit,
                                Rule::Sigma, 4.0, seed, kReplicas,
                                "exact value at n=" + num(double(n)) + " is " + num(finite)));
      out.push_back(make_report(tag + " cov" + entry + " vs exact finite-n moment recursion", c.at(i, j),
                                c.se_at(i, j), finite, Rule::Sigma, 4.0, seed, kReplicas));
    }
  }
  return out;
}

std::vector<MCReport> erw1_subcritical_cov(const Options& o) { return subcritical_cov(Model::ERW1, 1.0, 0.2, o); }
std::vector<MCReport> erw2_subcritical_cov(const Options& o) { return subcritical_cov(Model::ERW2, 0.4, 0.2, o); }

std::vector<MCReport> b0_identity(const Options& o) {
  double worst = 0.0;
  int cases = 0;
  for (double p : {0.05, 0.1, 0.2, 0.3, 0.45})
    for (double s : {0.1, 0.5, 1.0})
      for (double t : {1.0, 2.0, 7.5}) {
        worst = std::max(worst, std::abs(theory::cov_erw1(s, t, 0.0, p) - theory::cov_erw2(s, t, 0.0, p)));
        ++cases;
      }
  return {make_report("b=0 ERW1/ERW2 covariance identity, max abs difference", worst, 0.0, 0.0, Rule::Exact, 1e-12,
                      o.seed, cases)};
}

// ---- criterion 3

std::vector<MCReport> erw_critical(const Options& o) {
  const auto grid = log_grid(3.0, 5.0, 5);
  constexpr std::int64_t kReplicas = 4000;
  return {critical_variance_check(Model::ERW1, 0.25, grid, kReplicas, derive_seed(o.seed, 301), o.threads),
          critical_variance_check(Model::ERW2, 0.25, grid, kReplicas, derive_seed(o.seed, 302), o.threads)};
}

// ---- criterion 4

std::vector<MCReport> erw_supercritical(const Options& o) {
  const auto grid = log_grid(2.5, 4.0, 4);
  constexpr std::size_t kReplicas = 10000;
  std::vector<MCReport> out;
  const std::tuple<Model, double, double> cases[] = {{Model::ERW2, 1.0, 0.5}, {Model::ERW1, 0.0, 0.75}};
  std::uint64_t tag = 400;
  for (auto [model, b, p] : cases) {
    const std::uint64_t seed = derive_seed(o.seed, ++tag);
    const ReplacementRule rule = replacement_rule(urn_model(model), b, p);
    std::vector<double> ns, means;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto s = replicate(kReplicas, derive_seed(seed, g), o.threads,
                               [&](Rng& rng) { return std::abs(sample_urn_position(rule, grid[g], rng)); });
      ns.push_back(static_cast<double>(grid[g]));
      means.push_back(mean_of(s));
    }
    const LoglogFit fit = loglog_slope(ns, means);
    const double kappa = model == Model::ERW1 ? theory::kappa_erw1(b, p) : theory::kappa_strong(b, p);
    out.push_back(make_report(std::string(theory::to_string(model)) + " slope of log E|S_n|, b=" + num(b) +
                                  ", p=" + num(p),
                              fit.slope, fit.slope_se, kappa, Rule::Absolute, 0.05, seed, kReplicas));
  }
  return out;
}

// ---- criterion 5

std::vector<MCReport> branching_martingale(const Options& o) {
  constexpr std::size_t kReplicas = 10000;
  constexpr double p = 0.5;
  std::vector<MCReport> out;
  std::uint64_t tag = 500;
  for (double b : {0.0, 1.0}) {
    for (double t : {1.0, 2.0, 4.0}) {
      const std::uint64_t seed = derive_seed(o.seed, ++tag);
      const double m = b + p;
      const auto y = replicate(kReplicas, seed, o.threads,
                               [&](Rng& rng) { return sample_cluster_path(t, b, p, rng).y; });
      std::vector<double> first(y.size()), second(y.size());
      for (std::size_t r = 0; r < y.size(); ++r) {
        first[r] = std::exp(-m * t) * y[r];
        second[r] = first[r] * first[r];
      }
      const auto [ey, ey2] = theory::branching_moments(t, b, p);
      const std::string tagname = "b=" + num(b) + ", p=" + num(p) + ", t=" + num(t);
      const Moments m1 = mc_moments(first);
      out.push_back(make_report("E[exp(-(b+p)t) Y_1(t)], " + tagname, m1.mean, m1.se_mean, 1.0, Rule::Sigma, 3.0,
                                seed, kReplicas));
      const Moments m2 = mc_moments(second);
      out.push_back(make_report("E[exp(-2(b+p)t) Y_1(t)^2], " + tagname, m2.mean, m2.se_mean,
                                ey2 * std::exp(-2.0 * m * t), Rule::Sigma, 4.0, seed, kReplicas,
                                "target from the forward equation, C e^{2mt} - (C-1) e^{mt}"));
      (void)ey;
    }
  }
  return out;
}

std::vector<MCReport> gamma_w(const Options& o) {
  constexpr std::size_t kReplicas = 10000;
  std::vector<MCReport> out;
  std::uint64_t tag = 510;
  for (double b : {0.0, 1.0}) {
    const std::uint64_t seed = derive_seed(o.seed, ++tag);
    const double t_max = std::log(1e4) / (b + 1.0);
    const auto w = replicate(kReplicas, seed, o.threads, [&](Rng& rng) { return sample_W(t_max, b, rng); });
    const double shape = 1.0 / (b + 1.0);
    const KsResult ks = ks_test(w, [&](double x) { return gamma_cdf(x, shape, shape); });
    out.push_back(make_report("KS of W vs Gamma(1/(b+1), 1/(b+1)), b=" + num(b), ks.p_value, 0.0, 1e-3, Rule::PValue,
                              1e-3, seed, kReplicas, "KS statistic " + num(ks.statistic)));
  }
  return out;
}

// ---- criterion 6

std::vector<MCReport> root_cluster(const Options& o) {
  constexpr std::int64_t n = 10000;
  constexpr std::size_t kReplicas = 10000;
  std::vector<MCReport> out;
  std::uint64_t tag = 600;
  for (auto [b, p] : {std::pair{0.0, 0.5}, std::pair{1.0, 0.5}}) {
    const std::uint64_t seed = derive_seed(o.seed, ++tag);
    const auto z = replicate(kReplicas, seed, o.threads,
                             [&](Rng& rng) { return sample_root_cluster_scaled(n, b, p, rng); });
    std::vector<double> z2(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) z2[r] = z[r] * z[r];
    const theory::Z1Moments target = theory::z1_moments(b, p);
    const std::string tagname = "b=" + num(b) + ", p=" + num(p) + ", n=" + num(double(n));
    const Moments m1 = mc_moments(z), m2 = mc_moments(z2);
    out.push_back(make_report("E[|c_1,n|/n^kappa], " + tagname, m1.mean, m1.se_mean, target.z_mean, Rule::Sigma, 4.0,
                              seed, kReplicas));
    out.push_back(make_report("E[(|c_1,n|/n^kappa)^2], " + tagname, m2.mean, m2.se_mean, target.z_second, Rule::Sigma,
                              4.0, seed, kReplicas));
  }
  return out;
}

// ---- criterion 7

std::vector<MCReport> eta_beta(const Options& o) {
  constexpr std::int64_t n = 10000;
  constexpr std::size_t kReplicas = 10000;
  std::vector<MCReport> out;
  std::uint64_t tag = 700;
  for (double b : {0.0, 1.0}) {
    for (std::int64_t i : {2, 5}) {
      const std::uint64_t seed = derive_seed(o.seed, ++tag);
      const auto x = replicate(kReplicas, seed, o.threads, [&](Rng& rng) {
        return static_cast<double>(sample_eta(n, i, b, rng)) / static_cast<double>(n);
      });
      std::vector<double> x2(x.size());
      for (std::size_t r = 0; r < x.size(); ++r) x2[r] = x[r] * x[r];
      const std::string tagname = "b=" + num(b) + ", i=" + num(double(i)) + ", n=" + num(double(n));
      const Moments m1 = mc_moments(x), m2 = mc_moments(x2);
      out.push_back(make_report("E[eta/n] vs Beta mean, " + tagname, m1.mean, m1.se_mean, theory::beta_moment(i, b, 1.0),
                                Rule::Sigma, 4.0, seed, kReplicas));
      out.push_back(make_report("E[(eta/n)^2] vs Beta second moment, " + tagname, m2.mean, m2.se_mean,
                                theory::beta_moment(i, b, 2.0), Rule::Sigma, 4.0, seed, kReplicas));
    }
  }
  return out;
}

// ---- criterion 8

std::vector<MCReport> moment_bound(const Options& o) {
  constexpr std::size_t kReplicas = 10000;
  constexpr std::int64_t i = 2;
  const auto ratios = log_grid(2.0, 4.0, 5);
  std::vector<MCReport> out;
  std::uint64_t tag = 800;
  for (auto [b, p] : {std::pair{1.0, 0.5}, std::pair{0.0, 0.5}}) {
    const std::uint64_t seed = derive_seed(o.seed, ++tag);
    std::vector<double> xs, moments;
    for (std::size_t g = 0; g < ratios.size(); ++g) {
      const std::int64_t n = ratios[g] * i;
      const auto x4 = replicate(kReplicas, derive_seed(seed, g), o.threads, [&](Rng& rng) {
        const double x = static_cast<double>(sample_Xbar_Xunder(i, n, 0.0, b, p, rng).second);
        return x * x * x * x;
      });
      xs.push_back(static_cast<double>(n) / static_cast<double>(i));
      moments.push_back(mean_of(x4));
    }
    const LoglogFit fit = loglog_slope(xs, moments);
    out.push_back(make_report("slope of log E[Xbar_i(n)^4] vs log(n/i), b=" + num(b) + ", p=" + num(p), fit.slope,
                              fit.slope_se, 4.0 * theory::kappa_strong(b, p), Rule::Absolute, 0.1, seed, kReplicas));
  }
  return out;
}

// ---- criterion 9

std::vector<MCReport> srs_subcritical(const Options& o) {
  constexpr std::size_t kReplicas = 10000;
  SRSConfig cfg;
  cfg.alpha = 1.0;
  cfg.b = 0.5;
  cfg.p = 0.2;
  cfg.n = 10000;
  const std::uint64_t seed = derive_seed(o.seed, 901);
  const double scale = std::pow(static_cast<double>(cfg.n), -1.0 / cfg.alpha);
  const auto s = replicate(kReplicas, seed, o.threads,
                           [&](Rng& rng) { return simulate_srs(cfg, rng, SrsMethod::Direct)[0] * scale; });

  const std::vector<double> thetas = {0.25, 0.5, 1.0, 1.5, 2.0};
  std::vector<std::vector<double>> sets;
  for (double th : thetas) sets.push_back({th});
  SubcriticalCfOptions eval;
  eval.seed = derive_seed(o.seed, 902);
  const double times[] = {1.0};
  const auto limit = subcritical_limit_cf(sets, times, cfg.alpha, cfg.b, cfg.p, eval);

  std::vector<MCReport> out;
  std::vector<double> neg_log(thetas.size()), neg_log_se(thetas.size());
  std::vector<double> c(s.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    for (std::size_t r = 0; r < s.size(); ++r) c[r] = std::cos(thetas[k] * s[r]);
    const Moments m = mc_moments(c);
    const double se = std::hypot(m.se_mean, limit[k].se);
    neg_log[k] = -std::log(m.mean);
    neg_log_se[k] = m.se_mean / m.mean;
    out.push_back(make_report("Re CF of S_n/n^(1/alpha) vs f-integral limit, theta=" + num(thetas[k]), m.mean, se,
                              limit[k].value.real(), Rule::Sigma, 4.0, seed, kReplicas,
                              "limit evaluator SE " + num(limit[k].se) + " from " + num(double(eval.paths)) + " paths"));
  }
  // -log CF(2 theta) against 2^alpha (-log CF(theta)) on the simulated S_n
  for (auto [lo, hi] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {2, 4}}) {
    const double factor = std::pow(thetas[hi] / thetas[lo], cfg.alpha);
    out.push_back(make_report("alpha-homogeneity of -log CF, theta " + num(thetas[lo]) + " -> " + num(thetas[hi]),
                              neg_log[hi], std::hypot(neg_log_se[hi], factor * neg_log_se[lo]), factor * neg_log[lo],
                              Rule::Sigma, 4.0, seed, kReplicas));
  }
  // the evaluator itself at two times in the plane
  {
    const double times2[] = {0.5, 1.0};
    const std::vector<std::vector<double>> pair = {{0.3, -0.2, 0.4, 0.1}, {0.6, -0.4, 0.8, 0.2}};
    SubcriticalCfOptions small = eval;
    small.paths = 500;
    const auto v = subcritical_limit_cf(pair, times2, 1.3, 0.5, 0.2, small);
    const double lhs = -std::log(v[1].value.real());
    const double rhs = std::pow(2.0, 1.3) * -std::log(v[0].value.real());
    out.push_back(make_report("alpha-homogeneity of the limit evaluator (alpha=1.3, d=2, two times)", lhs, 0.0, rhs,
                              Rule::Exact, 1e-9 * std::abs(rhs), eval.seed, small.paths));
  }
  return out;
}

// ---- criterion 10

std::vector<MCReport> srs_critical(const Options& o) {
  const auto grid = log_grid(3.0, 5.0, 5);
  return {critical_variance_check(Model::SRS, 0.25, grid, 6000, derive_seed(o.seed, 1001), o.threads)};
}

// ---- criterion 11

std::vector<MCReport> srs_supercritical(const Options& o) {
  const auto grid = log_grid(2.5, 4.0, 4);
  std::vector<MCReport> out;
  {
    SRSConfig cfg;
    cfg.alpha = 2.0;
    cfg.b = 1.0;
    cfg.p = 0.5;
    cfg.replicas = 4000;
    cfg.seed = derive_seed(o.seed, 1101);
    const ScalingResult r = scaling_exponent(cfg, grid, SrsMethod::Clusters, SizeStatistic::Mean, o.threads);
    out.push_back(make_report("SRS alpha=2 slope of log E|S_n|, b=1, p=0.5", r.fit.slope, r.fit.slope_se, cfg.kappa(),
                              Rule::Absolute, 0.05, cfg.seed, cfg.replicas));
  }
  {
    SRSConfig cfg;
    cfg.alpha = 1.5;
    cfg.b = 3.0;
    cfg.p = 0.75;
    cfg.replicas = 4000;
    cfg.seed = derive_seed(o.seed, 1102);
    const ScalingResult r = scaling_exponent(cfg, grid, SrsMethod::Clusters, SizeStatistic::Median, o.threads);
    out.push_back(make_report("SRS alpha=1.5 slope of log median|S_n|, b=3, p=0.75", r.fit.slope, r.fit.slope_se,
                              cfg.kappa(), Rule::Absolute, 0.05, cfg.seed, cfg.replicas,
                              "alpha=1 admits no supercritical (b, p) since kappa < 1"));
  }
  {
    constexpr std::int64_t n = 10000;
    constexpr std::size_t kReplicas = 10000;
    const double b = 1.0, p = 0.5;
    const std::uint64_t seed = derive_seed(o.seed, 1103);
    const auto w2 = replicate(kReplicas, seed, o.threads, [&](Rng& rng) { return supercritical_weights(n, b, p, rng)[2]; });
    const double kappa = theory::kappa_strong(b, p);
    const double target = (1.0 - p) * theory::beta_moment(2, b, kappa) * theory::z1_moments(b, p).z_mean;
    const Moments m = mc_moments(w2);
    out.push_back(make_report("mean of |C_2,n|/n^kappa vs (1-p) E[beta_2^kappa] E[Z_1], b=1, p=0.5", m.mean, m.se_mean,
                              target, Rule::Sigma, 4.0, seed, kReplicas));
  }
  return out;
}

// ---- criterion 12

std::vector<MCReport> structural(const Options& o) {
  std::vector<MCReport> out;
  const std::uint64_t seed = derive_seed(o.seed, 1201);
  auto count_failures = [&](std::size_t replicas, std::uint64_t s, auto&& body) {
    const auto bad = replicate(replicas, s, o.threads, [&](Rng& rng) {
      try {
        return body(rng) ? 0.0 : 1.0;
      } catch (const std::logic_error&) {
        return 1.0;
      }
    });
    double total = 0.0;
    for (double v : bad) total += v;
    return total;
  };
  constexpr std::size_t kTrees = 300;
  std::uint64_t tag = 0;
  for (double b : {0.0, 0.5, 2.0}) {
    for (double p : {0.2, 0.7}) {
      const double bad = count_failures(kTrees, derive_seed(seed, ++tag), [&](Rng& rng) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(3000));
        PATForest f1 = percolate(grow_discrete(n, b, rng), p, rng);
        check_forest(f1);
        PATForest f2 = percolate(grow_continuous(n, b, rng), p, rng);
        check_forest(f2);
        for (const PATForest* f : {&f1, &f2}) {
          double weights = 0.0;
          for (std::int64_t i = 1; i <= n; ++i) {
            if (f->tree.weight(i) != b * static_cast<double>(f->tree.degree[i] - 1) + 1.0) return false;
            weights += f->tree.weight(i);
          }
          if (std::abs(weights - (b * static_cast<double>(n - 1) + static_cast<double>(n))) > 1e-9 * weights)
            return false;
        }
        return true;
      });
      out.push_back(make_report("tree/forest invariant violations (weight-degree, sizes, cuts, sum Y), b=" + num(b) +
                                    ", p=" + num(p),
                                bad, 0.0, 0.0, Rule::Exact, 0.0, seed, kTrees));
    }
  }
  for (double b : {0.0, 0.4, 2.5}) {
    const ReplacementRule rule = replacement_rule(UrnModel::StrongERW, b, 0.3);
    const double bad = count_failures(200, derive_seed(seed, 50 + ++tag), [&](Rng& rng) {
      UrnState st = initial_urn(rng);
      for (int k = 0; k < 2000; ++k) {
        draw_and_replace(rule, st, rng);
        if (std::abs(st.total() - (1.0 + static_cast<double>(st.draws) * (b + 1.0))) > 1e-9 * st.total()) return false;
      }
      return true;
    });
    out.push_back(make_report("strong urn mass != 1 + k(b+1), b=" + num(b), bad, 0.0, 0.0, Rule::Exact, 0.0, seed, 200));
  }
  {
    const double bad = count_failures(200, derive_seed(seed, 99), [&](Rng& rng) {
      const std::uint64_t s = rng.engine()();
      for (StepKind kind : {StepKind::Rademacher, StepKind::Stable}) {
        WalkConfig a;
        a.b = 0.0;
        a.p = 0.6;
        a.steps = kind;
        a.stable = {1.5, 2};
        WalkConfig c = a;
        c.rule = UpdateRule::Always;
        Rng r1(s), r2(s);
        const WalkState w1 = run(a, 1500, r1), w2 = run(c, 1500, r2);
        for (std::int64_t k = 0; k <= 1500; ++k) {
          const auto x = w1.position(k), y = w2.position(k);
          if (!std::equal(x.begin(), x.end(), y.begin())) return false;
        }
      }
      return true;
    });
    out.push_back(make_report("b=0 update rules differ bitwise", bad, 0.0, 0.0, Rule::Exact, 0.0, seed, 200));
  }
  return out;
}

// ---- criterion 13

std::vector<MCReport> stable_sampler(const Options& o) {
  constexpr std::size_t kSamples = 100000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(kSamples));
  std::vector<MCReport> out;
  std::uint64_t tag = 1300;
  for (double alpha : {0.8, 1.0, 1.5, 2.0}) {
    const std::uint64_t seed = derive_seed(o.seed, ++tag);
    const StableParams params{alpha, 1};
    const auto x = replicate(kSamples, seed, o.threads, [&](Rng& rng) {
      double v;
      sample_isotropic_stable(params, rng, std::span<double>(&v, 1));
      return v;
    });
    for (double theta : {0.3, 0.7, 1.0, 1.5, 2.5}) {
      const double th[] = {theta};
      const CfEstimate cf = empirical_cf(x, th);
      const double target = std::exp(-std::pow(theta, alpha));
      out.push_back(make_report("stable alpha=" + num(alpha) + " |empirical CF - exp(-|theta|^alpha)|, theta=" +
                                    num(theta),
                                std::abs(cf.value - std::complex<double>(target, 0.0)), cf.se, 0.0, Rule::Absolute, tol,
                                seed, kSamples));
    }
    if (alpha == 1.0) {
      std::vector<double> sorted = x;
      std::sort(sorted.begin(), sorted.end());
      const double density = 1.0 / (2.0 * std::numbers::pi);  // Cauchy density at +-1
      const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(kSamples)) / density;
      const double q1 = sorted[kSamples / 4], q3 = sorted[3 * kSamples / 4];
      out.push_back(make_report("Cauchy lower quartile", q1, se, -1.0, Rule::Sigma, 4.0, seed, kSamples));
      out.push_back(make_report("Cauchy upper quartile", q3, se, 1.0, Rule::Sigma, 4.0, seed, kSamples));
    }
  }
  return out;
}

struct Entry {
  CheckInfo info;
  std::function<std::vector<MCReport>(const Options&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"urn-walk-equivalence", 1, "two-sample KS of urn-derived vs direct-walk S_n, both ERW models"},
       urn_walk_equivalence},
      {{"erw1-subcritical-cov", 2, "ERW1 (b=1, p=0.2) covariance on {0.5,1}^2 at n=1e4"}, erw1_subcritical_cov},
      {{"erw2-subcritical-cov", 2, "ERW2 (b=0.4, p=0.2) covariance on {0.5,1}^2 at n=1e4"}, erw2_subcritical_cov},
      {{"erw-b0-cov-identity", 2, "ERW1 and ERW2 limit covariances agree at b=0"}, b0_identity},
      {{"erw-critical-scaling", 3, "critical Var(S_n)/(n ln n) for ERW1 (b=2) and ERW2 (b=0.5), p=0.25"}, erw_critical},
      {{"erw-supercritical-exponent", 4, "log-log slope of E|S_n| for supercritical ERW1 and ERW2"}, erw_supercritical},
      {{"branching-martingale", 5, "first and second moments of Y_1(t), t in {1,2,4}"}, branching_martingale},
      {{"gamma-W", 5, "KS of the whole-tree martingale limit W vs its Gamma law"}, gamma_w},
      {{"root-cluster-moments", 6, "moments of |c_1,n|/n^kappa at n=1e4"}, root_cluster},
      {{"eta-beta-limit", 7, "moments of eta(n,i)/n vs Beta(1/(b+1), i-1)"}, eta_beta},
      {{"moment-bound-slope", 8, "slope of log E[Xbar_i(n)^4] in log(n/i)"}, moment_bound},
      {{"srs-subcritical-cf", 9, "SRS alpha=1 empirical CF vs the f-integral limit"}, srs_subcritical},
      {{"srs-critical-scaling", 10, "SRS alpha=2, b=1-2p, p=0.25 Var(S_n)/(n ln n)"}, srs_critical},
      {{"srs-supercritical", 11, "SRS supercritical scaling exponents and the Z_2 marginal mean"}, srs_supercritical},
      {{"structural-invariants", 12, "exact tree, cluster, urn and rule-equivalence identities"}, structural},
      {{"stable-sampler", 13, "isotropic stable CF and Cauchy quartiles"}, stable_sampler},
  };
  return entries;
}

}  // namespace

const std::vector<CheckInfo>& checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

bool has_check(const std::string& name) {
  return std::any_of(registry().begin(), registry().end(), [&](const Entry& e) { return e.info.name == name; });
}

std::vector<MCReport> run_check(const std::string& name, const Options& options) {
  for (const auto& e : registry())
    if (e.info.name == name) return e.run(options);
  throw UsageError("unknown check '" + name + "'");
}

bool all_pass(const std::vector<MCReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const MCReport& r) { return r.pass; });
}

}  // namespace rwr::verify
