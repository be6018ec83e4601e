#include "rwr/srs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rwr/error.hpp"
#include "rwr/parallel.hpp"
#include "rwr/walk.hpp"

namespace rwr {

namespace {

// Largest expected cluster size the evaluator is willing to simulate per path.
constexpr double kMaxPathSize = 1e6;

double norm_pow(std::span<const double> v, double alpha) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (alpha == 2.0) return sq;
  return std::pow(sq, 0.5 * alpha);
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw ParameterError("need at least one time");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] > 0.0)) throw ParameterError("times must be positive");
    if (j > 0 && !(times[j] > times[j - 1])) throw ParameterError("times must be strictly increasing");
  }
}

std::size_t theta_dim(std::span<const std::vector<double>> theta_sets, std::size_t m) {
  if (theta_sets.empty()) throw ParameterError("no theta values given");
  const std::size_t total = theta_sets.front().size();
  if (total == 0 || total % m != 0) throw ParameterError("theta length must be a multiple of the number of times");
  for (const auto& t : theta_sets)
    if (t.size() != total) throw ParameterError("theta sets differ in length");
  return total / m;
}

}  // namespace

void SRSConfig::validate() const {
  stable().validate();
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1), got " + std::to_string(p));
  if (!(b >= 0.0)) throw ParameterError("b must be nonnegative, got " + std::to_string(b));
  if (n < 1) throw ParameterError("horizon n must be >= 1");
  if (replicas < 1) throw ParameterError("replicas must be >= 1");
}

std::vector<double> cluster_sum(const PATForest& forest, const StableParams& stable, Rng& rng) {
  std::vector<double> s(static_cast<std::size_t>(stable.dim), 0.0), xi(s.size());
  for (std::int64_t c = 1; c <= forest.cluster_count(); ++c) {
    sample_isotropic_stable(stable, rng, xi);
    const double size = static_cast<double>(forest.clusters[c].size);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += size * xi[k];
  }
  return s;
}

std::vector<double> simulate_srs(const SRSConfig& config, Rng& rng, SrsMethod method) {
  config.validate();
  if (method == SrsMethod::Direct) {
    WalkConfig walk;
    walk.p = config.p;
    walk.b = config.b;
    walk.rule = UpdateRule::Always;
    walk.steps = StepKind::Stable;
    walk.stable = config.stable();
    const WalkState state = run(walk, config.n, rng);
    const auto s = state.position(config.n);
    return {s.begin(), s.end()};
  }
  const PATForest forest = percolate(grow_discrete(config.n, config.b, rng), config.p, rng);
  return cluster_sum(forest, config.stable(), rng);
}

double f_path_integral(const ClusterPath& path, double x_min, std::span<const double> theta,
                       std::span<const double> times, double alpha, double b, double p) {
  const std::size_t m = times.size();
  const std::size_t d = theta.size() / m;
  const double q = 1.0 - p;
  const double x_hi = times.back() * q;
  const double ak = alpha * theory::kappa_strong(b, p);
  std::vector<double> cuts = {x_min, x_hi};
  for (double t : times) {
    if (t * q > x_min && t * q < x_hi) cuts.push_back(t * q);
    for (double tau : path.jump_times) {
      const double x = t * q * std::exp(-(b + 1.0) * tau);
      if (x <= x_min) break;
      if (x < x_hi) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double lq = std::log(q);
  std::vector<double> v(d);
  auto integrand = [&](double x) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double f = static_cast<double>(path.size_at((lq - std::log(x / times[j])) / (b + 1.0)));
      for (std::size_t k = 0; k < d; ++k) v[k] += f * theta[j * d + k];
    }
    return norm_pow(v, alpha);
  };
  double total = 0.0;
  double first = -1.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const double g = integrand(std::sqrt(lo * hi));
    if (first < 0.0) first = g;
    total += g * (hi - lo);
  }
  // Below x_min every f(x / t_j) grows like x^{-kappa} along the path.
  if (first > 0.0) total += first * x_min / (1.0 - ak);
  return total;
}

std::vector<CfEstimate> subcritical_limit_cf(std::span<const std::vector<double>> theta_sets,
                                             std::span<const double> times, double alpha, double b, double p,
                                             const SubcriticalCfOptions& options) {
  const auto report = theory::regime(theory::Model::SRS, b, p, alpha);
  if (report.regime != theory::Regime::Sub)
    throw RegimeError("subcritical limit needs alpha * kappa < 1, got " + std::to_string(alpha * report.kappa));
  check_times(times);
  theta_dim(theta_sets, times.size());
  if (options.paths < 2) throw ParameterError("need at least two f-paths");
  if (!(options.tail_tol > 0.0 && options.tail_tol < 1.0)) throw ParameterError("tail_tol must lie in (0, 1)");

  const double ak = alpha * report.kappa;
  const double x_hi = times.back() * (1.0 - p);
  const double ratio = std::max(std::pow(options.tail_tol, 1.0 / (1.0 - ak)), std::pow(kMaxPathSize, -1.0 / report.kappa));
  const double x_min = x_hi * ratio;
  const double horizon = (std::log(1.0 - p) + std::log(times.back()) - std::log(x_min)) / (b + 1.0);

  const std::size_t sets = theta_sets.size();
  const auto paths = static_cast<std::size_t>(options.paths);
  std::vector<std::vector<double>> integrals(sets, std::vector<double>(paths));
  for (std::size_t r = 0; r < paths; ++r) {
    Rng rng = Rng::for_replica(options.seed, r);
    const ClusterPath path = sample_cluster_path(horizon, b, p, rng);
    for (std::size_t k = 0; k < sets; ++k)
      integrals[k][r] = f_path_integral(path, x_min, theta_sets[k], times, alpha, b, p);
  }
  std::vector<CfEstimate> out(sets);
  for (std::size_t k = 0; k < sets; ++k) {
    double mean = 0.0;
    for (double v : integrals[k]) mean += v;
    mean /= static_cast<double>(paths);
    const double cf = std::exp(-mean);
    out[k] = {{cf, 0.0}, cf * batch_means_se(integrals[k])};
  }
  return out;
}

std::vector<std::complex<double>> critical_limit_cf(std::span<const std::vector<double>> theta_sets,
                                                    std::span<const double> times, double alpha, double b, double p,
                                                    double z1_alpha_moment) {
  const double kappa = theory::kappa_strong(b, p);
  theory::regime(theory::Model::SRS, b, p, alpha);
  if (!(std::abs(alpha * kappa - 1.0) < 1e-9))
    throw RegimeError("critical limit needs alpha * kappa = 1, got " + std::to_string(alpha * kappa));
  check_times(times);
  const std::size_t m = times.size();
  const std::size_t d = theta_dim(theta_sets, m);
  const double scale = (1.0 - p) / (b + 1.0) * z1_alpha_moment;
  std::vector<std::complex<double>> out;
  out.reserve(theta_sets.size());
  std::vector<double> tail(d);
  for (const auto& theta : theta_sets) {
    double sum = 0.0;
    std::fill(tail.begin(), tail.end(), 0.0);
    for (std::size_t j = m; j-- > 0;) {
      for (std::size_t k = 0; k < d; ++k) tail[k] += theta[j * d + k];
      const double dt = times[j] - (j == 0 ? 0.0 : times[j - 1]);
      sum += dt * norm_pow(tail, alpha);
    }
    out.emplace_back(std::exp(-scale * sum), 0.0);
  }
  return out;
}

Estimate estimate_z1_alpha_moment(double alpha, double b, double p, std::int64_t n, std::int64_t replicas,
                                  std::uint64_t seed) {
  if (n < 1 || replicas < 1) throw ParameterError("n and replicas must be >= 1");
  if (!(alpha >= 0.0)) throw ParameterError("moment order must be nonnegative");
  if (alpha == 0.0) return {1.0, 0.0};
  std::vector<double> v(static_cast<std::size_t>(replicas));
  for (std::size_t r = 0; r < v.size(); ++r) {
    Rng rng = Rng::for_replica(seed, r);
    v[r] = std::pow(sample_root_cluster_scaled(n, b, p, rng), alpha);
  }
  if (v.size() < 2) return {v[0], 0.0};
  const Moments m = mc_moments(v);
  return {m.mean, m.se_mean};
}

std::vector<double> supercritical_weights(std::int64_t n, double b, double p, Rng& rng) {
  const PATForest forest = percolate(grow_discrete(n, b, rng), p, rng);
  const double scale = std::pow(static_cast<double>(n), -theory::kappa_strong(b, p));
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t c = 1; c <= forest.cluster_count(); ++c)
    w[forest.clusters[c].root] = static_cast<double>(forest.clusters[c].size) * scale;
  return w;
}

SupercriticalSample sample_supercritical_Z(const SRSConfig& config, std::int64_t n, Rng& rng) {
  config.validate();
  const auto report = config.regime();
  if (report.regime != theory::Regime::Super)
    throw RegimeError("Z exists only for alpha * kappa > 1, got " + std::to_string(config.alpha * report.kappa));
  SupercriticalSample s;
  s.weights = supercritical_weights(n, config.b, config.p, rng);
  s.z.assign(static_cast<std::size_t>(config.dim), 0.0);
  std::vector<double> xi(s.z.size());
  const StableParams stable = config.stable();
  for (double w : s.weights) {
    if (w == 0.0) continue;
    sample_isotropic_stable(stable, rng, xi);
    for (std::size_t k = 0; k < xi.size(); ++k) s.z[k] += w * xi[k];
  }
  return s;
}

ScalingResult scaling_exponent(const SRSConfig& config, std::span<const std::int64_t> n_grid, SrsMethod method,
                               SizeStatistic statistic, unsigned threads) {
  config.validate();
  if (n_grid.size() < 4) throw UsageError("scaling fit needs at least four horizons");
  for (std::size_t g = 1; g < n_grid.size(); ++g)
    if (n_grid[g] <= n_grid[g - 1]) throw UsageError("horizons must be strictly increasing");
  if (statistic == SizeStatistic::Auto) statistic = config.alpha <= 1.0 ? SizeStatistic::Median : SizeStatistic::Mean;
  ScalingResult out;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    SRSConfig cfg = config;
    cfg.n = n_grid[g];
    const std::uint64_t grid_seed = derive_seed(config.seed, g);
    std::vector<double> size(static_cast<std::size_t>(config.replicas));
    for_each_replica(size.size(), threads, [&](std::size_t r) {
      Rng rng = Rng::for_replica(grid_seed, r);
      const auto s = simulate_srs(cfg, rng, method);
      size[r] = std::sqrt(norm_pow(s, 2.0));
    });
    double value = 0.0;
    if (statistic == SizeStatistic::Median) {
      value = median(size);
    } else {
      for (double v : size) value += v;
      value /= static_cast<double>(size.size());
    }
    out.n.push_back(static_cast<double>(cfg.n));
    out.statistic.push_back(value);
  }
  out.fit = loglog_slope(out.n, out.statistic);
  return out;
}

}  // namespace rwr
