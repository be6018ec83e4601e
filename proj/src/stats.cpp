#include "rwr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "rwr/error.hpp"
#include "rwr/parallel.hpp"
#include "rwr/srs.hpp"
#include "rwr/urn.hpp"

namespace rwr {

namespace {

// Means of kBatches contiguous blocks; the spread of the block means gives the SE.
double batch_se_of(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2 * kBatches) {
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  double means[kBatches];
  double grand = 0.0;
  for (int k = 0; k < kBatches; ++k) {
    const std::size_t lo = n * k / kBatches, hi = n * (k + 1) / kBatches;
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += values[i];
    means[k] = sum / static_cast<double>(hi - lo);
    grand += means[k];
  }
  grand /= kBatches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return std::sqrt(ss / (kBatches - 1) / kBatches);
}

}  // namespace

double batch_means_se(std::span<const double> samples) { return batch_se_of(samples); }

Moments mc_moments(std::span<const double> samples) {
  if (samples.size() < 2) throw UsageError("moments need at least two samples");
  Moments m;
  m.count = static_cast<std::int64_t>(samples.size());
  const double n = static_cast<double>(samples.size());
  for (double v : samples) m.mean += v;
  m.mean /= n;
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - m.mean) * (samples[i] - m.mean);
  double ss = 0.0;
  for (double v : sq) ss += v;
  m.variance = ss / (n - 1.0);
  m.se_mean = batch_se_of(samples);
  m.se_variance = batch_se_of(sq) * n / (n - 1.0);
  return m;
}

CovMatrix mc_cov(std::span<const double> rows, std::size_t k) {
  if (k == 0 || rows.size() % k != 0) throw UsageError("covariance rows do not match the coordinate count");
  const std::size_t count = rows.size() / k;
  if (count < 2) throw UsageError("covariance needs at least two replicas");
  const double n = static_cast<double>(count);
  std::vector<double> mean(k, 0.0);
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t i = 0; i < k; ++i) mean[i] += rows[r * k + i];
  for (double& m : mean) m /= n;
  CovMatrix c;
  c.k = k;
  c.value.assign(k * k, 0.0);
  c.se.assign(k * k, 0.0);
  std::vector<double> prod(count);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t r = 0; r < count; ++r) {
        prod[r] = (rows[r * k + i] - mean[i]) * (rows[r * k + j] - mean[j]);
        sum += prod[r];
      }
      const double v = sum / (n - 1.0);
      const double se = batch_se_of(prod) * n / (n - 1.0);
      c.value[i * k + j] = c.value[j * k + i] = v;
      c.se[i * k + j] = c.se[j * k + i] = se;
    }
  }
  return c;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series, fast for small lambda.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int k = 1; k <= 7; k += 2) sum += std::pow(y, k * k);
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw UsageError("KS test needs samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double rn = std::sqrt(n);
  return {d, kolmogorov_q((rn + 0.12 + 0.11 / rn) * d)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw UsageError("KS test needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double rn = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((rn + 0.12 + 0.11 / rn) * d)};
}

ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw UsageError("chi-square needs matching bins, at least two");
  ChiSquareResult r;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(expected[k] > 0.0)) throw UsageError("chi-square expected counts must be positive");
    r.statistic += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

LoglogFit loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw UsageError("log-log fit needs at least three paired points");
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw ParameterError("log-log fit needs positive values");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (sxx == 0.0) throw UsageError("log-log fit needs distinct x values");
  LoglogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double rss = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  f.slope_se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  return f;
}

double gamma_cdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw ParameterError("gamma parameters must be positive");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  return 0.5 * (upper + *std::max_element(values.begin(), values.begin() + mid));
}

bool evaluate_rule(Rule rule, double tolerance, double estimate, double se, double target) {
  if (!std::isfinite(estimate)) return false;
  const double d = std::abs(estimate - target);
  switch (rule) {
    case Rule::Sigma: return se > 0.0 && std::isfinite(se) && d <= tolerance * se;
    case Rule::PValue: return estimate > tolerance;
    case Rule::Absolute: return d <= tolerance;
    case Rule::Relative: return d <= tolerance * std::abs(target);
    case Rule::Exact: return d <= tolerance;
  }
  return false;
}

MCReport make_report(std::string name, double estimate, double se, double target, Rule rule, double tolerance,
                     std::uint64_t seed, std::int64_t replicas, std::string note) {
  MCReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.se = se;
  r.target = target;
  r.rule = rule;
  r.tolerance = tolerance;
  r.seed = seed;
  r.replicas = replicas;
  r.note = std::move(note);
  r.pass = evaluate_rule(rule, tolerance, estimate, se, target);
  return r;
}

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::Sigma: return "sigma";
    case Rule::PValue: return "p-value";
    case Rule::Absolute: return "absolute";
    case Rule::Relative: return "relative";
    case Rule::Exact: return "exact";
  }
  return "?";
}

Estimate fit_critical_slope(std::span<const double> n, std::span<const double> variance,
                            std::span<const double> variance_se) {
  if (n.size() != variance.size() || n.size() != variance_se.size() || n.size() < 2)
    throw UsageError("critical fit needs at least two grid points with errors");
  const bool weighted = std::all_of(variance_se.begin(), variance_se.end(), [](double s) { return s > 0.0; });
  double a11 = 0.0, a12 = 0.0, a22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (!(n[k] > 1.0)) throw ParameterError("critical fit needs n > 1");
    const double u = n[k] * std::log(n[k]);
    const double v = n[k];
    const double w = weighted ? 1.0 / (variance_se[k] * variance_se[k]) : 1.0;
    a11 += w * u * u;
    a12 += w * u * v;
    a22 += w * v * v;
    r1 += w * u * variance[k];
    r2 += w * v * variance[k];
  }
  const double det = a11 * a22 - a12 * a12;
  if (!(det > 0.0)) throw UsageError("critical fit is degenerate");
  const double c = (a22 * r1 - a12 * r2) / det;
  return {c, weighted ? std::sqrt(a22 / det) : 0.0};
}

MCReport critical_variance_check(theory::Model model, double p, std::span<const std::int64_t> n_grid,
                                 std::int64_t replicas, std::uint64_t seed, unsigned threads) {
  if (n_grid.size() < 2 || replicas < 2) throw UsageError("critical check needs a grid and replicas");
  const double b = model == theory::Model::ERW1 ? 1.0 / p - 2.0 : 1.0 - 2.0 * p;
  if (model == theory::Model::SRS) {
    if (theory::regime(model, b, p, 2.0).regime != theory::Regime::Critical)
      throw RegimeError("parameters are not critical");
  } else if (theory::regime(model, b, p).regime != theory::Regime::Critical) {
    throw RegimeError("parameters are not critical");
  }
  const double prefactor = theory::critical_prefactor(model, p);
  std::vector<double> ns, vars, ses;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::int64_t n = n_grid[g];
    std::vector<double> s(static_cast<std::size_t>(replicas));
    const std::uint64_t grid_seed = derive_seed(seed, g);
    if (model == theory::Model::SRS) {
      SRSConfig cfg;
      cfg.alpha = 2.0;
      cfg.b = b;
      cfg.p = p;
      cfg.n = n;
      for_each_replica(s.size(), threads, [&](std::size_t r) {
        Rng rng = Rng::for_replica(grid_seed, r);
        s[r] = simulate_srs(cfg, rng, SrsMethod::Clusters)[0];
      });
    } else {
      const ReplacementRule rule = replacement_rule(
          model == theory::Model::ERW1 ? UrnModel::ReinforcedERW : UrnModel::StrongERW, b, p);
      for_each_replica(s.size(), threads, [&](std::size_t r) {
        Rng rng = Rng::for_replica(grid_seed, r);
        s[r] = sample_urn_position(rule, n, rng);
      });
    }
    const Moments m = mc_moments(s);
    ns.push_back(static_cast<double>(n));
    vars.push_back(m.variance);
    ses.push_back(m.se_variance);
  }
  const Estimate c = fit_critical_slope(ns, vars, ses);
  const double target = prefactor * prefactor;
  std::ostringstream name;
  name << theory::to_string(model) << " Var(S_n)/(n ln n), b=" << b << ", p=" << p;
  return make_report(name.str(), c.value,
                     c.se, target, Rule::Relative, 0.15, seed, replicas);
}

}  // namespace rwr
