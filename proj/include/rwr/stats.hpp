#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rwr/theory.hpp"

namespace rwr {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

inline constexpr int kBatches = 32;

/// Mean and unbiased variance with batch-means standard errors (32 batches;
/// plain i.i.d. errors below 64 samples).
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};
Moments mc_moments(std::span<const double> samples);

/// Standard error of the mean by batch means.
double batch_means_se(std::span<const double> samples);

/// Covariance of k coordinates from replicas stored row-major (replicas x k).
struct CovMatrix {
  std::size_t k = 0;
  std::vector<double> value;  // k*k
  std::vector<double> se;
  double at(std::size_t i, std::size_t j) const { return value[i * k + j]; }
  double se_at(std::size_t i, std::size_t j) const { return se[i * k + j]; }
};
CovMatrix mc_cov(std::span<const double> rows, std::size_t k);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov tail probability P(K > lambda).
double kolmogorov_q(double lambda);
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected);

struct LoglogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
};
LoglogFit loglog_slope(std::span<const double> x, std::span<const double> y);

double gamma_cdf(double x, double shape, double rate);

double median(std::vector<double> values);

enum class Rule {
  Sigma,     // |estimate - target| <= tol * se, se > 0
  PValue,    // estimate (a p-value) > tol
  Absolute,  // |estimate - target| <= tol
  Relative,  // |estimate - target| <= tol * |target|
  Exact,     // |estimate - target| <= tol (deterministic identity)
};

struct MCReport {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  Rule rule = Rule::Sigma;
  double tolerance = 4.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::int64_t replicas = 0;
  std::string note;
};

/// Pass flag as a function of estimate, se, target and rule. A sigma-band
/// check with zero standard error never passes.
bool evaluate_rule(Rule rule, double tolerance, double estimate, double se, double target);

MCReport make_report(std::string name, double estimate, double se, double target, Rule rule, double tolerance,
                     std::uint64_t seed, std::int64_t replicas, std::string note = {});

const char* to_string(Rule rule);

/// Fits Var = c n ln n + d n by weighted least squares; returns c with its SE.
Estimate fit_critical_slope(std::span<const double> n, std::span<const double> variance,
                            std::span<const double> variance_se);

/// Var(S_n) on n_grid for a critical model (b = 1/p - 2 for ERW1, 1 - 2p for
/// ERW2 and the alpha = 2 SRS), fitted against n ln n; target is the squared
/// critical prefactor, within 15% relative.
MCReport critical_variance_check(theory::Model model, double p, std::span<const std::int64_t> n_grid,
                                 std::int64_t replicas, std::uint64_t seed, unsigned threads = 1);

}  // namespace rwr
