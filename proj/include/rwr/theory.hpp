#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace rwr::theory {

enum class Model {
  ERW1,  // reinforced ERW: weights grow on memory times only
  ERW2,  // strongly reinforced ERW
  SRS,   // strongly reinforced Shark Random Swim
};

enum class Regime { Sub, Critical, Super };

const char* to_string(Model m);
const char* to_string(Regime r);

struct RegimeReport {
  Model model;
  Regime regime;
  double threshold;  // p_* (ERW1), p_** (ERW2) or the critical alpha 1/kappa (SRS)
  double kappa;
  std::map<std::string, double> constants;
};

/// Scaling exponent kappa of each model.
double kappa_erw1(double b, double p);
double kappa_strong(double b, double p);

/// Regime classification; `alpha` is required for SRS and ignored otherwise.
RegimeReport regime(Model model, double b, double p, std::optional<double> alpha = std::nullopt);

/// Subcritical Gaussian limit covariances E[W_s W_t], 0 < s <= t.
double cov_erw1(double s, double t, double b, double p);
double cov_erw2(double s, double t, double b, double p);

/// Brownian scaling constant at criticality (b = 1/p - 2 for ERW1, b = 1 - 2p for ERW2).
double critical_prefactor(Model model, double p);

/// First two moments of the branching process Y_1 (one percolation cluster)
/// at time t, from the forward equation.
std::pair<double, double> branching_moments(double t, double b, double p);

struct WConstants {
  double gamma_shape;  // W ~ Gamma(shape, rate), whole-tree martingale limit
  double gamma_rate;
  double mean_wi;      // E[W_i], cluster martingale limit
  double second_wi;    // E[W_i^2]
};
WConstants w_constants(double b, double p);

struct Z1Moments {
  double zhat_mean;
  double zhat_second;
  double z_mean;
  double z_second;
};
Z1Moments z1_moments(double b, double p);

/// Deterministic birth-time window (t_minus, t_plus) for cluster i at horizon n.
/// t_plus is +infinity for i = 1.
std::pair<double, double> birth_time_bounds(long long n, long long i, double b, double p, double eps = 0.0);

/// E[Beta(1/(b+1), i-1)^q], with Beta(r, 0) = 1.
double beta_moment(long long i, double b, double q);

/// sum_i E[Z_i^alpha] < infinity iff alpha * kappa > 1.
bool zi_alpha_moment_summable(double alpha, double b, double p);

}  // namespace rwr::theory
