#include "rwr/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rwr/error.hpp"

namespace rwr::theory {

namespace {

constexpr double kCriticalTol = 1e-12;

void check_bp(double b, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1), got " + std::to_string(p));
  if (!(b >= 0.0)) throw ParameterError("b must be nonnegative, got " + std::to_string(b));
}

Regime classify(double value, double threshold) {
  if (std::abs(value - threshold) <= kCriticalTol) return Regime::Critical;
  return value < threshold ? Regime::Sub : Regime::Super;
}

void check_times(double s, double t) {
  if (!(s > 0.0)) throw ParameterError("covariance times must be positive");
  if (s > t) throw ParameterError("covariance expects s <= t");
}

}  // namespace

const char* to_string(Model m) {
  switch (m) {
    case Model::ERW1: return "ERW1";
    case Model::ERW2: return "ERW2";
    case Model::SRS: return "SRS";
  }
  return "?";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Sub: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Super: return "supercritical";
  }
  return "?";
}

double kappa_erw1(double b, double p) { return (b + 1.0) * p / (b * p + 1.0); }
double kappa_strong(double b, double p) { return (b + p) / (b + 1.0); }

RegimeReport regime(Model model, double b, double p, std::optional<double> alpha) {
  check_bp(b, p);
  RegimeReport r{model, Regime::Sub, 0.0, 0.0, {}};
  switch (model) {
    case Model::ERW1:
      r.threshold = 1.0 / (2.0 + b);
      r.kappa = kappa_erw1(b, p);
      r.regime = classify(p, r.threshold);
      r.constants["lambda1"] = b * p + 1.0;
      r.constants["lambda2"] = (b + 1.0) * p;
      break;
    case Model::ERW2:
      r.threshold = (1.0 - b) / 2.0;
      r.kappa = kappa_strong(b, p);
      r.regime = classify(p, r.threshold);
      r.constants["lambda1"] = b + 1.0;
      r.constants["lambda2"] = b + p;
      break;
    case Model::SRS: {
      if (!alpha) throw ParameterError("SRS regime needs the stable index alpha");
      if (!(*alpha > 0.0 && *alpha <= 2.0)) throw ParameterError("alpha must lie in (0, 2]");
      r.kappa = kappa_strong(b, p);
      r.threshold = 1.0 / r.kappa;
      r.regime = classify(*alpha * r.kappa, 1.0);
      r.constants["alpha"] = *alpha;
      r.constants["alpha_kappa"] = *alpha * r.kappa;
      break;
    }
  }
  if (model != Model::SRS) {
    r.constants["lambda_ratio"] = r.constants["lambda2"] / r.constants["lambda1"];
    if (r.regime == Regime::Sub) r.constants["position_exponent"] = 0.5;
    if (r.regime == Regime::Super) r.constants["position_exponent"] = r.kappa;
    if (r.regime == Regime::Critical) r.constants["critical_prefactor"] = critical_prefactor(model, p);
  } else {
    const double a = *alpha;
    r.constants["position_exponent"] = r.regime == Regime::Sub ? 1.0 / a : r.kappa;
  }
  return r;
}

double cov_erw1(double s, double t, double b, double p) {
  check_bp(b, p);
  check_times(s, t);
  if (regime(Model::ERW1, b, p).regime != Regime::Sub)
    throw RegimeError("ERW1 covariance exists only for p < 1/(2+b)");
  const double kappa = kappa_erw1(b, p);
  const double lead = (b * p + 1.0) / ((1.0 - (2.0 + b) * p) * (b + 1.0));
  const double linear = (p * b * b * b + (3.0 * p - p * p) * b * b + b) / ((b * p + 1.0) * (b * p + 1.0) * (b + 1.0));
  return lead * s * std::pow(t / s, kappa) + linear * s;
}

double cov_erw2(double s, double t, double b, double p) {
  check_bp(b, p);
  check_times(s, t);
  if (regime(Model::ERW2, b, p).regime != Regime::Sub)
    throw RegimeError("ERW2 covariance exists only for p < (1-b)/2");
  const double kappa = kappa_strong(b, p);
  const double lead = (1.0 - b * b) * p / ((1.0 - b - 2.0 * p) * (b + p));
  const double linear = (1.0 + p) * b / (b + p);
  return lead * s * std::pow(t / s, kappa) + linear * s;
}

double critical_prefactor(Model model, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1)");
  switch (model) {
    case Model::ERW1:
      if (p > 0.5) throw ParameterError("ERW1 is critical only for p <= 1/2 (b = 1/p - 2 >= 0)");
      return std::sqrt(p / (1.0 - p));
    case Model::ERW2:
      if (p > 0.5) throw ParameterError("ERW2 is critical only for p <= 1/2 (b = 1 - 2p >= 0)");
      return std::sqrt(2.0 * p * p / (1.0 - p));
    case Model::SRS:
      // alpha = 2 with b = 1 - 2p: Brownian limit scaled by sqrt(4p^2/(1-p)).
      if (p > 0.5) throw ParameterError("the alpha = 2 SRS is critical only for p <= 1/2");
      return std::sqrt(4.0 * p * p / (1.0 - p));
  }
  return 0.0;
}

std::pair<double, double> branching_moments(double t, double b, double p) {
  check_bp(b, p);
  if (!(t >= 0.0)) throw ParameterError("time must be nonnegative");
  if (t == 0.0) return {1.0, 1.0};
  // Births at rate Y with jump b + Bernoulli(p): m = b + p, E[jump^2] = b^2 + 2bp + p.
  const double m = b + p;
  const double c = (b + 1.0) * (b + 2.0 * p) / m;  // = 1 + E[jump^2]/m
  const double g = std::exp(m * t);
  return {g, c * g * g - (c - 1.0) * g};
}

WConstants w_constants(double b, double p) {
  check_bp(b, p);
  const double r = 1.0 / (b + 1.0);
  return {r, r, 1.0, (b + 1.0) * (b + 2.0 * p) / (b + p)};
}

Z1Moments z1_moments(double b, double p) {
  check_bp(b, p);
  const double r = 1.0 / (b + 1.0);
  Z1Moments z{};
  z.zhat_mean = std::tgamma(r) / std::tgamma(1.0 + p / (b + 1.0));
  z.zhat_second = (b + 1.0) * (b + 1.0) / (b + p) * std::tgamma(r) / std::tgamma((b + 2.0 * p) / (b + 1.0));
  const double shrink = p / (b + p);
  z.z_mean = shrink * z.zhat_mean;
  z.z_second = shrink * shrink * z.zhat_second;
  return z;
}

std::pair<double, double> birth_time_bounds(long long n, long long i, double b, double p, double eps) {
  check_bp(b, p);
  if (i < 1) throw ParameterError("cluster index must be >= 1");
  if (n < i) throw ParameterError("birth-time bounds need n >= i");
  if (!(eps >= 0.0)) throw ParameterError("eps must be nonnegative");
  const double scale = 1.0 / (b + 1.0);
  const double base = std::log(static_cast<double>(n)) + std::log(1.0 - p);
  const double t_minus = scale * (base - std::log(static_cast<double>(i + 1)) - eps);
  const double t_plus = i == 1 ? std::numeric_limits<double>::infinity()
                               : scale * (base - std::log(static_cast<double>(i - 1)) + eps);
  return {t_minus, t_plus};
}

double beta_moment(long long i, double b, double q) {
  if (i < 1) throw ParameterError("beta_moment needs i >= 1");
  if (!(q >= 0.0) || !(b >= 0.0)) throw ParameterError("beta_moment needs q >= 0 and b >= 0");
  if (i == 1) return 1.0;
  const double r = 1.0 / (b + 1.0);
  const double s = static_cast<double>(i - 1);
  // B(r+q, s) / B(r, s)
  return std::exp(std::lgamma(r + q) + std::lgamma(r + s) - std::lgamma(r) - std::lgamma(r + q + s));
}

bool zi_alpha_moment_summable(double alpha, double b, double p) {
  check_bp(b, p);
  return alpha * kappa_strong(b, p) > 1.0;
}

}  // namespace rwr::theory
