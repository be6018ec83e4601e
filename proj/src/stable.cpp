#include "rwr/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rwr/error.hpp"

namespace rwr {

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw ParameterError("stable index alpha must lie in (0, 2], got " + std::to_string(alpha));
  if (dim < 1) throw ParameterError("dimension must be positive");
}

double sample_positive_stable(double index, Rng& rng) {
  if (!(index > 0.0 && index < 1.0))
    throw ParameterError("one-sided stable index must lie in (0, 1), got " + std::to_string(index));
  // Kanter's representation, evaluated in logs so that small indices do not overflow.
  const double u = std::numbers::pi * rng.uniform_open();
  const double e = rng.exponential(1.0);
  const double a = index;
  const double log_x = std::log(std::sin(a * u)) - std::log(std::sin(u)) / a +
                       (1.0 - a) / a * (std::log(std::sin((1.0 - a) * u)) - std::log(e));
  return std::exp(log_x);
}

void sample_isotropic_stable(const StableParams& params, Rng& rng, std::span<double> out) {
  double scale = std::numbers::sqrt2;
  if (params.alpha == 1.0) {
    // index 1/2: the subordinator is 1/(2 Z^2), so the mixture is G/|Z|
    scale = 1.0 / std::abs(rng.normal());
  } else if (params.alpha != 2.0) {
    scale = std::sqrt(2.0 * sample_positive_stable(params.alpha / 2.0, rng));
  }
  for (double& x : out) x = scale * rng.normal();
}

std::vector<double> sample_isotropic_stable(const StableParams& params, Rng& rng) {
  params.validate();
  std::vector<double> out(static_cast<std::size_t>(params.dim));
  sample_isotropic_stable(params, rng, out);
  return out;
}

CfEstimate empirical_cf(std::span<const double> samples, std::span<const double> theta) {
  const std::size_t dim = theta.size();
  if (dim == 0 || samples.empty()) throw UsageError("empirical_cf needs samples and a nonempty theta");
  if (samples.size() % dim != 0) throw UsageError("sample length is not a multiple of theta's dimension");
  const std::size_t count = samples.size() / dim;
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    double phase = 0.0;
    for (std::size_t j = 0; j < dim; ++j) phase += theta[j] * samples[k * dim + j];
    re += std::cos(phase);
    im += std::sin(phase);
  }
  const double n = static_cast<double>(count);
  return {{re / n, im / n}, 1.0 / std::sqrt(n)};
}

}  // namespace rwr
