#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rwr/rng.hpp"

namespace rwr {

/// Isotropic alpha-stable law on R^dim with E exp(i<theta,X>) = exp(-|theta|^alpha).
struct StableParams {
  double alpha = 2.0;
  int dim = 1;

  void validate() const;
};

/// One-sided stable variate with Laplace transform exp(-lambda^index), 0 < index < 1.
double sample_positive_stable(double index, Rng& rng);

/// Writes one isotropic stable vector into `out` (size params.dim).
void sample_isotropic_stable(const StableParams& params, Rng& rng, std::span<double> out);
std::vector<double> sample_isotropic_stable(const StableParams& params, Rng& rng);

struct CfEstimate {
  std::complex<double> value;
  double se = 0.0;
};

/// Empirical characteristic function (1/N) sum exp(i<theta, x_k>) of samples
/// stored row-major with dim = theta.size(). The reported SE is 1/sqrt(N).
CfEstimate empirical_cf(std::span<const double> samples, std::span<const double> theta);

}  // namespace rwr
