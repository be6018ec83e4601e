#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rwr/patree.hpp"
#include "rwr/rng.hpp"
#include "rwr/stable.hpp"
#include "rwr/stats.hpp"
#include "rwr/theory.hpp"

namespace rwr {

enum class SrsMethod { Direct, Clusters };

struct SRSConfig {
  double alpha = 2.0;
  int dim = 1;
  double b = 0.0;
  double p = 0.5;
  std::int64_t n = 1000;
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;

  double kappa() const { return theory::kappa_strong(b, p); }
  theory::RegimeReport regime() const { return theory::regime(theory::Model::SRS, b, p, alpha); }
  StableParams stable() const { return {alpha, dim}; }
  void validate() const;
};

/// One draw of S_n (length dim).
std::vector<double> simulate_srs(const SRSConfig& config, Rng& rng, SrsMethod method);

/// S_n = sum over clusters of |c| xi_c for a given forest.
std::vector<double> cluster_sum(const PATForest& forest, const StableParams& stable, Rng& rng);

/// Options of the subcritical limit evaluator. Paths below x_min contribute
/// through the pathwise power-law tail, and x_min is placed where that tail is
/// `tail_tol` of the integrand scale.
struct SubcriticalCfOptions {
  std::int64_t paths = 4000;
  double tail_tol = 1e-3;
  std::uint64_t seed = 0;
};

/// theta_sets[k] holds times.size() blocks of length dim (theta_1, ..., theta_m).
/// All sets share the same f-paths.
std::vector<CfEstimate> subcritical_limit_cf(std::span<const std::vector<double>> theta_sets,
                                             std::span<const double> times, double alpha, double b, double p,
                                             const SubcriticalCfOptions& options = {});

/// Integral of ||sum_j f(x / t_j) theta_j||^alpha over x > 0 for one f-path,
/// as used by the subcritical evaluator. Exposed for testing.
double f_path_integral(const ClusterPath& path, double x_min, std::span<const double> theta,
                       std::span<const double> times, double alpha, double b, double p);

std::vector<std::complex<double>> critical_limit_cf(std::span<const std::vector<double>> theta_sets,
                                                    std::span<const double> times, double alpha, double b, double p,
                                                    double z1_alpha_moment);

/// Mean of (|c_{1,n}| / n^kappa)^alpha with its standard error.
Estimate estimate_z1_alpha_moment(double alpha, double b, double p, std::int64_t n, std::int64_t replicas,
                                  std::uint64_t seed);

/// Cluster weights |C_{i,n}| / n^kappa indexed by the root label i (0 when node
/// i roots no cluster; slot 0 unused), from one percolated tree.
std::vector<double> supercritical_weights(std::int64_t n, double b, double p, Rng& rng);

struct SupercriticalSample {
  std::vector<double> weights;
  std::vector<double> z;  // sum_i weights[i] xi_i
};
SupercriticalSample sample_supercritical_Z(const SRSConfig& config, std::int64_t n, Rng& rng);

enum class SizeStatistic { Auto, Median, Mean };

struct ScalingResult {
  std::vector<double> n;
  std::vector<double> statistic;
  LoglogFit fit;
};

/// Log-log slope of a size statistic of |S_n| against n (median for alpha <= 1,
/// mean otherwise, unless overridden).
ScalingResult scaling_exponent(const SRSConfig& config, std::span<const std::int64_t> n_grid, SrsMethod method,
                               SizeStatistic statistic = SizeStatistic::Auto, unsigned threads = 1);

}  // namespace rwr
