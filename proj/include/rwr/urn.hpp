#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rwr/rng.hpp"

namespace rwr {

/// Colors in order: black, green, red.
using Mass3 = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;  // [row][column]

enum class UrnModel {
  ReinforcedERW,  // weights grow only on memory times
  StrongERW,      // weights grow at every step
};

struct Replacement {
  double probability;
  Mass3 added;
};

/// Random replacement law: for each drawn color, the distribution of the added masses.
struct ReplacementRule {
  UrnModel model;
  double b;
  double p;
  std::array<std::vector<Replacement>, 3> by_color;

  /// Column j is the expected added mass when color j is drawn.
  Matrix3 mean_matrix() const;
  const Mass3& sample(int color, Rng& rng) const;
};

ReplacementRule replacement_rule(UrnModel model, double b, double p);

struct UrnState {
  Mass3 masses{0.0, 0.0, 0.0};
  std::int64_t draws = 0;

  double total() const { return masses[0] + masses[1] + masses[2]; }
};

/// Time-1 configuration: one green or one red ball with probability 1/2 each.
UrnState initial_urn(Rng& rng);
/// Color drawn proportionally to mass.
int draw_color(const UrnState& state, Rng& rng);
void draw_and_replace(const ReplacementRule& rule, UrnState& state, Rng& rng);

/// Mass path (B_k, G_k, R_k) for k = 1..n; entry k-1 holds time k.
std::vector<Mass3> simulate_urn(const ReplacementRule& rule, std::int64_t n, Rng& rng);

/// Walk position at time n encoded by the urn at time n. The caller guarantees
/// the masses come from a length-n run of the same model and b.
double position_from_urn(UrnModel model, double b, const Mass3& masses, std::int64_t n);

/// Exact moments of (S_s, S_t), 1 <= s <= t, from the first- and second-moment
/// recursions of the urn composition. Strong model only: the recursion needs
/// the deterministic total mass 1 + (k-1)(b+1).
struct ExactPositionMoments {
  double mean_s = 0.0;
  double mean_t = 0.0;
  double var_s = 0.0;
  double var_t = 0.0;
  double cov = 0.0;
};
ExactPositionMoments exact_position_moments(const ReplacementRule& rule, std::int64_t s, std::int64_t t);

/// S_n read off an urn run to time n, without storing the path.
double sample_urn_position(const ReplacementRule& rule, std::int64_t n, Rng& rng);

/// Closed-form spectral data of the mean replacement matrix: right eigenvectors
/// with unit L1 norm and the dual left eigenvectors (u_i . v_j = delta_ij).
struct EigenData {
  std::array<double, 3> eigenvalues;
  std::array<Mass3, 3> right;
  std::array<Mass3, 3> left;
};

EigenData eigen_data(UrnModel model, double b, double p);

/// Size of the subtree hanging off node i in a preferential attachment tree of
/// n nodes, via the two-color mass urn started from (1, (i-1)(b+1)).
std::int64_t sample_eta(std::int64_t n, std::int64_t i, double b, Rng& rng);

}  // namespace rwr
