#include "rwr/urn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rwr/error.hpp"

namespace rwr {

namespace {

void check_parameters(double b, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1), got " + std::to_string(p));
  if (!(b >= 0.0)) throw ParameterError("b must be nonnegative, got " + std::to_string(b));
}

}  // namespace

ReplacementRule replacement_rule(UrnModel model, double b, double p) {
  check_parameters(b, p);
  const double fresh = (1.0 - p) / 2.0;
  ReplacementRule rule{model, b, p, {}};
  if (model == UrnModel::ReinforcedERW) {
    // Black and green both stand for a step to the right.
    const std::vector<Replacement> right = {
        {p, {b + 1.0, 0.0, 0.0}}, {fresh, {0.0, 1.0, 0.0}}, {fresh, {0.0, 0.0, 1.0}}};
    rule.by_color[0] = right;
    rule.by_color[1] = right;
    rule.by_color[2] = {{p, {0.0, 0.0, b + 1.0}}, {fresh, {0.0, 1.0, 0.0}}, {fresh, {0.0, 0.0, 1.0}}};
  } else {
    const std::vector<Replacement> right = {
        {p, {b, 1.0, 0.0}}, {fresh, {b, 1.0, 0.0}}, {fresh, {b, 0.0, 1.0}}};
    rule.by_color[0] = right;
    rule.by_color[1] = right;
    rule.by_color[2] = {{p, {0.0, 0.0, b + 1.0}}, {fresh, {0.0, 0.0, b + 1.0}}, {fresh, {0.0, 1.0, b}}};
  }
  return rule;
}

Matrix3 ReplacementRule::mean_matrix() const {
  Matrix3 a{};
  for (int j = 0; j < 3; ++j)
    for (const auto& r : by_color[j])
      for (int i = 0; i < 3; ++i) a[i][j] += r.probability * r.added[i];
  return a;
}

const Mass3& ReplacementRule::sample(int color, Rng& rng) const {
  const auto& outcomes = by_color[static_cast<std::size_t>(color)];
  double u = rng.uniform();
  for (const auto& r : outcomes) {
    if (u < r.probability) return r.added;
    u -= r.probability;
  }
  return outcomes.back().added;
}

UrnState initial_urn(Rng& rng) {
  UrnState s;
  if (rng.uniform() < 0.5)
    s.masses[1] = 1.0;
  else
    s.masses[2] = 1.0;
  return s;
}

int draw_color(const UrnState& state, Rng& rng) {
  const double u = rng.uniform() * state.total();
  if (u < state.masses[0]) return 0;
  if (u < state.masses[0] + state.masses[1]) return 1;
  return 2;
}

void draw_and_replace(const ReplacementRule& rule, UrnState& state, Rng& rng) {
  const int color = draw_color(state, rng);
  const Mass3& added = rule.sample(color, rng);
  for (int i = 0; i < 3; ++i) state.masses[i] += added[i];
  ++state.draws;
}

std::vector<Mass3> simulate_urn(const ReplacementRule& rule, std::int64_t n, Rng& rng) {
  if (n < 1) throw UsageError("urn path needs n >= 1");
  std::vector<Mass3> path;
  path.reserve(static_cast<std::size_t>(n));
  UrnState state = initial_urn(rng);
  path.push_back(state.masses);
  for (std::int64_t k = 2; k <= n; ++k) {
    draw_and_replace(rule, state, rng);
    path.push_back(state.masses);
  }
  return path;
}

double position_from_urn(UrnModel model, double b, const Mass3& masses, std::int64_t n) {
  const double steps = static_cast<double>(n);
  if (model == UrnModel::StrongERW) return 2.0 * masses[1] - steps;
  return 2.0 * (masses[0] / (b + 1.0) + masses[1]) - steps;
}

double sample_urn_position(const ReplacementRule& rule, std::int64_t n, Rng& rng) {
  if (n < 1) throw UsageError("urn run needs n >= 1");
  UrnState state = initial_urn(rng);
  for (std::int64_t k = 2; k <= n; ++k) draw_and_replace(rule, state, rng);
  return position_from_urn(rule.model, rule.b, state.masses, n);
}

ExactPositionMoments exact_position_moments(const ReplacementRule& rule, std::int64_t s, std::int64_t t) {
  if (s < 1 || t < s) throw ParameterError("exact moments need 1 <= s <= t");
  if (rule.model != UrnModel::StrongERW)
    throw UsageError("exact moment recursion needs a balanced urn; the reinforced urn's total mass is random");
  const Matrix3 a = rule.mean_matrix();
  Matrix3 q[3]{};
  for (int j = 0; j < 3; ++j)
    for (const auto& r : rule.by_color[j])
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) q[j][i][k] += r.probability * r.added[i] * r.added[k];
  const Mass3 v{0.0, 2.0, 0.0};

  Mass3 m{0.0, 0.5, 0.5};
  Matrix3 second{};
  second[1][1] = second[2][2] = 0.5;
  Matrix3 cov_s{}, prop{};
  ExactPositionMoments out;
  auto linear = [&](const Mass3& x) { return v[0] * x[0] + v[1] * x[1] + v[2] * x[2]; };
  auto quad = [&](const Matrix3& c) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) sum += v[i] * c[i][k] * v[k];
    return sum;
  };
  for (std::int64_t n = 1;; ++n) {
    if (n == s) {
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
          cov_s[i][k] = second[i][k] - m[i] * m[k];
          prop[i][k] = i == k ? 1.0 : 0.0;
        }
      out.mean_s = linear(m) - static_cast<double>(s);
      out.var_s = quad(cov_s);
    }
    if (n == t) {
      Matrix3 c{};
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) c[i][k] = second[i][k] - m[i] * m[k];
      out.mean_t = linear(m) - static_cast<double>(t);
      out.var_t = quad(c);
      Matrix3 cross{};  // Cov(X_t, X_s) = prop * Cov(X_s)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) cross[i][k] += prop[i][l] * cov_s[l][k];
      out.cov = quad(cross);
      return out;
    }
    const double total = 1.0 + static_cast<double>(n - 1) * (rule.b + 1.0);
    Matrix3 next = second;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double am = 0.0;
        for (int l = 0; l < 3; ++l) am += a[i][l] * second[l][k] + second[i][l] * a[k][l];
        next[i][k] += am / total;
        for (int j = 0; j < 3; ++j) next[i][k] += m[j] / total * q[j][i][k];
      }
    Mass3 mn = m;
    for (int i = 0; i < 3; ++i)
      for (int l = 0; l < 3; ++l) mn[i] += a[i][l] * m[l] / total;
    if (n >= s) {
      Matrix3 pn = prop;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) pn[i][k] += a[i][l] * prop[l][k] / total;
      prop = pn;
    }
    m = mn;
    second = next;
  }
}

EigenData eigen_data(UrnModel model, double b, double p) {
  check_parameters(b, p);
  EigenData e{};
  if (model == UrnModel::ReinforcedERW) {
    const double l1 = b * p + 1.0;
    e.eigenvalues = {l1, (b + 1.0) * p, 0.0};
    e.right[0] = {(b + 1.0) * p / (2.0 * l1), (1.0 - p) / (2.0 * l1), 0.5};
    e.right[1] = {-0.5, 0.0, 0.5};
    e.right[2] = {-0.5, 0.5, 0.0};
    e.left[0] = {1.0, 1.0, 1.0};
    e.left[1] = {-1.0, -1.0, 1.0};
    e.left[2] = {(p - 1.0) / l1, ((2.0 * b + 1.0) * p + 1.0) / l1, (p - 1.0) / l1};
  } else {
    const double bp = b + p;
    e.eigenvalues = {b + 1.0, bp, 0.0};
    e.right[0] = {b / (2.0 * (b + 1.0)), 1.0 / (2.0 * (b + 1.0)), 0.5};
    e.right[1] = {b / (2.0 * bp), p / (2.0 * bp), -0.5};
    e.right[2] = {0.5, -0.5, 0.0};
    e.left[0] = {1.0, 1.0, 1.0};
    e.left[1] = {1.0, 1.0, -1.0};
    const double scale = 1.0 / ((b + 1.0) * bp);
    e.left[2] = {((1.0 + p) * b + 2.0 * p) * scale, -(2.0 * b + 1.0 + p) * b * scale, (1.0 - p) * b * scale};
  }
  return e;
}

std::int64_t sample_eta(std::int64_t n, std::int64_t i, double b, Rng& rng) {
  if (i < 1 || i > n) throw ParameterError("sample_eta needs 1 <= i <= n");
  if (!(b >= 0.0)) throw ParameterError("b must be nonnegative");
  const double lump = b + 1.0;
  double green = 1.0;
  double red = static_cast<double>(i - 1) * lump;
  for (std::int64_t k = 0; k < n - i; ++k) {
    if (rng.uniform() * (green + red) < green)
      green += lump;
    else
      red += lump;
  }
  const double eta = (green + b) / lump;
  const double rounded = std::round(eta);
  if (std::abs(eta - rounded) > 1e-6) throw std::logic_error("eta urn left a non-integer residue");
  return static_cast<std::int64_t>(rounded);
}

}  // namespace rwr
