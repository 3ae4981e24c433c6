#include "rmsolve/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace rmsolve {

NormalFormGame::NormalFormGame(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("NormalFormGame: dimensions must be positive");
  }
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("NormalFormGame: expected " + std::to_string(rows_ * cols_) +
                                " entries, got " + std::to_string(data_.size()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("NormalFormGame: non-finite entry");
  }
}

Vector NormalFormGame::apply(std::span<const double> y) const {
  if (y.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = data_.data() + i * cols_;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * y[j];
    out[i] = acc;
  }
  return out;
}

Vector NormalFormGame::apply_transpose(std::span<const double> x) const {
  if (x.size() != rows_) throw std::invalid_argument("apply_transpose: dimension mismatch");
  Vector out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = data_.data() + i * cols_;
    const double xi = x[i];
    for (std::size_t j = 0; j < cols_; ++j) out[j] += r[j] * xi;
  }
  return out;
}

double NormalFormGame::value(std::span<const double> x, std::span<const double> y) const {
  return dot(x, apply(y));
}

NormalFormGame NormalFormGame::scaled(double c) const {
  std::vector<double> d = data_;
  for (double& v : d) v *= c;
  return {rows_, cols_, std::move(d)};
}

NormalFormGame counterexample_game() {
  return {3, 3, {3, 0, -3, 0, 3, -4, 0, 0, 1}};
}

NormalFormGame matching_pennies() { return {2, 2, {1, -1, -1, 1}}; }

NormalFormGame random_matrix_game(int m, int n, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("random_matrix_game: dimensions must be positive");
  std::mt19937_64 gen(seed);
  std::vector<double> d(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  for (double& v : d) v = 2.0 * static_cast<double>(gen() >> 11) * kInv53 - 1.0;
  return {static_cast<std::size_t>(m), static_cast<std::size_t>(n), std::move(d)};
}

namespace {

BestResponse argmax_lowest(std::span<const double> v) {
  double best = -std::numeric_limits<double>::infinity();
  for (double e : v) best = std::max(best, e);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= best - 1e-12) return {best, i};
  }
  return {best, 0};
}

BestResponse argmin_lowest(std::span<const double> v) {
  double best = std::numeric_limits<double>::infinity();
  for (double e : v) best = std::min(best, e);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= best + 1e-12) return {best, i};
  }
  return {best, 0};
}

}  // namespace

double duality_gap(const NormalFormGame& game, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != game.rows() || y.size() != game.cols()) {
    throw std::invalid_argument("duality_gap: dimension mismatch");
  }
  const Vector ay = game.apply(y);
  const Vector atx = game.apply_transpose(x);
  return argmax_lowest(ay).value - argmin_lowest(atx).value;
}

BestResponse best_response(const NormalFormGame& game, Player player,
                           std::span<const double> opp) {
  if (player == Player::X) {
    if (opp.size() != game.cols()) throw std::invalid_argument("best_response: dimension mismatch");
    return argmax_lowest(game.apply(opp));
  }
  if (opp.size() != game.rows()) throw std::invalid_argument("best_response: dimension mismatch");
  return argmin_lowest(game.apply_transpose(opp));
}

double regret_of_sequence(std::span<const SimplexVector> strategies,
                          std::span<const UtilityVector> utilities) {
  if (strategies.empty()) throw std::invalid_argument("regret_of_sequence: empty sequence");
  if (strategies.size() != utilities.size()) {
    throw std::invalid_argument("regret_of_sequence: length mismatch");
  }
  const std::size_t n = strategies.front().size();
  Vector cumulative(n, 0.0);
  double realized = 0.0;
  for (std::size_t t = 0; t < strategies.size(); ++t) {
    if (strategies[t].size() != n || utilities[t].size() != n) {
      throw std::invalid_argument("regret_of_sequence: dimension mismatch");
    }
    realized += dot(strategies[t], utilities[t]);
    for (std::size_t a = 0; a < n; ++a) cumulative[a] += utilities[t][a];
  }
  return *std::max_element(cumulative.begin(), cumulative.end()) - realized;
}

LipschitzBound lipschitz_bound(const NormalFormGame& game) {
  const std::size_t n = game.cols();
  // Fixed pseudo-random start so the iterate is not orthogonal to the top
  // singular vector for structured matrices (e.g. matching pennies vs. ones).
  std::mt19937_64 gen(0x5eed5eedULL);
  Vector v(n);
  for (double& e : v) e = 0.5 + static_cast<double>(gen() >> 11) / 9007199254740992.0;
  double nv = norm2(v);
  for (double& e : v) e /= nv;

  double sigma = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Vector w = game.apply_transpose(game.apply(v));
    const double nw = norm2(w);
    if (nw == 0.0) return {0.0};
    const double next = std::sqrt(nw);
    for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / nw;
    if (it > 0 && std::abs(next - sigma) <= 1e-8 * 1e-2 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  // Rayleigh quotient refinement: ||A v|| for unit v.
  return {std::max(sigma, norm2(game.apply(v)))};
}

SimplexVector uniform_average(std::span<const SimplexVector> traj) {
  if (traj.empty()) throw std::invalid_argument("uniform_average: empty trajectory");
  Vector avg(traj.front().size(), 0.0);
  for (const auto& x : traj) {
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += x[i];
  }
  for (double& e : avg) e /= static_cast<double>(traj.size());
  return avg;
}

std::size_t last_half_start(std::size_t T) {
  const std::size_t start = (T + 1) / 2;  // ceil(T/2), 0-indexed first element
  return start >= T ? T - 1 : start;
}

SimplexVector last_half_average(std::span<const SimplexVector> traj) {
  if (traj.empty()) throw std::invalid_argument("last_half_average: empty trajectory");
  return uniform_average(traj.subspan(last_half_start(traj.size())));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2_sq(std::span<const double> a) { return dot(a, a); }

double norm2(std::span<const double> a) { return std::sqrt(norm2_sq(a)); }

double dist2_sq(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double positive_part_norm2(std::span<const double> a) {
  double acc = 0.0;
  for (double e : a) {
    if (e > 0.0) acc += e * e;
  }
  return std::sqrt(acc);
}

double positive_part_sum(std::span<const double> a) {
  double acc = 0.0;
  for (double e : a) {
    if (e > 0.0) acc += e;
  }
  return acc;
}

SimplexVector uniform_strategy(std::size_t n) {
  return Vector(n, 1.0 / static_cast<double>(n));
}

SimplexVector normalize_positive_part(std::span<const double> v) {
  const double s = positive_part_sum(v);
  if (!(s > 0.0)) return uniform_strategy(v.size());
  Vector x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = v[i] > 0.0 ? v[i] / s : 0.0;
  return x;
}

bool is_simplex(std::span<const double> x, double tol) {
  double s = 0.0;
  for (double e : x) {
    if (!(e >= -1e-12)) return false;
    s += e;
  }
  return std::abs(s - 1.0) <= tol;
}

}  // namespace rmsolve
