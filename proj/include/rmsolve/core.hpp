#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rmsolve {

/// Dense real vector. Used for mixed strategies (points of the probability
/// simplex) and for utility / prediction vectors.
using Vector = std::vector<double>;
using SimplexVector = Vector;
using UtilityVector = Vector;

enum class Player { X, Y };

/// Diameter-style constant for the probability simplex: max of the l2
/// diameter (sqrt 2) and the largest l2 norm of a point (1).
inline constexpr double kSimplexDiameter = 1.4142135623730951;

/// Zero-sum matrix game. Entry (i, j) is the payoff to the row player X when
/// X plays i and Y plays j; X maximizes, Y minimizes.
class NormalFormGame {
 public:
  NormalFormGame(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

  /// A y (utility of X against y).
  Vector apply(std::span<const double> y) const;
  /// A^T x.
  Vector apply_transpose(std::span<const double> x) const;
  /// x^T A y.
  double value(std::span<const double> x, std::span<const double> y) const;

  NormalFormGame scaled(double c) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct LipschitzBound {
  double value = 0.0;
};

struct BestResponse {
  double value = 0.0;
  std::size_t index = 0;
};

NormalFormGame counterexample_game();
NormalFormGame matching_pennies();

/// Entries i.i.d. uniform on [-1, 1]. The generator is std::mt19937_64 seeded
/// with `seed`; each entry is 2 * (g() >> 11) * 2^-53 - 1, so matrices are
/// bit-identical across platforms and standard libraries.
NormalFormGame random_matrix_game(int m, int n, std::uint64_t seed);

/// max_i (A y)_i - min_j (A^T x)_j, by vertex enumeration.
double duality_gap(const NormalFormGame& game, std::span<const double> x,
                   std::span<const double> y);

/// Pure best response of `player` against the opponent strategy `opp`.
/// X maximizes (A opp), Y minimizes (A^T opp). Ties go to the lowest index
/// within 1e-12 of the optimum.
BestResponse best_response(const NormalFormGame& game, Player player,
                           std::span<const double> opp);

/// max over vertices e_a of sum_t <e_a - x^t, u^t>.
double regret_of_sequence(std::span<const SimplexVector> strategies,
                          std::span<const UtilityVector> utilities);

/// Spectral norm of A by power iteration on A^T A (1e-8 relative tolerance).
LipschitzBound lipschitz_bound(const NormalFormGame& game);

SimplexVector uniform_average(std::span<const SimplexVector> traj);
/// Mean of entries ceil(T/2)+1 .. T (1-indexed); the single entry when T = 1.
SimplexVector last_half_average(std::span<const SimplexVector> traj);

/// Index of the first entry of the last-half window for a trajectory of
/// length T (0-indexed).
std::size_t last_half_start(std::size_t T);

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm2_sq(std::span<const double> a);
double dist2_sq(std::span<const double> a, std::span<const double> b);
double positive_part_norm2(std::span<const double> a);
double positive_part_sum(std::span<const double> a);
SimplexVector uniform_strategy(std::size_t n);
/// [v]_+ normalized in l1, or uniform if [v]_+ = 0.
SimplexVector normalize_positive_part(std::span<const double> v);
bool is_simplex(std::span<const double> x, double tol = 1e-9);

}  // namespace rmsolve
