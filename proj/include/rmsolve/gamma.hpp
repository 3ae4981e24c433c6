#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rmsolve {

/// Find gamma with || [v - gamma 1]_+ ||_2 = target. The left-hand side is
/// strictly decreasing in gamma below max(v) and zero above, so the root is
/// unique for every target > 0.
struct GammaProblem {
  std::vector<double> v;
  double target = 1.0;
};

/// Work counters filled in by the solvers (element comparisons only).
struct GammaStats {
  std::uint64_t comparisons = 0;
  std::uint64_t rounds = 0;
};

enum class GammaMethod { Sorted, Select, Bisect };

/// Smaller root of k g^2 - 2 s g + (s2 - t^2) = 0, i.e. the shift that gives
/// a k-element active set with sum s and sum of squares s2 the l2 norm t.
/// Discriminants in [-1e-12 * max(1, s^2), 0) are treated as 0.
std::optional<double> solve_k_quadratic(double s, double s2, long k, double t);

/// Descending sort, then scan prefixes until the prefix root is at least the
/// next element. O(n log n).
double gamma_sorted(const GammaProblem& p, GammaStats* stats = nullptr);

/// Partition-and-recurse on the median with running sums of the elements known
/// to be active. Expected O(n).
double gamma_select(const GammaProblem& p, GammaStats* stats = nullptr);

/// Bisection on [min v - t, max v] until adjacent doubles bracket the root.
double gamma_bisect(const GammaProblem& p);

double gamma_solve(const GammaProblem& p, GammaMethod method);

/// || [v - gamma]_+ ||_2
double gamma_residual_norm(std::span<const double> v, double gamma);

}  // namespace rmsolve
