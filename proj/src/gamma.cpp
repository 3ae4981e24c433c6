#include "rmsolve/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rmsolve {

namespace {

void validate(const GammaProblem& p) {
  if (p.v.empty()) throw std::invalid_argument("gamma: empty vector");
  if (!(p.target > 0.0) || !std::isfinite(p.target)) {
    throw std::invalid_argument("gamma: target norm must be positive and finite");
  }
  for (double e : p.v) {
    if (!std::isfinite(e)) throw std::invalid_argument("gamma: non-finite entry");
  }
}

double clamped_root(double s, double s2, long k, double t) {
  const double kd = static_cast<double>(k);
  const double disc = s * s - kd * (s2 - t * t);
  return (s - std::sqrt(std::max(disc, 0.0))) / kd;
}

}  // namespace

std::optional<double> solve_k_quadratic(double s, double s2, long k, double t) {
  if (k < 1) throw std::invalid_argument("solve_k_quadratic: k must be >= 1");
  const double kd = static_cast<double>(k);
  double disc = s * s - kd * (s2 - t * t);
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, s * s)) return std::nullopt;
    disc = 0.0;
  }
  return (s - std::sqrt(disc)) / kd;
}

double gamma_residual_norm(std::span<const double> v, double gamma) {
  double acc = 0.0;
  for (double e : v) {
    const double d = e - gamma;
    if (d > 0.0) acc += d * d;
  }
  return std::sqrt(acc);
}

double gamma_sorted(const GammaProblem& p, GammaStats* stats) {
  validate(p);
  std::uint64_t comparisons = 0;
  std::vector<double> v = p.v;
  std::sort(v.begin(), v.end(), [&comparisons](double a, double b) {
    ++comparisons;
    return a > b;
  });
  // Work relative to the largest entry. Active entries then lie in [-t, 0]
  // and the running sums keep their precision when |v| >> t.
  const double top = v[0];
  for (double& e : v) e -= top;
  const long n = static_cast<long>(v.size());
  double s = 0.0;
  double s2 = 0.0;
  for (long k = 1; k <= n; ++k) {
    const double vk = v[static_cast<std::size_t>(k - 1)];
    s += vk;
    s2 += vk * vk;
    const auto gamma = solve_k_quadratic(s, s2, k, p.target);
    if (k == n) {
      if (stats) stats->comparisons += comparisons;
      return top + (gamma ? *gamma : clamped_root(s, s2, k, p.target));
    }
    ++comparisons;
    if (gamma && *gamma >= v[static_cast<std::size_t>(k)]) {
      if (stats) stats->comparisons += comparisons;
      return top + *gamma;
    }
  }
  throw std::logic_error("gamma_sorted: unreachable");
}

double gamma_select(const GammaProblem& p, GammaStats* stats) {
  validate(p);
  std::vector<double> w = p.v;
  std::uint64_t comparisons = 0;
  auto less = [&comparisons](double a, double b) {
    ++comparisons;
    return a < b;
  };
  // Shift by the maximum, as in gamma_sorted.
  double top = w[0];
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (less(top, w[i])) top = w[i];
  }
  for (double& e : w) e -= top;

  // Elements in [lo, hi) are undecided; everything above the window is known
  // to be active and is summarized by (s_fixed, s2_fixed, k_fixed).
  std::size_t lo = 0;
  std::size_t hi = w.size();
  double s_fixed = 0.0;
  double s2_fixed = 0.0;
  long k_fixed = 0;

  const std::size_t n = w.size();
  const std::uint64_t budget =
      2 * static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(n) + 1.0))) + n + 2;

  for (std::uint64_t round = 1; round <= budget; ++round) {
    const std::size_t width = hi - lo;
    const std::size_t lower_count = width / 2;  // |v-|
    const std::size_t mid = lo + lower_count;
    if (lower_count > 0) {
      std::nth_element(w.begin() + static_cast<std::ptrdiff_t>(lo),
                       w.begin() + static_cast<std::ptrdiff_t>(mid),
                       w.begin() + static_cast<std::ptrdiff_t>(hi), less);
    }
    double s = s_fixed;
    double s2 = s2_fixed;
    for (std::size_t i = mid; i < hi; ++i) {
      s += w[i];
      s2 += w[i] * w[i];
    }
    const long k = k_fixed + static_cast<long>(hi - mid);

    if (lower_count == 0) {
      // A single undecided element. It must be active (the true active set
      // always strictly contains the fixed set), so its root is the answer.
      if (stats) {
        stats->comparisons += comparisons;
        stats->rounds += round;
      }
      const auto gamma = solve_k_quadratic(s, s2, k, p.target);
      return top + (gamma ? *gamma : clamped_root(s, s2, k, p.target));
    }
    // nth_element leaves the pivot as the minimum of v+.
    const double upper_min = w[mid];
    const auto gamma = solve_k_quadratic(s, s2, k, p.target);
    if (!gamma || *gamma > upper_min) {
      lo = mid;  // too many active elements: keep only v+
      continue;
    }
    double lower_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < mid; ++i) {
      ++comparisons;
      lower_max = std::max(lower_max, w[i]);
    }
    if (*gamma >= lower_max) {
      if (stats) {
        stats->comparisons += comparisons;
        stats->rounds += round;
      }
      return top + *gamma;
    }
    // Too few active elements: all of v+ is active, recurse into v-.
    hi = mid;
    s_fixed = s;
    s2_fixed = s2;
    k_fixed = k;
  }
  throw std::logic_error("gamma_select: iteration budget exhausted");
}

double gamma_bisect(const GammaProblem& p) {
  validate(p);
  const auto [mn, mx] = std::minmax_element(p.v.begin(), p.v.end());
  double lo = *mn - p.target;
  double hi = *mx;
  // Halve until the bracket has no double strictly inside it. Near 0 that
  // takes up to ~2100 steps.
  for (int it = 0; it < 2200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (gamma_residual_norm(p.v, mid) > p.target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double gamma_solve(const GammaProblem& p, GammaMethod method) {
  switch (method) {
    case GammaMethod::Sorted:
      return gamma_sorted(p);
    case GammaMethod::Select:
      return gamma_select(p);
    case GammaMethod::Bisect:
      return gamma_bisect(p);
  }
  throw std::invalid_argument("gamma_solve: unknown method");
}

}  // namespace rmsolve
