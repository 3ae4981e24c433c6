#include "rmsolve/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rmsolve {

SimplexVector simplex_project(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("simplex_project: empty vector");
  for (double e : y) {
    if (!std::isfinite(e)) throw std::invalid_argument("simplex_project: non-finite entry");
  }
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += sorted[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  SimplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(y[i] - theta, 0.0);
  return x;
}

SimplexVector uniform_best_response(std::span<const double> u) {
  const double best = *std::max_element(u.begin(), u.end());
  std::size_t count = 0;
  for (double e : u) count += e >= best - 1e-12 ? 1 : 0;
  SimplexVector x(u.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= best - 1e-12) x[i] = 1.0 / static_cast<double>(count);
  }
  return x;
}

AdOGD::AdOGD(std::size_t n, AdOGDOptions options)
    : AdOGD(uniform_strategy(n), 0.0, options) {}

AdOGD::AdOGD(SimplexVector x_tilde, double misprediction, AdOGDOptions options)
    : options_(options), x_tilde_(std::move(x_tilde)), P_(misprediction) {
  if (x_tilde_.empty()) throw std::invalid_argument("AdOGD: need at least one action");
  if (!(options_.eta > 0.0)) throw std::invalid_argument("AdOGD: eta must be positive");
  if (!(P_ >= 0.0)) throw std::invalid_argument("AdOGD: misprediction must be nonnegative");
  x_ = x_tilde_;
  m_.assign(x_tilde_.size(), 0.0);
}

double AdOGD::current_eta() const {
  if (P_ <= 0.0) return std::numeric_limits<double>::infinity();
  return options_.eta / std::sqrt(P_);
}

double AdOGD::regret_norm() const { return std::sqrt(P_) / options_.eta; }

SimplexVector AdOGD::next_strategy(std::span<const double> prediction) {
  if (prediction.size() != dimension()) throw std::invalid_argument("AdOGD::next_strategy: dimension mismatch");
  m_.assign(prediction.begin(), prediction.end());
  const double eta = current_eta();
  if (std::isinf(eta)) {
    x_ = uniform_best_response(m_);
    // x~^(1) = x^(1): the run starts at a best response to the first prediction.
    if (iter_ == 0) x_tilde_ = x_;
  } else {
    std::vector<double> y(dimension());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_tilde_[i] + eta * m_[i];
    x_ = simplex_project(y);
  }
  info_ = RoundInfo{};
  info_.regret_norm_before = regret_norm();
  awaiting_observe_ = true;
  return x_;
}

void AdOGD::observe_utility(std::span<const double> utility) {
  if (utility.size() != dimension()) throw std::invalid_argument("AdOGD::observe_utility: dimension mismatch");
  if (!awaiting_observe_) {
    throw std::logic_error("observe_utility called without a preceding next_strategy");
  }
  awaiting_observe_ = false;
  ++iter_;

  const double mis = dist2_sq(utility, m_);
  const double P_next = P_ + mis;
  double eta = current_eta();
  if (std::isinf(eta) && options_.mode == AdOGDMode::Theorem && P_next > 0.0) {
    eta = options_.eta / std::sqrt(P_next);
  }
  if (std::isinf(eta)) {
    x_tilde_ = uniform_best_response(utility);
  } else {
    std::vector<double> y(dimension());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_tilde_[i] + eta * utility[i];
    x_tilde_ = simplex_project(y);
  }
  if (!delta_ && std::sqrt(mis) > 1e-12) delta_ = std::sqrt(mis);
  P_ = P_next;
  info_.instantaneous_sq = mis;
  info_.eta = eta;
}

std::unique_ptr<OnlineLearner> AdOGD::clone() const { return std::make_unique<AdOGD>(*this); }

}  // namespace rmsolve
