#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>

#include "rmsolve/core.hpp"

namespace rmsolve {

/// Per-round quantities that the regret-bound monitors need. Filled in by a
/// learner during next_strategy / observe_utility of the most recent round.
struct RoundInfo {
  /// ||[r~^(t)]_+||_2 when the strategy was chosen (regret matchers).
  double regret_norm_before = 0.0;
  /// ||g^(t)||_2^2 for regret matchers, ||u^(t) - m^(t)||_2^2 for AdOGD.
  double instantaneous_sq = 0.0;
  /// Step size used in the proximal update of this round (AdOGD only).
  double eta = std::numeric_limits<double>::infinity();
};

/// Optimistic online learner over a probability simplex.
///
/// Each round is next_strategy(prediction) followed by exactly one
/// observe_utility(utility). next_strategy may be called more than once in a
/// round (the extragradient setup does); the last call wins.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  virtual std::size_t dimension() const = 0;
  virtual SimplexVector next_strategy(std::span<const double> prediction) = 0;
  virtual void observe_utility(std::span<const double> utility) = 0;

  /// The half-step strategy of the extragradient setup ("NextStrategy(0)").
  virtual SimplexVector extrapolation_strategy() = 0;
  /// Current proximal center x~.
  virtual const SimplexVector& prox_center() const = 0;
  /// l2 norm of the positive regret vector, or 1/eta for gradient learners.
  virtual double regret_norm() const = 0;
  virtual RoundInfo last_round() const = 0;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<OnlineLearner> clone() const = 0;
};

/// Plays the same strategy every round and ignores feedback. Used as a frozen
/// opponent.
class FixedStrategyLearner final : public OnlineLearner {
 public:
  explicit FixedStrategyLearner(SimplexVector x) : x_(std::move(x)) {}
  std::size_t dimension() const override { return x_.size(); }
  SimplexVector next_strategy(std::span<const double>) override { return x_; }
  void observe_utility(std::span<const double>) override {}
  SimplexVector extrapolation_strategy() override { return x_; }
  const SimplexVector& prox_center() const override { return x_; }
  double regret_norm() const override { return 0.0; }
  RoundInfo last_round() const override { return {}; }
  std::string name() const override { return "fixed"; }
  std::unique_ptr<OnlineLearner> clone() const override {
    return std::make_unique<FixedStrategyLearner>(*this);
  }

 private:
  SimplexVector x_;
};

}  // namespace rmsolve
