#pragma once

#include <optional>

#include "rmsolve/learner.hpp"

namespace rmsolve {

/// Euclidean projection onto the probability simplex (sort and threshold).
SimplexVector simplex_project(std::span<const double> y);

/// Best response to `u` with ties (within 1e-12 of the max) spread uniformly.
SimplexVector uniform_best_response(std::span<const double> u);

enum class AdOGDMode {
  /// First step size is +infinity, i.e. the first proximal step is a best
  /// response. Scale invariant.
  ScaleInvariant,
  /// The first finite step size is pinned to the second one.
  Theorem,
};

struct AdOGDOptions {
  double eta = 1.0;
  AdOGDMode mode = AdOGDMode::ScaleInvariant;
};

/// Optimistic projected gradient ascent on the simplex with step size
/// eta / sqrt(P), where P is the accumulated squared misprediction
/// sum_{tau < t} ||u - m||^2 of strictly past rounds.
class AdOGD final : public OnlineLearner {
 public:
  explicit AdOGD(std::size_t n, AdOGDOptions options = {});
  /// Resume from an explicit proximal center and accumulated misprediction.
  AdOGD(SimplexVector x_tilde, double misprediction, AdOGDOptions options);

  std::size_t dimension() const override { return x_tilde_.size(); }
  SimplexVector next_strategy(std::span<const double> prediction) override;
  void observe_utility(std::span<const double> utility) override;
  SimplexVector extrapolation_strategy() override { return x_tilde_; }
  const SimplexVector& prox_center() const override { return x_tilde_; }
  double regret_norm() const override;
  RoundInfo last_round() const override { return info_; }
  std::string name() const override { return "AdOGD"; }
  std::unique_ptr<OnlineLearner> clone() const override;

  /// eta / sqrt(P); +infinity while P = 0.
  double current_eta() const;
  double accumulated_misprediction() const { return P_; }
  /// First nonzero misprediction norm, once one has occurred.
  std::optional<double> delta() const { return delta_; }
  const SimplexVector& strategy() const { return x_; }
  const AdOGDOptions& options() const { return options_; }
  long iteration() const { return iter_; }

 private:
  AdOGDOptions options_;
  SimplexVector x_tilde_;
  SimplexVector x_;
  std::vector<double> m_;
  double P_ = 0.0;
  std::optional<double> delta_;
  long iter_ = 0;
  bool awaiting_observe_ = false;
  RoundInfo info_;
};

}  // namespace rmsolve
