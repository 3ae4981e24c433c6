#pragma once

// Per-learner bookkeeping shared by the matrix and tree drivers.

#include <memory>
#include <vector>

#include "rmsolve/driver.hpp"

namespace rmsolve::detail {

class TrackedLearner {
 public:
  explicit TrackedLearner(std::unique_ptr<OnlineLearner> learner);

  SimplexVector extrapolate() { return learner_->extrapolation_strategy(); }
  const SimplexVector& play(std::span<const double> prediction);
  void observe(std::span<const double> utility);

  OnlineLearner& learner() { return *learner_; }
  const OnlineLearner& learner() const { return *learner_; }
  const SimplexVector& played() const { return played_; }

  double learner_regret() const;
  double pathlen() const { return pathlen_; }
  double max_rnorm_drop() const { return max_drop_; }
  long strict_decreases() const { return strict_decreases_; }
  MonitorSample sample(long iter, Player player) const;

 private:
  std::unique_ptr<OnlineLearner> learner_;
  bool is_gradient_ = false;
  SimplexVector played_;
  SimplexVector center_before_;
  std::vector<double> prediction_;

  std::vector<double> cum_utility_;
  double realized_ = 0.0;
  double pathlen_ = 0.0;
  double prev_rnorm_ = 0.0;
  double max_drop_ = 0.0;
  long strict_decreases_ = 0;

  double initial_norm_sq_ = 0.0;
  double sum_g_sq_ = 0.0;
  double ir_movement_ = 0.0;

  bool adogd_active_ = false;
  std::vector<double> cum_utility_active_;
  double realized_active_ = 0.0;
  double last_eta_ = 0.0;
  double sum_eta_mis_ = 0.0;
  double sum_path_over_2eta_ = 0.0;
  double sum_mis_ = 0.0;
  double sum_path_ = 0.0;
  double delta_ = 0.0;
  double max_vector_norm_ = 0.0;
};

}  // namespace rmsolve::detail
