#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmsolve/gamma.hpp"
#include "rmsolve/learner.hpp"

namespace rmsolve {

enum class MatcherFlavor { RM, RMPlus, PRMPlus, DCFR, IRPRM, IRPRMPlus };

std::string to_string(MatcherFlavor flavor);
bool is_plus_flavor(MatcherFlavor flavor);
bool is_increasing_regret_flavor(MatcherFlavor flavor);

/// Discounted regret matching. Positive regrets are scaled by
/// t^alpha / (t^alpha + 1), negative ones by t^beta / (t^beta + 1), and the
/// contribution of x^(t) to the average strategy is proportional to
/// t^avg_exponent. `discount = false` turns both regret discounts into 1.
struct DcfrParams {
  double alpha = 1.5;
  double beta = 0.0;
  double avg_exponent = 2.0;
  bool discount = true;
};

double dcfr_positive_discount(const DcfrParams& p, long t);
double dcfr_negative_discount(const DcfrParams& p, long t);

struct MatcherOptions {
  GammaMethod gamma_method = GammaMethod::Select;
  /// IR-PRM only: accumulate r + [g]_+ instead of r + g.
  bool ir_truncate_g = false;
  DcfrParams dcfr;
};

/// The regret-matching family as an online learner.
///
/// RM / RM+ / DCFR ignore predictions. PRM+ plays proportionally to
/// [r~ + m - <m, w> 1]_+ with w the strategy induced by r~, and accumulates
/// the plain instantaneous regret. IR-PRM / IR-PRM+ shift r~ + m by gamma 1
/// so that the positive part keeps the l2 norm of [r~]_+; the regret norm is
/// therefore nondecreasing across rounds.
class RegretMatcher final : public OnlineLearner {
 public:
  RegretMatcher(MatcherFlavor flavor, std::size_t n, MatcherOptions options = {});
  /// Nonzero initial regret vector r~^(1). Must be nonnegative for + flavors.
  RegretMatcher(MatcherFlavor flavor, std::vector<double> initial_regret,
                MatcherOptions options = {});

  std::size_t dimension() const override { return r_tilde_.size(); }
  SimplexVector next_strategy(std::span<const double> prediction) override;
  void observe_utility(std::span<const double> utility) override;
  SimplexVector extrapolation_strategy() override;
  const SimplexVector& prox_center() const override { return x_tilde_; }
  double regret_norm() const override;
  RoundInfo last_round() const override { return info_; }
  std::string name() const override { return to_string(flavor_); }
  std::unique_ptr<OnlineLearner> clone() const override;

  MatcherFlavor flavor() const { return flavor_; }
  const std::vector<double>& r_tilde() const { return r_tilde_; }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& prediction() const { return m_; }
  const SimplexVector& strategy() const { return x_; }
  const std::vector<double>& last_g() const { return g_; }
  std::optional<double> last_gamma() const { return gamma_; }
  long iteration() const { return iter_; }
  /// DCFR's weighted average strategy (uniform weights for other flavors).
  SimplexVector weighted_average() const;

 private:
  MatcherFlavor flavor_;
  MatcherOptions options_;
  std::vector<double> r_tilde_;
  std::vector<double> r_;
  std::vector<double> m_;
  std::vector<double> g_;
  SimplexVector x_;
  SimplexVector x_tilde_;
  std::optional<double> gamma_;
  std::vector<double> avg_sum_;
  double avg_weight_ = 0.0;
  long iter_ = 0;
  bool awaiting_observe_ = false;
  RoundInfo info_;
};

}  // namespace rmsolve
