#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rmsolve/core.hpp"
#include "rmsolve/gradient.hpp"
#include "rmsolve/matchers.hpp"

namespace rmsolve {

enum class Setup { Simultaneous, Alternating, Extragradient };
enum class Averaging { Uniform, LastHalf, Both };

std::string to_string(Setup setup);

/// Which learner a player runs.
struct LearnerSpec {
  enum class Kind { Matcher, Gradient };
  Kind kind = Kind::Matcher;
  MatcherFlavor flavor = MatcherFlavor::IRPRMPlus;
  MatcherOptions matcher;
  AdOGDOptions adogd;

  static LearnerSpec regret_matching(MatcherFlavor flavor, MatcherOptions options = {});
  static LearnerSpec gradient(AdOGDOptions options = {});
  std::string name() const;
};

std::unique_ptr<OnlineLearner> make_learner(const LearnerSpec& spec, std::size_t n);

struct RunConfig {
  LearnerSpec x_learner;
  LearnerSpec y_learner;
  Setup setup = Setup::Simultaneous;
  long iterations = 1000;
  std::uint64_t seed = 0;
  Averaging averaging = Averaging::Both;
  bool monitors = true;
  /// Optional override of the learner construction. Called once per decision
  /// point of `player` (a matrix game has one, index 0). Learner-specific
  /// monitors are skipped when it is set.
  std::function<std::unique_ptr<OnlineLearner>(Player player, std::size_t point,
                                               std::size_t actions)>
      learner_factory;
};

std::unique_ptr<OnlineLearner> build_learner(const RunConfig& cfg, Player player,
                                             std::size_t point, std::size_t actions);

/// Metrics at one checkpoint. Regrets are those of the played profile
/// sequence (x^t, y^t); gaps are duality gaps (Nash gaps for trees).
struct IterationRecord {
  long iter = 0;
  long grad_evals = 0;
  double gap_last = 0.0;
  double gap_avg_uniform = 0.0;
  double gap_avg_lasthalf = 0.0;
  double reg_x = 0.0;
  double reg_y = 0.0;
  double rnorm_x = 0.0;
  double rnorm_y = 0.0;
  double pathlen_x = 0.0;
  double pathlen_y = 0.0;
  /// min_{s <= iter} gap_last over every round, not only checkpoints.
  double best_gap_last = 0.0;
};

/// Per-player inputs of the regret-bound monitors at one checkpoint. All
/// regrets here are from the learner's own point of view: the strategies it
/// played paired with the utilities it observed.
struct MonitorSample {
  long iter = 0;
  Player player = Player::X;
  std::size_t actions = 0;
  double learner_regret = 0.0;
  double rnorm = 0.0;
  double max_rnorm_drop = 0.0;

  // Regret matchers.
  double initial_norm_sq = 0.0;
  double sum_g_sq = 0.0;
  double ir_movement_term = 0.0;  // sum_t ||[r~^t]_+|| ||x^t - x~^t||^2

  // AdOGD, accumulated from the first round with nonzero misprediction on.
  bool adogd_active = false;
  double adogd_regret = 0.0;
  double eta_base = 1.0;
  double last_eta = 0.0;
  double sum_eta_mis = 0.0;
  double sum_path_over_2eta = 0.0;
  double sum_mis = 0.0;
  double sum_path = 0.0;
  double delta = 0.0;
  double spread_bound = 0.0;

  // CFR: sum over this player's information sets of positive local regret.
  bool has_local_regret = false;
  double local_positive_regret = 0.0;
};

struct RunSummary {
  double min_gap_last = 0.0;
  long argmin_gap_last = 0;
  long rnorm_strict_decreases_x = 0;
  long rnorm_strict_decreases_y = 0;
  double max_rnorm_drop_x = 0.0;
  double max_rnorm_drop_y = 0.0;
};

struct MonitorEntry {
  std::string monitor;
  Player player = Player::X;
  long iter = 0;
  double slack = 0.0;
  bool pass = true;
};

struct MonitorReport {
  std::vector<MonitorEntry> entries;
  bool all_pass() const;
  /// Smallest slack of a named monitor (+inf if the monitor never ran).
  double worst_slack(const std::string& monitor) const;
  std::size_t count(const std::string& monitor) const;
};

struct Trace {
  std::vector<IterationRecord> records;
  std::vector<MonitorSample> samples;
  RunSummary summary;
  bool tree_game = false;
};

/// Every t <= 100, then geometrically spaced (ratio 1.1), always including T.
std::vector<long> checkpoint_schedule(long T);

Trace run_simultaneous(const NormalFormGame& game, const RunConfig& cfg);
Trace run_alternating(const NormalFormGame& game, const RunConfig& cfg);
Trace run_extragradient(const NormalFormGame& game, const RunConfig& cfg);
Trace run_self_play(const NormalFormGame& game, const RunConfig& cfg);

/// Evaluates the average-gap identity, nonnegative regret sum, regret-norm
/// monotonicity and bounds, and the RVU-type bounds that apply to the
/// configured learners, at every checkpoint.
MonitorReport monitor_suite(const Trace& trace, const RunConfig& cfg);

/// Running minimum (reporting transform); the output is nonincreasing.
std::vector<double> lower_frontier(const std::vector<double>& series);

/// Least-squares slope of log(y) against log(x) over points with
/// lo <= x <= hi and y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo,
                    double hi);

}  // namespace rmsolve
