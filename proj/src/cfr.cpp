#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rmsolve/efg.hpp"
#include "tracker.hpp"

namespace rmsolve {

namespace {

using detail::TrackedLearner;

/// The local learners of one player.
class TreeSide {
 public:
  TreeSide(const GameTree& tree, const RunConfig& cfg, Player player) : player_(player) {
    const auto& sets = tree.infosets(player);
    for (std::size_t I = 0; I < sets.size(); ++I) {
      learners_.emplace_back(build_learner(cfg, player, I, sets[I].actions));
      if (learners_.back().learner().dimension() != sets[I].actions) {
        throw std::invalid_argument("learner dimension does not match infoset " + sets[I].label);
      }
    }
  }

  BehavioralStrategy extrapolate() {
    BehavioralStrategy s;
    for (auto& l : learners_) s.push_back(l.extrapolate());
    return s;
  }
  BehavioralStrategy play(const std::vector<Vector>& predictions) {
    BehavioralStrategy s;
    for (std::size_t I = 0; I < learners_.size(); ++I) s.push_back(learners_[I].play(predictions[I]));
    return s;
  }
  void observe(const std::vector<Vector>& utilities) {
    for (std::size_t I = 0; I < learners_.size(); ++I) learners_[I].observe(utilities[I]);
  }
  std::vector<Vector> zeros() const {
    std::vector<Vector> z;
    for (const auto& l : learners_) z.emplace_back(l.learner().dimension(), 0.0);
    return z;
  }

  double rms_rnorm() const {
    if (learners_.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& l : learners_) {
      const double r = l.learner().regret_norm();
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(learners_.size()));
  }
  double pathlen() const {
    double acc = 0.0;
    for (const auto& l : learners_) acc += l.pathlen();
    return acc;
  }
  double local_positive_regret() const {
    double acc = 0.0;
    for (const auto& l : learners_) acc += std::max(0.0, l.learner_regret());
    return acc;
  }
  double max_rnorm_drop() const {
    double m = 0.0;
    for (const auto& l : learners_) m = std::max(m, l.max_rnorm_drop());
    return m;
  }
  long strict_decreases() const {
    long c = 0;
    for (const auto& l : learners_) c += l.strict_decreases();
    return c;
  }
  std::size_t size() const { return learners_.size(); }

 private:
  Player player_;
  std::vector<TrackedLearner> learners_;
};

class TreeRun {
 public:
  TreeRun(const GameTree& tree, const RunConfig& cfg)
      : tree_(tree),
        cfg_(cfg),
        x_(tree, cfg, Player::X),
        y_(tree, cfg, Player::Y),
        sum_x_(tree, Player::X),
        sum_y_(tree, Player::Y) {
    if (cfg.iterations < 1) throw std::invalid_argument("RunConfig: iterations must be >= 1");
    checkpoints_ = checkpoint_schedule(cfg.iterations);
    for (long c : checkpoints_) snapshot_at_.push_back(static_cast<long>(last_half_start(c)));
    std::sort(snapshot_at_.begin(), snapshot_at_.end());
    snapshot_at_.erase(std::unique(snapshot_at_.begin(), snapshot_at_.end()), snapshot_at_.end());
    snapshots_.emplace(0, std::make_pair(sum_x_, sum_y_));
    trace_.tree_game = true;
    trace_.summary.min_gap_last = std::numeric_limits<double>::infinity();
  }

  TreeSide& x() { return x_; }
  TreeSide& y() { return y_; }

  /// Counterfactual utilities of `p` at the given profile; one traversal.
  double traverse(Player p, const BehavioralProfile& profile, std::vector<Vector>& out) {
    ++grad_evals_;
    return counterfactual_utilities(tree_, profile, p, out);
  }

  /// value_x: payoff to X of (x^t, y^t). value_y_view: payoff to X of the
  /// profile Y's feedback was computed at.
  void end_round(long t, BehavioralProfile profile, double value_x, double value_y_view) {
    const double gap = efg_nash_gap(tree_, profile);
    if (gap < trace_.summary.min_gap_last) {
      trace_.summary.min_gap_last = gap;
      trace_.summary.argmin_gap_last = t;
    }
    realized_ += value_x;
    realized_y_view_ += value_y_view;
    sum_x_.add(profile.x);
    sum_y_.add(profile.y);
    if (std::binary_search(snapshot_at_.begin(), snapshot_at_.end(), t)) {
      snapshots_.emplace(t, std::make_pair(sum_x_, sum_y_));
    }
    if (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] == t) {
      record(t, gap);
      ++next_checkpoint_;
    }
  }

  Trace finish(CfrAverages* averages) {
    trace_.summary.rnorm_strict_decreases_x = x_.strict_decreases();
    trace_.summary.rnorm_strict_decreases_y = y_.strict_decreases();
    trace_.summary.max_rnorm_drop_x = x_.max_rnorm_drop();
    trace_.summary.max_rnorm_drop_y = y_.max_rnorm_drop();
    if (averages) *averages = last_averages_;
    return std::move(trace_);
  }

 private:
  void record(long t, double gap) {
    const double td = static_cast<double>(t);
    IterationRecord r;
    r.iter = t;
    r.grad_evals = grad_evals_;
    r.gap_last = gap;

    BehavioralProfile avg{sum_x_.average(), sum_y_.average()};
    const double br_x = efg_best_response(tree_, Player::X, avg.y).value;
    const double br_y = efg_best_response(tree_, Player::Y, avg.x).value;
    r.gap_avg_uniform = br_x - br_y;

    const long start = static_cast<long>(last_half_start(static_cast<std::size_t>(t)));
    const auto& snap = snapshots_.at(start);
    BehavioralProfile half{sum_x_.average_since(snap.first), sum_y_.average_since(snap.second)};
    r.gap_avg_lasthalf = efg_nash_gap(tree_, half);

    // Sequence-form regrets: the best fixed strategy against the sum of the
    // opponent's realization plans is a best response to their average.
    r.reg_x = td * br_x - realized_;
    r.reg_y = realized_ - td * br_y;
    r.rnorm_x = x_.rms_rnorm();
    r.rnorm_y = y_.rms_rnorm();
    r.pathlen_x = x_.pathlen();
    r.pathlen_y = y_.pathlen();
    r.best_gap_last = trace_.summary.min_gap_last;
    trace_.records.push_back(r);

    if (cfg_.monitors) {
      MonitorSample sx;
      sx.iter = t;
      sx.player = Player::X;
      sx.actions = x_.size();
      sx.learner_regret = r.reg_x;
      sx.rnorm = r.rnorm_x;
      sx.max_rnorm_drop = x_.max_rnorm_drop();
      sx.has_local_regret = true;
      sx.local_positive_regret = x_.local_positive_regret();
      MonitorSample sy = sx;
      sy.player = Player::Y;
      sy.actions = y_.size();
      sy.learner_regret = realized_y_view_ - td * br_y;
      sy.rnorm = r.rnorm_y;
      sy.max_rnorm_drop = y_.max_rnorm_drop();
      sy.local_positive_regret = y_.local_positive_regret();
      trace_.samples.push_back(sx);
      trace_.samples.push_back(sy);
    }
    if (t == cfg_.iterations) last_averages_ = {avg, half};
  }

  const GameTree& tree_;
  const RunConfig& cfg_;
  TreeSide x_;
  TreeSide y_;
  RealizationSum sum_x_;
  RealizationSum sum_y_;
  long grad_evals_ = 0;
  std::vector<long> checkpoints_;
  std::size_t next_checkpoint_ = 0;
  std::vector<long> snapshot_at_;
  std::map<long, std::pair<RealizationSum, RealizationSum>> snapshots_;
  double realized_ = 0.0;
  double realized_y_view_ = 0.0;
  CfrAverages last_averages_;
  Trace trace_;
};

}  // namespace

Trace run_cfr(const GameTree& tree, const RunConfig& cfg) { return run_cfr(tree, cfg, nullptr); }

Trace run_cfr(const GameTree& tree, const RunConfig& cfg, CfrAverages* averages) {
  TreeRun run(tree, cfg);
  std::vector<Vector> ux = run.x().zeros();
  std::vector<Vector> uy = run.y().zeros();
  switch (cfg.setup) {
    case Setup::Simultaneous:
      for (long t = 1; t <= cfg.iterations; ++t) {
        BehavioralProfile p{run.x().play(ux), run.y().play(uy)};
        const double v = run.traverse(Player::X, p, ux);
        run.traverse(Player::Y, p, uy);
        run.x().observe(ux);
        run.y().observe(uy);
        run.end_round(t, std::move(p), v, v);
      }
      break;
    case Setup::Alternating: {
      BehavioralStrategy y_prev = run.y().play(uy);
      for (long t = 1; t <= cfg.iterations; ++t) {
        BehavioralProfile p{run.x().play(ux), std::move(y_prev)};
        const double vy = run.traverse(Player::Y, p, uy);
        run.y().observe(uy);
        p.y = run.y().play(uy);
        const double vx = run.traverse(Player::X, p, ux);
        run.x().observe(ux);
        y_prev = p.y;
        run.end_round(t, std::move(p), vx, vy);
      }
      break;
    }
    case Setup::Extragradient: {
      std::vector<Vector> mx, my;
      for (long t = 1; t <= cfg.iterations; ++t) {
        const BehavioralProfile half{run.x().extrapolate(), run.y().extrapolate()};
        run.traverse(Player::X, half, mx);
        run.traverse(Player::Y, half, my);
        BehavioralProfile p{run.x().play(mx), run.y().play(my)};
        const double v = run.traverse(Player::X, p, ux);
        run.traverse(Player::Y, p, uy);
        run.x().observe(ux);
        run.y().observe(uy);
        run.end_round(t, std::move(p), v, v);
      }
      break;
    }
  }
  return run.finish(averages);
}

}  // namespace rmsolve
