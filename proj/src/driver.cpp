#include "rmsolve/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "tracker.hpp"

namespace rmsolve {

std::string to_string(Setup setup) {
  switch (setup) {
    case Setup::Simultaneous: return "sim";
    case Setup::Alternating: return "alt";
    case Setup::Extragradient: return "eg";
  }
  return "?";
}

LearnerSpec LearnerSpec::regret_matching(MatcherFlavor flavor, MatcherOptions options) {
  LearnerSpec s;
  s.kind = Kind::Matcher;
  s.flavor = flavor;
  s.matcher = options;
  return s;
}

LearnerSpec LearnerSpec::gradient(AdOGDOptions options) {
  LearnerSpec s;
  s.kind = Kind::Gradient;
  s.adogd = options;
  return s;
}

std::string LearnerSpec::name() const {
  return kind == Kind::Gradient ? std::string("AdOGD") : to_string(flavor);
}

std::unique_ptr<OnlineLearner> make_learner(const LearnerSpec& spec, std::size_t n) {
  if (spec.kind == LearnerSpec::Kind::Gradient) return std::make_unique<AdOGD>(n, spec.adogd);
  return std::make_unique<RegretMatcher>(spec.flavor, n, spec.matcher);
}

std::unique_ptr<OnlineLearner> build_learner(const RunConfig& cfg, Player player,
                                             std::size_t point, std::size_t actions) {
  if (cfg.learner_factory) return cfg.learner_factory(player, point, actions);
  return make_learner(player == Player::X ? cfg.x_learner : cfg.y_learner, actions);
}

namespace detail {

TrackedLearner::TrackedLearner(std::unique_ptr<OnlineLearner> learner)
    : learner_(std::move(learner)) {
  is_gradient_ = dynamic_cast<const AdOGD*>(learner_.get()) != nullptr;
  const std::size_t n = learner_->dimension();
  cum_utility_.assign(n, 0.0);
  cum_utility_active_.assign(n, 0.0);
  prev_rnorm_ = learner_->regret_norm();
  if (!is_gradient_) {
    if (const auto* rm = dynamic_cast<const RegretMatcher*>(learner_.get())) {
      initial_norm_sq_ = norm2_sq(rm->r_tilde());
    }
  }
}

const SimplexVector& TrackedLearner::play(std::span<const double> prediction) {
  played_ = learner_->next_strategy(prediction);
  center_before_ = learner_->prox_center();
  prediction_.assign(prediction.begin(), prediction.end());
  return played_;
}

void TrackedLearner::observe(std::span<const double> utility) {
  learner_->observe_utility(utility);
  const SimplexVector& center_after = learner_->prox_center();
  const RoundInfo info = learner_->last_round();

  const double inner = dot(played_, utility);
  realized_ += inner;
  for (std::size_t i = 0; i < cum_utility_.size(); ++i) cum_utility_[i] += utility[i];

  const double move_before = dist2_sq(played_, center_before_);
  const double move_after = dist2_sq(played_, center_after);
  pathlen_ += move_before + move_after;

  if (is_gradient_) {
    const double mis = info.instantaneous_sq;
    if (!adogd_active_ && std::sqrt(mis) > 1e-12) {
      adogd_active_ = true;
      delta_ = std::sqrt(mis);
    }
    if (adogd_active_) {
      realized_active_ += inner;
      for (std::size_t i = 0; i < cum_utility_active_.size(); ++i) cum_utility_active_[i] += utility[i];
      sum_mis_ += mis;
      sum_path_ += move_before + move_after;
      if (std::isfinite(info.eta)) {
        sum_eta_mis_ += info.eta * mis;
        sum_path_over_2eta_ += (move_before + move_after) / (2.0 * info.eta);
      } else {
        sum_eta_mis_ = std::numeric_limits<double>::infinity();
      }
      last_eta_ = info.eta;
      max_vector_norm_ = std::max({max_vector_norm_, norm2(utility), norm2(prediction_)});
    }
  } else {
    sum_g_sq_ += info.instantaneous_sq;
    ir_movement_ += info.regret_norm_before * move_before;
  }

  const double rn = learner_->regret_norm();
  if (rn < prev_rnorm_) ++strict_decreases_;
  max_drop_ = std::max(max_drop_, prev_rnorm_ - rn);
  prev_rnorm_ = rn;
}

double TrackedLearner::learner_regret() const {
  return *std::max_element(cum_utility_.begin(), cum_utility_.end()) - realized_;
}

MonitorSample TrackedLearner::sample(long iter, Player player) const {
  MonitorSample s;
  s.iter = iter;
  s.player = player;
  s.actions = learner_->dimension();
  s.learner_regret = learner_regret();
  s.rnorm = learner_->regret_norm();
  s.max_rnorm_drop = max_drop_;
  s.initial_norm_sq = initial_norm_sq_;
  s.sum_g_sq = sum_g_sq_;
  s.ir_movement_term = ir_movement_;
  if (is_gradient_) {
    const auto& g = static_cast<const AdOGD&>(*learner_);
    s.adogd_active = adogd_active_;
    s.eta_base = g.options().eta;
    if (adogd_active_) {
      s.adogd_regret = *std::max_element(cum_utility_active_.begin(), cum_utility_active_.end()) -
                       realized_active_;
      s.last_eta = last_eta_;
      s.sum_eta_mis = sum_eta_mis_;
      s.sum_path_over_2eta = sum_path_over_2eta_;
      s.sum_mis = sum_mis_;
      s.sum_path = sum_path_;
      s.delta = delta_;
      // ||a - b|| <= ||a|| + ||b|| over all observed utilities, predictions and 0.
      s.spread_bound = 2.0 * max_vector_norm_;
    }
  }
  return s;
}

}  // namespace detail

std::vector<long> checkpoint_schedule(long T) {
  if (T < 1) throw std::invalid_argument("checkpoint_schedule: T must be >= 1");
  std::vector<long> out;
  for (long t = 1; t <= std::min<long>(T, 100); ++t) out.push_back(t);
  double next = 100.0;
  while (true) {
    next *= 1.1;
    const long t = static_cast<long>(std::ceil(next));
    if (t >= T) break;
    if (t > out.back()) out.push_back(t);
  }
  if (out.back() != T) out.push_back(T);
  return out;
}

namespace {

using detail::TrackedLearner;

/// Shared per-round bookkeeping for the matrix-game drivers.
class MatrixRun {
 public:
  MatrixRun(const NormalFormGame& game, const RunConfig& cfg)
      : game_(game),
        cfg_(cfg),
        x_(build_learner(cfg, Player::X, 0, game.rows())),
        y_(build_learner(cfg, Player::Y, 0, game.cols())) {
    if (cfg.iterations < 1) throw std::invalid_argument("RunConfig: iterations must be >= 1");
    if (x_.learner().dimension() != game.rows() || y_.learner().dimension() != game.cols()) {
      throw std::invalid_argument("learner dimension does not match the game");
    }
    checkpoints_ = checkpoint_schedule(cfg.iterations);
    for (long c : checkpoints_) snapshot_at_.push_back(static_cast<long>(last_half_start(c)));
    std::sort(snapshot_at_.begin(), snapshot_at_.end());
    snapshot_at_.erase(std::unique(snapshot_at_.begin(), snapshot_at_.end()), snapshot_at_.end());
    sum_x_.assign(game.rows(), 0.0);
    sum_y_.assign(game.cols(), 0.0);
    cum_ux_.assign(game.rows(), 0.0);
    cum_uy_.assign(game.cols(), 0.0);
    snapshots_[0] = {sum_x_, sum_y_};
    trace_.summary.min_gap_last = std::numeric_limits<double>::infinity();
  }

  TrackedLearner& x() { return x_; }
  TrackedLearner& y() { return y_; }
  Vector gradient_x(std::span<const double> y) {
    ++grad_evals_;
    return game_.apply(y);
  }
  Vector gradient_y(std::span<const double> x) {
    ++grad_evals_;
    Vector g = game_.apply_transpose(x);
    for (double& e : g) e = -e;
    return g;
  }

  /// Record the played profile (x^t, y^t) with u_x = A y^t and u_y = -A^T x^t.
  void end_round(long t, const SimplexVector& xs, const SimplexVector& ys, const Vector& ux,
                 const Vector& uy) {
    const double gap = *std::max_element(ux.begin(), ux.end()) +
                       *std::max_element(uy.begin(), uy.end());
    if (gap < trace_.summary.min_gap_last) {
      trace_.summary.min_gap_last = gap;
      trace_.summary.argmin_gap_last = t;
    }
    realized_x_ += dot(xs, ux);
    realized_y_ += dot(ys, uy);
    for (std::size_t i = 0; i < ux.size(); ++i) cum_ux_[i] += ux[i];
    for (std::size_t j = 0; j < uy.size(); ++j) cum_uy_[j] += uy[j];
    for (std::size_t i = 0; i < xs.size(); ++i) sum_x_[i] += xs[i];
    for (std::size_t j = 0; j < ys.size(); ++j) sum_y_[j] += ys[j];
    if (std::binary_search(snapshot_at_.begin(), snapshot_at_.end(), t)) {
      snapshots_[t] = {sum_x_, sum_y_};
    }
    if (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] == t) {
      record(t, gap);
      ++next_checkpoint_;
    }
  }

  Trace finish() {
    trace_.summary.rnorm_strict_decreases_x = x_.strict_decreases();
    trace_.summary.rnorm_strict_decreases_y = y_.strict_decreases();
    trace_.summary.max_rnorm_drop_x = x_.max_rnorm_drop();
    trace_.summary.max_rnorm_drop_y = y_.max_rnorm_drop();
    return std::move(trace_);
  }

 private:
  void record(long t, double gap) {
    const double td = static_cast<double>(t);
    IterationRecord r;
    r.iter = t;
    r.grad_evals = grad_evals_;
    r.gap_last = gap;
    Vector xbar = sum_x_;
    Vector ybar = sum_y_;
    for (double& e : xbar) e /= td;
    for (double& e : ybar) e /= td;
    r.gap_avg_uniform = duality_gap(game_, xbar, ybar);

    const long start = static_cast<long>(last_half_start(static_cast<std::size_t>(t)));
    const auto& snap = snapshots_.at(start);
    const double width = static_cast<double>(t - start);
    for (std::size_t i = 0; i < xbar.size(); ++i) xbar[i] = (sum_x_[i] - snap.first[i]) / width;
    for (std::size_t j = 0; j < ybar.size(); ++j) ybar[j] = (sum_y_[j] - snap.second[j]) / width;
    r.gap_avg_lasthalf = duality_gap(game_, xbar, ybar);

    r.reg_x = *std::max_element(cum_ux_.begin(), cum_ux_.end()) - realized_x_;
    r.reg_y = *std::max_element(cum_uy_.begin(), cum_uy_.end()) - realized_y_;
    r.rnorm_x = x_.learner().regret_norm();
    r.rnorm_y = y_.learner().regret_norm();
    r.pathlen_x = x_.pathlen();
    r.pathlen_y = y_.pathlen();
    r.best_gap_last = trace_.summary.min_gap_last;
    trace_.records.push_back(r);
    if (cfg_.monitors) {
      trace_.samples.push_back(x_.sample(t, Player::X));
      trace_.samples.push_back(y_.sample(t, Player::Y));
    }
    (void)gap;
  }

  const NormalFormGame& game_;
  const RunConfig& cfg_;
  TrackedLearner x_;
  TrackedLearner y_;
  long grad_evals_ = 0;
  std::vector<long> checkpoints_;
  std::size_t next_checkpoint_ = 0;
  std::vector<long> snapshot_at_;
  std::map<long, std::pair<Vector, Vector>> snapshots_;
  Vector sum_x_, sum_y_;
  Vector cum_ux_, cum_uy_;
  double realized_x_ = 0.0;
  double realized_y_ = 0.0;
  Trace trace_;
};

}  // namespace

Trace run_simultaneous(const NormalFormGame& game, const RunConfig& cfg) {
  MatrixRun run(game, cfg);
  Vector ux(game.rows(), 0.0);
  Vector uy(game.cols(), 0.0);
  for (long t = 1; t <= cfg.iterations; ++t) {
    const SimplexVector xs = run.x().play(ux);
    const SimplexVector ys = run.y().play(uy);
    ux = run.gradient_x(ys);
    uy = run.gradient_y(xs);
    run.x().observe(ux);
    run.y().observe(uy);
    run.end_round(t, xs, ys, ux, uy);
  }
  return run.finish();
}

Trace run_alternating(const NormalFormGame& game, const RunConfig& cfg) {
  MatrixRun run(game, cfg);
  Vector ux(game.rows(), 0.0);
  // Y's observation at round t refers to the strategy it committed to at the
  // end of round t - 1, so it needs an initial strategy (initial prediction 0).
  run.y().play(Vector(game.cols(), 0.0));
  for (long t = 1; t <= cfg.iterations; ++t) {
    const SimplexVector xs = run.x().play(ux);
    const Vector uy = run.gradient_y(xs);
    run.y().observe(uy);
    const SimplexVector ys = run.y().play(uy);
    ux = run.gradient_x(ys);
    run.x().observe(ux);
    run.end_round(t, xs, ys, ux, uy);
  }
  return run.finish();
}

Trace run_extragradient(const NormalFormGame& game, const RunConfig& cfg) {
  MatrixRun run(game, cfg);
  for (long t = 1; t <= cfg.iterations; ++t) {
    const SimplexVector x_half = run.x().extrapolate();
    const SimplexVector y_half = run.y().extrapolate();
    const Vector mx = run.gradient_x(y_half);
    const Vector my = run.gradient_y(x_half);
    const SimplexVector xs = run.x().play(mx);
    const SimplexVector ys = run.y().play(my);
    const Vector ux = run.gradient_x(ys);
    const Vector uy = run.gradient_y(xs);
    run.x().observe(ux);
    run.y().observe(uy);
    run.end_round(t, xs, ys, ux, uy);
  }
  return run.finish();
}

Trace run_self_play(const NormalFormGame& game, const RunConfig& cfg) {
  switch (cfg.setup) {
    case Setup::Simultaneous: return run_simultaneous(game, cfg);
    case Setup::Alternating: return run_alternating(game, cfg);
    case Setup::Extragradient: return run_extragradient(game, cfg);
  }
  throw std::invalid_argument("unknown setup");
}

std::vector<double> lower_frontier(const std::vector<double>& series) {
  std::vector<double> out(series.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.size(); ++i) {
    best = std::min(best, series[i]);
    out[i] = best;
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo,
                    double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] < lo || x[i] > hi || !(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double nd = static_cast<double>(n);
  const double denom = nd * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (nd * sxy - sx * sy) / denom;
}

}  // namespace rmsolve
