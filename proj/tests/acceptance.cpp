// Acceptance suite. Prints one PASS/FAIL line per criterion (1-12), with
// indented detail lines underneath, and exits nonzero if any criterion fails.
// Reference values are computed here, independently of the library code
// under test, wherever that is practical.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kuhn_oracle.hpp"
#include "rmsolve/core.hpp"
#include "rmsolve/driver.hpp"
#include "rmsolve/efg.hpp"
#include "rmsolve/gamma.hpp"
#include "rmsolve/gradient.hpp"
#include "rmsolve/matchers.hpp"
#include "rmsolve/random.hpp"
#include "rmsolve/verify.hpp"

using namespace rmsolve;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v, double secs) {
  std::printf("[%s] criterion %2d: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), secs);
  for (const auto& d : v.details) std::printf("        %s\n", d.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

// ---- small reference helpers (deliberately not the library's) ----

double pos_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e > 0.0 ? e * e : 0.0;
  return std::sqrt(s);
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> strategy_of(const std::vector<double>& r) {
  std::vector<double> x(r.size());
  double s = 0.0;
  for (double e : r) s += std::max(e, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) x[i] = s > 0.0 ? std::max(r[i], 0.0) / s : 1.0 / r.size();
  return x;
}

// X's utility A y and Y's utility -A^T x.
std::vector<double> util_x(const NormalFormGame& g, const std::vector<double>& y) {
  std::vector<double> u(g.rows(), 0.0);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) u[i] += g.at(i, j) * y[j];
  return u;
}
std::vector<double> util_y(const NormalFormGame& g, const std::vector<double>& x) {
  std::vector<double> u(g.cols(), 0.0);
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i) u[j] -= g.at(i, j) * x[i];
  return u;
}

double gap_ref(const NormalFormGame& g, const std::vector<double>& x, const std::vector<double>& y) {
  const auto ux = util_x(g, y), uy = util_y(g, x);
  return *std::max_element(ux.begin(), ux.end()) + *std::max_element(uy.begin(), uy.end());
}

double slope_ref(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Wraps a learner and records, per round, what it played and saw, plus the
// running quantities of the regret-matching bounds when the inner learner is
// a regret matcher.
struct ProbeLog {
  bool keep_history = false;
  std::vector<std::vector<double>> plays;  // every next_strategy output
  std::vector<std::vector<double>> utils;  // every observed utility
  long rounds = 0;
  // learner's own regret, per round
  std::vector<double> cum_u;
  double cum_xu = 0.0;
  // regret matchers
  bool matcher = false;
  double init_sq = 0.0;
  double sum_g_sq = 0.0;
  double movement = 0.0;
  double worst_ir_slack = std::numeric_limits<double>::infinity();
  double max_norm_drop = -std::numeric_limits<double>::infinity();
  long strict_decreases = 0;
};

class Probe final : public OnlineLearner {
 public:
  Probe(std::unique_ptr<OnlineLearner> inner, std::shared_ptr<ProbeLog> log, bool ir_bound)
      : inner_(std::move(inner)), log_(std::move(log)), ir_bound_(ir_bound) {
    rm_ = dynamic_cast<RegretMatcher*>(inner_.get());
    log_->matcher = rm_ != nullptr;
    if (rm_) log_->init_sq = [&] {
        double s = 0.0;
        for (double e : rm_->r_tilde()) s += e * e;
        return s;
      }();
    log_->cum_u.assign(inner_->dimension(), 0.0);
  }
  std::size_t dimension() const override { return inner_->dimension(); }
  SimplexVector next_strategy(std::span<const double> m) override {
    m_.assign(m.begin(), m.end());
    x_ = inner_->next_strategy(m);
    if (log_->keep_history) log_->plays.push_back(x_);
    return x_;
  }
  void observe_utility(std::span<const double> u_span) override {
    const std::vector<double> u(u_span.begin(), u_span.end());
    const std::size_t n = u.size();
    ProbeLog& L = *log_;
    double before = 0.0;
    if (rm_) {
      const std::vector<double> rt = rm_->r_tilde();
      before = pos_norm(rt);
      const auto xt = strategy_of(rt);
      // With no positive regret the shift target is 0 and the learner plays
      // x~ whatever the prediction; the round then counts as m = 0.
      const bool idle = before == 0.0;
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = u[i] - (idle ? 0.0 : m_[i]);
      const double mean = inner(g, x_);
      for (double& e : g) e -= mean;
      L.sum_g_sq += inner(g, g);
      L.movement += before * sq_dist(x_, xt);
    }
    inner_->observe_utility(u_span);
    ++L.rounds;
    for (std::size_t i = 0; i < n; ++i) L.cum_u[i] += u[i];
    L.cum_xu += inner(x_, u);
    if (L.keep_history) L.utils.push_back(u);
    if (rm_) {
      const double after = pos_norm(rm_->r_tilde());
      L.max_norm_drop = std::max(L.max_norm_drop, before - after);
      if (after < before * (1.0 - 1e-12)) ++L.strict_decreases;
      if (ir_bound_) {
        const double regret = *std::max_element(L.cum_u.begin(), L.cum_u.end()) - L.cum_xu;
        const double bound = std::sqrt(L.init_sq + L.sum_g_sq) - L.movement / (2.0 * n);
        L.worst_ir_slack = std::min(L.worst_ir_slack, bound - regret);
      }
    }
  }
  SimplexVector extrapolation_strategy() override { return inner_->extrapolation_strategy(); }
  const SimplexVector& prox_center() const override { return inner_->prox_center(); }
  double regret_norm() const override { return inner_->regret_norm(); }
  RoundInfo last_round() const override { return inner_->last_round(); }
  std::string name() const override { return inner_->name(); }
  std::unique_ptr<OnlineLearner> clone() const override {
    return std::make_unique<Probe>(inner_->clone(), log_, ir_bound_);
  }

 private:
  std::unique_ptr<OnlineLearner> inner_;
  std::shared_ptr<ProbeLog> log_;
  RegretMatcher* rm_ = nullptr;
  bool ir_bound_;
  std::vector<double> m_, x_;
};

RunConfig make_config(const LearnerSpec& spec, Setup setup, long T) {
  RunConfig c;
  c.x_learner = c.y_learner = spec;
  c.setup = setup;
  c.iterations = T;
  return c;
}

struct ProbedRun {
  Trace trace;
  std::shared_ptr<ProbeLog> x, y;
};

ProbedRun probed_run(const NormalFormGame& game, const LearnerSpec& spec, Setup setup, long T,
                     bool history, bool ir_bound) {
  ProbedRun out;
  out.x = std::make_shared<ProbeLog>();
  out.y = std::make_shared<ProbeLog>();
  out.x->keep_history = out.y->keep_history = history;
  RunConfig c = make_config(spec, setup, T);
  c.learner_factory = [&](Player p, std::size_t, std::size_t n) -> std::unique_ptr<OnlineLearner> {
    return std::make_unique<Probe>(make_learner(spec, n), p == Player::X ? out.x : out.y, ir_bound);
  };
  out.trace = run_self_play(game, c);
  return out;
}

const LearnerSpec kIrPrmPlus = LearnerSpec::regret_matching(MatcherFlavor::IRPRMPlus);
const LearnerSpec kPrmPlus = LearnerSpec::regret_matching(MatcherFlavor::PRMPlus);

// ---- shared long runs (criteria 3, 4, 5, 7) ----

struct LongRuns {
  std::vector<std::string> names;
  std::vector<NormalFormGame> games;
  // per game: IREG-PRM+ (probed), IREG-PRM+ (library monitors), EG AdOGD
  std::vector<ProbedRun> ireg;
  std::vector<Trace> ireg_plain;
  std::vector<MonitorReport> ireg_monitors;
  std::vector<Trace> adogd;
  // same configurations stopped at T = 1e4
  std::vector<Trace> ireg_1e4, adogd_1e4;
  ProbedRun prm_sim;
  double seconds = 0.0;
};

LongRuns& long_runs() {
  static LongRuns L = [] {
    LongRuns r;
    const auto t0 = Clock::now();
    r.names.push_back("counterexample");
    r.games.push_back(counterexample_game());
    for (std::uint64_t s = 1; s <= 5; ++s) {
      r.names.push_back("random:10x10:" + std::to_string(s));
      r.games.push_back(random_matrix_game(10, 10, s));
    }
    const auto adogd = LearnerSpec::gradient();
    for (const auto& g : r.games) {
      r.ireg.push_back(probed_run(g, kIrPrmPlus, Setup::Extragradient, 100000, false, true));
      const auto c = make_config(kIrPrmPlus, Setup::Extragradient, 100000);
      r.ireg_plain.push_back(run_self_play(g, c));
      r.ireg_monitors.push_back(monitor_suite(r.ireg_plain.back(), c));
      r.adogd.push_back(run_self_play(g, make_config(adogd, Setup::Extragradient, 100000)));
      r.ireg_1e4.push_back(run_self_play(g, make_config(kIrPrmPlus, Setup::Extragradient, 10000)));
      r.adogd_1e4.push_back(run_self_play(g, make_config(adogd, Setup::Extragradient, 10000)));
    }
    r.prm_sim = probed_run(r.games[0], kPrmPlus, Setup::Simultaneous, 100000, false, false);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return L;
}

// ---- criteria ----

double gamma_bisect_ref(const std::vector<double>& v, double t) {
  // ||[v - g]_+|| is decreasing in g on (-inf, max v]
  double hi = *std::max_element(v.begin(), v.end());
  double lo = *std::min_element(v.begin(), v.end()) - t;
  for (int k = 0; k < 300 && hi - lo > 0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double s = 0.0;
    for (double e : v) s += e > mid ? (e - mid) * (e - mid) : 0.0;
    (std::sqrt(s) > t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion_1() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 g(1001);
  double worst_pair = 0.0, worst_res = 0.0, worst_ref = 0.0;
  long bad_pair = 0, bad_res = 0, bad_ref = 0;
  for (long k = 0; k < 10000; ++k) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 512));
    const double scale = std::pow(10.0, uniform_real(g, -2.0, 2.0));
    std::vector<double> vals(n);
    for (double& e : vals) e = uniform_real(g, -scale, scale);
    // duplicates: copy some entries, sometimes make many equal
    const long dups = uniform_int(g, 0, static_cast<long>(n) / 2);
    for (long d = 0; d < dups; ++d)
      vals[static_cast<std::size_t>(uniform_int(g, 0, static_cast<long>(n) - 1))] =
          vals[static_cast<std::size_t>(uniform_int(g, 0, static_cast<long>(n) - 1))];
    if (k % 50 == 0) std::fill(vals.begin(), vals.end(), vals[0]);
    const double t = std::pow(10.0, uniform_real(g, -3.0, 3.0));
    GammaProblem p{vals, t};
    const double a = gamma_sorted(p), b = gamma_select(p), c = gamma_bisect(p);
    auto rel = [](double x, double y) {
      return std::abs(x - y) / std::max({std::abs(x), std::abs(y), std::numeric_limits<double>::min()});
    };
    const double pair = std::max({rel(a, b), rel(a, c), rel(b, c)});
    worst_pair = std::max(worst_pair, pair);
    bad_pair += pair > 1e-10;
    for (double gm : {a, b, c}) {
      double s = 0.0;
      for (double e : vals) s += e > gm ? (e - gm) * (e - gm) : 0.0;
      const double res = std::abs(std::sqrt(s) - t);
      worst_res = std::max(worst_res, res);
      bad_res += res > 1e-9;
    }
    const double ref = rel(b, gamma_bisect_ref(vals, t));
    worst_ref = std::max(worst_ref, ref);
    bad_ref += ref > 1e-10;
  }
  const double secs = seconds_since(t0);
  v.require(bad_pair == 0, fmt("sorted/select/bisect pairwise relative diff: worst %.3g, %ld > 1e-10", worst_pair, bad_pair));
  v.require(bad_res == 0, fmt("| ||[v - g]_+|| - t |: worst %.3g, %ld > 1e-9", worst_res, bad_res));
  v.require(bad_ref == 0, fmt("select vs test bisection: worst relative %.3g", worst_ref));
  v.require(secs < 10.0, fmt("runtime %.2f s < 10 s", secs));
  report(1, "gamma solvers agree on 1e4 fuzzed instances", v, secs);
}

void criterion_2() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 g(2002);
  const MatcherFlavor flavors[] = {MatcherFlavor::RM, MatcherFlavor::RMPlus, MatcherFlavor::IRPRM,
                                   MatcherFlavor::IRPRMPlus};
  std::map<MatcherFlavor, double> worst_drop;
  double worst_shift = 0.0;
  long steps = 0, shifts = 0;
  for (long s = 0; s < 1000; ++s) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 20));
    std::vector<std::vector<double>> us(200, std::vector<double>(n)), ms(200, std::vector<double>(n));
    for (long t = 0; t < 200; ++t) {
      for (double& e : us[static_cast<std::size_t>(t)]) e = uniform_real(g, -1.0, 1.0);
      const int kind = static_cast<int>(uniform_int(g, 0, 2));
      for (std::size_t i = 0; i < n; ++i) {
        double& m = ms[static_cast<std::size_t>(t)][i];
        if (kind == 0) m = t ? us[static_cast<std::size_t>(t - 1)][i] : 0.0;
        else if (kind == 1) m = uniform_real(g, -1.0, 1.0);
        else m = uniform_real(g, -5.0, 5.0);
      }
    }
    for (auto f : flavors) {
      RegretMatcher L(f, n);
      const bool ir = f == MatcherFlavor::IRPRM || f == MatcherFlavor::IRPRMPlus;
      double& wd = worst_drop[f];
      for (std::size_t t = 0; t < 200; ++t) {
        const double before = pos_norm(L.r_tilde());
        L.next_strategy(ms[t]);
        if (ir) {
          worst_shift = std::max(worst_shift, std::abs(pos_norm(L.r()) - before));
          ++shifts;
        }
        L.observe_utility(us[t]);
        wd = std::max(wd, before - pos_norm(L.r_tilde()));
        ++steps;
      }
    }
  }
  const double secs = seconds_since(t0);
  for (auto f : flavors)
    v.require(worst_drop[f] <= 1e-9, fmt("%s: largest one-step drop of ||[r~]_+|| = %.3g", to_string(f).c_str(), worst_drop[f]));
  v.require(worst_shift <= 1e-9, fmt("IR shift keeps ||[r]_+|| = ||[r~]_+||: worst %.3g over %ld steps", worst_shift, shifts));
  v.require(secs < 30.0, fmt("runtime %.2f s < 30 s (%ld steps)", secs, steps));
  report(2, "regret norm nondecreasing for RM, RM+, IR-PRM, IR-PRM+", v, secs);
}

void criterion_3() {
  const auto t0 = Clock::now();
  auto& L = long_runs();
  Verdict v;
  const auto& prm = L.prm_sim;
  const auto& ireg = L.ireg[0];
  v.require(prm.x->strict_decreases + prm.y->strict_decreases > 0,
            fmt("sim PRM+ strict regret-norm decreases within 1e5: X %ld, Y %ld (library count X %ld)",
                prm.x->strict_decreases, prm.y->strict_decreases, prm.trace.summary.rnorm_strict_decreases_x));
  const double drop = std::max(ireg.x->max_norm_drop, ireg.y->max_norm_drop);
  v.require(drop <= 1e-9 && ireg.x->strict_decreases + ireg.y->strict_decreases == 0,
            fmt("IREG-PRM+ largest per-round norm drop %.3g, strict decreases %ld", drop,
                ireg.x->strict_decreases + ireg.y->strict_decreases));
  const auto& a = ireg.trace.records.back();
  const auto& b = prm.trace.records.back();
  const double ratio_lh = b.gap_avg_lasthalf / a.gap_avg_lasthalf;
  const double ratio_u = b.gap_avg_uniform / a.gap_avg_uniform;
  v.require(ratio_lh >= 10.0, fmt("average-iterate gap at 1e5 (last-half average): PRM+ %.3e, IREG-PRM+ %.3e, ratio %.3g",
                                  b.gap_avg_lasthalf, a.gap_avg_lasthalf, ratio_lh));
  v.note(fmt("uniform average for reference: PRM+ %.3e, IREG-PRM+ %.3e, ratio %.3g", b.gap_avg_uniform,
             a.gap_avg_uniform, ratio_u));
  v.note(fmt("shared long runs (criteria 3-5, 7) took %.1f s; the criterion-3 runs are a subset", L.seconds));
  report(3, "counterexample: PRM+ norm decreases, IREG-PRM+ monotone and 10x better", v, seconds_since(t0));
}

std::vector<std::pair<double, double>> window(const Trace& tr, double lo, double hi) {
  std::vector<std::pair<double, double>> p;
  for (const auto& r : tr.records)
    if (r.iter >= lo && r.iter <= hi) p.emplace_back(static_cast<double>(r.iter), r.gap_avg_uniform);
  return p;
}

void criterion_4() {
  const auto t0 = Clock::now();
  auto& L = long_runs();
  Verdict v;
  for (std::size_t k = 0; k < L.games.size(); ++k) {
    for (int which = 0; which < 2; ++which) {
      const Trace& tr = which == 0 ? L.ireg[k].trace : L.adogd[k];
      std::vector<double> xs, ys;
      bool positive = true;
      for (auto [x, y] : window(tr, 1e3, 1e5)) {
        if (!(y > 0.0)) positive = false;
        xs.push_back(x);
        ys.push_back(y);
      }
      const double s = positive ? slope_ref(xs, ys) : std::numeric_limits<double>::quiet_NaN();
      v.require(s <= -0.9, fmt("%-10s %-16s slope %.3f over %zu checkpoints", which ? "AdOGD" : "IREG-PRM+",
                               L.names[k].c_str(), s, xs.size()));
    }
  }
  report(4, "average-iterate gap slope <= -0.9 on [1e3, 1e5]", v, seconds_since(t0));
}

void criterion_5() {
  const auto t0 = Clock::now();
  auto& L = long_runs();
  Verdict v;
  const double factor = 1.5 / std::sqrt(10.0);
  for (std::size_t k = 0; k < L.games.size(); ++k) {
    for (int which = 0; which < 2; ++which) {
      const Trace& t5 = which == 0 ? L.ireg[k].trace : L.adogd[k];
      const Trace& t4 = which == 0 ? L.ireg_1e4[k] : L.adogd_1e4[k];
      const double b4 = t4.records.back().best_gap_last;
      const double b5 = t5.records.back().best_gap_last;
      v.require(b5 <= factor * b4, fmt("%-10s %-16s min gap_last: T=1e4 %.3e, T=1e5 %.3e, needed <= %.3e",
                                       which ? "AdOGD" : "IREG-PRM+", L.names[k].c_str(), b4, b5, factor * b4));
    }
  }
  report(5, "best-iterate gap shrinks by (1.5/sqrt 10) from T=1e4 to T=1e5", v, seconds_since(t0));
}

struct History {
  std::vector<std::vector<double>> x, y;  // profile played at round t
};

// Profile (x^t, y^t) from the probe logs of a self-play run.
History profile_history(const ProbedRun& run, Setup setup) {
  History h;
  const long T = run.x->rounds;
  for (long t = 0; t < T; ++t) {
    h.x.push_back(run.x->plays[static_cast<std::size_t>(t)]);
    // alternating: Y commits before the first round, y^t is its (t+1)-th play
    h.y.push_back(run.y->plays[static_cast<std::size_t>(setup == Setup::Alternating ? t + 1 : t)]);
  }
  return h;
}

void criterion_6() {
  const auto t0 = Clock::now();
  Verdict v;
  AdOGDOptions theorem;
  theorem.mode = AdOGDMode::Theorem;
  const std::vector<std::pair<std::string, LearnerSpec>> specs{
      {"RM", LearnerSpec::regret_matching(MatcherFlavor::RM)},
      {"RM+", LearnerSpec::regret_matching(MatcherFlavor::RMPlus)},
      {"PRM+", kPrmPlus},
      {"IR-PRM", LearnerSpec::regret_matching(MatcherFlavor::IRPRM)},
      {"IR-PRM+", kIrPrmPlus},
      {"DCFR", LearnerSpec::regret_matching(MatcherFlavor::DCFR)},
      {"AdOGD", LearnerSpec::gradient()},
      {"AdOGD-thm", LearnerSpec::gradient(theorem)},
  };
  const std::vector<std::pair<std::string, NormalFormGame>> games{
      {"counterexample", counterexample_game()},
      {"pennies", matching_pennies()},
      {"random:6x5:3", random_matrix_game(6, 5, 3)},
      {"random:10x10:4", random_matrix_game(10, 10, 4)},
  };
  double worst_id_rec = 0.0, worst_id_ref = 0.0, worst_match = 0.0, min_sum_rec = INFINITY, min_sum_ref = INFINITY;
  long checkpoints = 0, runs = 0;
  for (const auto& [gname, game] : games) {
    for (const auto& [sname, spec] : specs) {
      for (auto setup : {Setup::Simultaneous, Setup::Alternating, Setup::Extragradient}) {
        if (setup == Setup::Extragradient && spec.flavor == MatcherFlavor::DCFR && spec.kind == LearnerSpec::Kind::Matcher)
          continue;
        const long T = 20000;
        const auto run = probed_run(game, spec, setup, T, true, false);
        const auto h = profile_history(run, setup);
        ++runs;
        // reference accumulation over the played profile
        std::vector<double> sx(game.rows(), 0.0), sy(game.cols(), 0.0), ux(game.rows(), 0.0), uy(game.cols(), 0.0);
        double value = 0.0;
        std::size_t next = 0;
        const auto& recs = run.trace.records;
        for (long t = 1; t <= T && next < recs.size(); ++t) {
          const auto& x = h.x[static_cast<std::size_t>(t - 1)];
          const auto& y = h.y[static_cast<std::size_t>(t - 1)];
          const auto gx = util_x(game, y), gy = util_y(game, x);
          for (std::size_t i = 0; i < sx.size(); ++i) sx[i] += x[i], ux[i] += gx[i];
          for (std::size_t j = 0; j < sy.size(); ++j) sy[j] += y[j], uy[j] += gy[j];
          value += inner(x, gx);
          if (recs[next].iter != t) continue;
          const auto& r = recs[next++];
          const double reg_x = *std::max_element(ux.begin(), ux.end()) - value;
          const double reg_y = *std::max_element(uy.begin(), uy.end()) + value;
          std::vector<double> xb(sx), yb(sy);
          for (double& e : xb) e /= t;
          for (double& e : yb) e /= t;
          const double gap = gap_ref(game, xb, yb);
          // regrets grow with t, compare them relative to their size
          worst_match = std::max({worst_match, std::abs(gap - r.gap_avg_uniform),
                                  std::abs(reg_x - r.reg_x) / std::max(1.0, std::abs(reg_x)),
                                  std::abs(reg_y - r.reg_y) / std::max(1.0, std::abs(reg_y))});
          min_sum_rec = std::min(min_sum_rec, r.reg_x + r.reg_y);
          min_sum_ref = std::min(min_sum_ref, reg_x + reg_y);
          if (setup == Setup::Simultaneous) {
            worst_id_rec = std::max(worst_id_rec, std::abs(r.gap_avg_uniform - (r.reg_x + r.reg_y) / t));
            worst_id_ref = std::max(worst_id_ref, std::abs(gap - (reg_x + reg_y) / t));
            ++checkpoints;
          }
        }
        if (next != recs.size()) v.require(false, gname + " " + sname + ": checkpoints not all visited");
      }
    }
  }
  // the long runs of criteria 3-5 as well
  auto& L = long_runs();
  auto add_fact2 = [&](const Trace& tr) {
    for (const auto& r : tr.records) min_sum_rec = std::min(min_sum_rec, r.reg_x + r.reg_y);
  };
  for (const auto& t : L.ireg_plain) add_fact2(t);
  for (const auto& t : L.adogd) add_fact2(t);
  for (const auto& r : L.prm_sim.trace.records) {
    worst_id_rec = std::max(worst_id_rec, std::abs(r.gap_avg_uniform - (r.reg_x + r.reg_y) / r.iter));
    min_sum_rec = std::min(min_sum_rec, r.reg_x + r.reg_y);
    ++checkpoints;
  }
  v.require(worst_id_rec <= 1e-8, fmt("|gap_avg - (reg_x + reg_y)/T| from trace: worst %.3g over %ld sim checkpoints", worst_id_rec, checkpoints));
  v.require(worst_id_ref <= 1e-8, fmt("same identity recomputed from the played strategies: worst %.3g", worst_id_ref));
  v.require(worst_match <= 1e-9, fmt("trace gap and regrets vs recomputation: worst diff %.3g", worst_match));
  v.require(min_sum_rec >= -1e-9 && min_sum_ref >= -1e-9,
            fmt("reg_x + reg_y >= -1e-9 everywhere: min %.3g (trace), %.3g (recomputed)", min_sum_rec, min_sum_ref));
  v.note(fmt("%ld runs x 20000 iterations over sim/alt/eg", runs));
  report(6, "average-gap identity and nonnegative regret sum", v, seconds_since(t0));
}

struct AdogdStreamStats {
  double worst_modified = INFINITY;
  double worst_first = INFINITY;
  long checks = 0;
  long skipped = 0;
};

// One adversarial stream against Theorem-mode AdOGD. The bound is applied
// from the first round with a nonzero misprediction on.
void adogd_stream(std::mt19937_64& g, AdogdStreamStats& st) {
  const auto n = static_cast<std::size_t>(uniform_int(g, 2, 10));
  const long T = 500;
  const double eta = std::pow(10.0, uniform_real(g, -1.0, 1.0));
  const double scale = std::pow(10.0, uniform_real(g, -2.0, 2.0));
  const int family = static_cast<int>(uniform_int(g, 0, 2));
  const long quiet = family == 2 ? uniform_int(g, 1, 20) : 0;  // rounds with u = m = 0
  AdOGDOptions o;
  o.eta = eta;
  o.mode = AdOGDMode::Theorem;
  AdOGD A(n, o);

  std::vector<std::vector<double>> us, ms;
  std::vector<double> prev(n, 0.0);
  for (long t = 0; t < T; ++t) {
    std::vector<double> u(n), m(n);
    if (t < quiet) {
      std::fill(u.begin(), u.end(), 0.0);
    } else if (t > quiet && uniform_real(g, 0.0, 1.0) < 0.2) {
      u = prev;  // repeat: a perfect prediction when m = previous u
    } else {
      for (double& e : u) e = scale * uniform_real(g, -1.0, 1.0);
    }
    if (family == 1) {
      for (double& e : m) e = scale * uniform_real(g, -1.0, 1.0);
    } else {
      m = t ? prev : std::vector<double>(n, 0.0);
    }
    us.push_back(u);
    ms.push_back(m);
    prev = u;
  }
  // activation round
  long t0 = -1;
  for (long t = 0; t < T && t0 < 0; ++t)
    if (sq_dist(us[static_cast<std::size_t>(t)], ms[static_cast<std::size_t>(t)]) > 0.0) t0 = t;
  if (t0 < 0) {
    ++st.skipped;
    return;
  }
  // B: largest pairwise distance over the utilities in play, 0 included
  std::vector<std::vector<double>> U{std::vector<double>(n, 0.0)};
  for (long t = t0; t < T; ++t) {
    U.push_back(us[static_cast<std::size_t>(t)]);
    U.push_back(ms[static_cast<std::size_t>(t)]);
  }
  double B2 = 0.0;
  for (std::size_t a = 0; a < U.size(); ++a)
    for (std::size_t b = a + 1; b < U.size(); ++b) B2 = std::max(B2, sq_dist(U[a], U[b]));
  const double B = std::sqrt(B2);
  const double D2 = 2.0;  // simplex: l2 diameter sqrt 2, max norm 1

  const double delta = std::sqrt(sq_dist(us[static_cast<std::size_t>(t0)], ms[static_cast<std::size_t>(t0)]));
  std::vector<double> cum_u(n, 0.0);
  double cum_xu = 0.0, P = 0.0, sum_mis = 0.0, sum_path = 0.0, sum_eta_mis = 0.0, sum_path_eta = 0.0;
  for (long t = 0; t < T; ++t) {
    const auto& u = us[static_cast<std::size_t>(t)];
    const auto& m = ms[static_cast<std::size_t>(t)];
    const std::vector<double> xt_tilde = A.prox_center();
    const std::vector<double> x = A.next_strategy(m);
    A.observe_utility(u);
    const std::vector<double> xt_next = A.prox_center();
    const double mis = sq_dist(u, m);
    if (t < t0) {
      P += mis;
      continue;
    }
    // eta^(t) = eta / sqrt(P^(t)), pinned to the next one in the activation round
    const double eta_t = eta / std::sqrt(t == t0 ? P + mis : P);
    P += mis;
    for (std::size_t i = 0; i < n; ++i) cum_u[i] += u[i];
    cum_xu += inner(x, u);
    const double path = sq_dist(x, xt_tilde) + sq_dist(x, xt_next);
    sum_mis += mis;
    sum_path += path;
    sum_eta_mis += eta_t * mis;
    sum_path_eta += path / (2.0 * eta_t);
    const double regret = *std::max_element(cum_u.begin(), cum_u.end()) - cum_xu;
    const double first = D2 / eta_t + sum_eta_mis - sum_path_eta;
    const double modified = (3.0 * eta * B / delta + D2 / eta) * std::sqrt(sum_mis) - delta / (2.0 * eta) * sum_path;
    st.worst_first = std::min(st.worst_first, first - regret);
    st.worst_modified = std::min(st.worst_modified, modified - regret);
    ++st.checks;
  }
}

void criterion_7() {
  const auto t0 = Clock::now();
  auto& L = long_runs();
  Verdict v;
  double worst_ref = INFINITY, worst_lib = INFINITY;
  std::size_t lib_checks = 0;
  for (std::size_t k = 0; k < L.games.size(); ++k) {
    worst_ref = std::min({worst_ref, L.ireg[k].x->worst_ir_slack, L.ireg[k].y->worst_ir_slack});
    worst_lib = std::min(worst_lib, L.ireg_monitors[k].worst_slack("ir_rvu"));
    lib_checks += L.ireg_monitors[k].count("ir_rvu");
  }
  v.require(worst_ref >= -1e-6, fmt("IR-PRM+ bound recomputed every round of the 6 IREG runs: worst slack %.3g", worst_ref));
  v.require(lib_checks > 0 && worst_lib >= -1e-6,
            fmt("library monitor at %zu checkpoints: worst slack %.3g", lib_checks, worst_lib));
  // IR-PRM without the +, same games, sim and eg
  double worst_irprm = INFINITY;
  for (std::size_t k = 0; k < L.games.size(); ++k) {
    for (auto setup : {Setup::Simultaneous, Setup::Extragradient}) {
      const auto r = probed_run(L.games[k], LearnerSpec::regret_matching(MatcherFlavor::IRPRM), setup, 20000, false, true);
      worst_irprm = std::min({worst_irprm, r.x->worst_ir_slack, r.y->worst_ir_slack});
    }
  }
  v.require(worst_irprm >= -1e-6, fmt("IR-PRM (sim and eg, 2e4 rounds, same games): worst slack %.3g", worst_irprm));

  std::mt19937_64 g(7007);
  AdogdStreamStats st;
  for (int s = 0; s < 1000; ++s) adogd_stream(g, st);
  v.require(st.worst_modified >= -1e-6,
            fmt("AdOGD modified RVU bound on 1000 adversarial streams: worst slack %.3g (%ld checks, %ld streams without misprediction)",
                st.worst_modified, st.checks, st.skipped));
  v.require(st.worst_first >= -1e-6, fmt("AdOGD step-size-parameterized bound: worst slack %.3g", st.worst_first));
  report(7, "regret bounds for IR-PRM(+) and AdOGD", v, seconds_since(t0));
}

void criterion_8() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 g(8008);
  double worst = INFINITY;
  long checked = 0;
  for (long k = 0; k < 100000; ++k) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 12));
    const double scale = std::pow(10.0, uniform_real(g, -3.0, 3.0));
    std::vector<double> r(n, 0.0), u(n);
    if (k % 10 != 0)
      for (double& e : r) e = uniform_real(g, 0.0, 1.0) < 0.3 ? 0.0 : uniform_real(g, 0.0, scale);
    for (double& e : u) e = uniform_real(g, -1.0, 1.0);
    const auto x = strategy_of(r);
    const double xu = inner(x, u);
    std::vector<double> r2(n);
    double l1 = 0.0;
    for (std::size_t a = 0; a < n; ++a) l1 += (r2[a] = std::max(r[a] + u[a] - xu, 0.0));
    if (l1 == 0.0) continue;
    double gain = 0.0;
    for (std::size_t a = 0; a < n; ++a) gain += (r2[a] / l1 - x[a]) * u[a];
    const double best = *std::max_element(u.begin(), u.end()) - xu;
    worst = std::min(worst, gain - best * best / l1);
    ++checked;
  }
  const auto lib = verify_lemma_c(8008, 100000);
  const double secs = seconds_since(t0);
  v.require(worst >= -1e-12, fmt("one-step improvement slack over %ld instances: worst %.3g", checked, worst));
  v.require(lib.pass(), fmt("library verify suite agrees (%ld checked, %ld failed)", lib.properties[0].checked,
                            lib.properties[0].failed));
  v.require(secs < 10.0, fmt("runtime %.2f s < 10 s", secs));
  report(8, "RM+ one-step improvement inequality on 1e5 instances", v, secs);
}

// Plays self-play by hand and returns the strategy sequence of both players.
std::vector<std::vector<double>> play_by_hand(const NormalFormGame& game, const LearnerSpec& spec, Setup setup,
                                              long rounds) {
  auto lx = make_learner(spec, game.rows());
  auto ly = make_learner(spec, game.cols());
  std::vector<std::vector<double>> seq;
  std::vector<double> ux(game.rows(), 0.0), uy(game.cols(), 0.0);
  for (long t = 0; t < rounds; ++t) {
    std::vector<double> x, y;
    if (setup == Setup::Extragradient) {
      const auto xh = lx->extrapolation_strategy();
      const auto yh = ly->extrapolation_strategy();
      x = lx->next_strategy(util_x(game, yh));
      y = ly->next_strategy(util_y(game, xh));
    } else {
      x = lx->next_strategy(ux);
      y = ly->next_strategy(uy);
    }
    ux = util_x(game, y);
    uy = util_y(game, x);
    lx->observe_utility(ux);
    ly->observe_utility(uy);
    seq.push_back(x);
    seq.push_back(y);
  }
  return seq;
}

void criterion_9() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto game = counterexample_game();
  const std::vector<std::tuple<std::string, LearnerSpec, Setup>> cases{
      {"IR-PRM+ eg", kIrPrmPlus, Setup::Extragradient},
      {"IR-PRM+ sim", kIrPrmPlus, Setup::Simultaneous},
      {"AdOGD eg", LearnerSpec::gradient(), Setup::Extragradient},
      {"AdOGD sim", LearnerSpec::gradient(), Setup::Simultaneous},
      {"PRM+ sim", kPrmPlus, Setup::Simultaneous},
  };
  for (const auto& [name, spec, setup] : cases) {
    const auto base = play_by_hand(game, spec, setup, 1000);
    double worst = 0.0;
    for (double c : {1e-3, 1e3}) {
      NormalFormGame scaled(game.rows(), game.cols(), [&] {
        std::vector<double> d;
        for (std::size_t i = 0; i < game.rows(); ++i)
          for (std::size_t j = 0; j < game.cols(); ++j) d.push_back(c * game.at(i, j));
        return d;
      }());
      const auto other = play_by_hand(scaled, spec, setup, 1000);
      for (std::size_t k = 0; k < base.size(); ++k)
        for (std::size_t i = 0; i < base[k].size(); ++i) worst = std::max(worst, std::abs(base[k][i] - other[k][i]));
    }
    v.require(worst <= 1e-7, fmt("%-12s sup-norm difference over 1000 rounds, c in {1e-3, 1e3}: %.3g", name.c_str(), worst));
  }
  report(9, "scale invariance on the counterexample game", v, seconds_since(t0));
}

void criterion_10() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto kuhn_tree = build_kuhn_poker();
  long checked = 0;
  const std::vector<LearnerSpec> specs{kIrPrmPlus, kPrmPlus, LearnerSpec::regret_matching(MatcherFlavor::RMPlus),
                                       LearnerSpec::gradient()};
  for (auto setup : {Setup::Simultaneous, Setup::Alternating, Setup::Extragradient}) {
    const long per = setup == Setup::Extragradient ? 4 : 2;
    for (const auto& spec : specs) {
      long bad = 0;
      for (int game = 0; game < 3; ++game) {
        const auto c = make_config(spec, setup, 2000);
        const Trace tr = game == 0   ? run_self_play(counterexample_game(), c)
                         : game == 1 ? run_self_play(random_matrix_game(7, 3, 11), c)
                                     : run_cfr(kuhn_tree, c);
        for (const auto& r : tr.records) {
          bad += r.grad_evals != per * r.iter;
          ++checked;
        }
      }
      v.require(bad == 0, fmt("%-4s %-8s: %ld gradient evaluations per iteration (matrix and Kuhn)",
                              to_string(setup).c_str(), spec.name().c_str(), per));
    }
  }
  v.note(fmt("%ld checkpoints checked", checked));
  report(10, "gradient evaluations per iteration: sim 2, alt 2, eg 4", v, seconds_since(t0));
}

void criterion_11() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto tree = build_kuhn_poker();
  CfrAverages avg;
  const Trace tr = run_cfr(tree, make_config(kIrPrmPlus, Setup::Extragradient, 10000), &avg);
  // reference: the rules-level evaluator and 64-strategy enumeration
  kuhn::KuhnX x;
  kuhn::KuhnY y;
  kuhn::from_tree(tree, avg.last_half, x, y);
  const double gap = kuhn::kuhn_br_x(y) - kuhn::kuhn_br_y(x);
  const double value = kuhn::kuhn_value(x, y);
  kuhn::from_tree(tree, avg.uniform, x, y);
  const double value_u = kuhn::kuhn_value(x, y);
  const double gap_u = kuhn::kuhn_br_x(y) - kuhn::kuhn_br_y(x);
  long first = -1;
  for (const auto& r : tr.records)
    if (first < 0 && r.gap_avg_lasthalf <= 1e-3) first = r.iter;
  const double secs = seconds_since(t0);
  v.require(gap <= 1e-3, fmt("Nash gap of the last-half average at T=1e4 (reference evaluator): %.3e (trace %.3e)", gap,
                             tr.records.back().gap_avg_lasthalf));
  v.require(std::abs(value + 1.0 / 18.0) <= 1e-2, fmt("value of the average profile %.6f vs -1/18 = %.6f", value, -1.0 / 18.0));
  v.note(fmt("first checkpoint with last-half gap <= 1e-3: %ld; uniform average gap %.3e, value %.6f", first, gap_u, value_u));
  v.require(secs < 120.0, fmt("runtime %.1f s < 120 s", secs));
  report(11, "Kuhn poker: extragradient IR-PCFR+", v, secs);
}

void criterion_12() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 g(1212);
  std::vector<double> ns, cs;
  for (int e = 8; e <= 16; ++e) {
    const std::size_t n = std::size_t{1} << e;
    double total = 0.0;
    const int reps = 9;
    for (int r = 0; r < reps; ++r) {
      GammaProblem p;
      p.v.resize(n);
      for (double& x : p.v) x = uniform_real(g, -1.0, 1.0);
      p.target = std::pow(10.0, uniform_real(g, -2.0, 1.0));
      GammaStats st;
      gamma_select(p, &st);
      total += static_cast<double>(st.comparisons);
    }
    ns.push_back(static_cast<double>(n));
    cs.push_back(total / reps);
  }
  const double s = slope_ref(ns, cs);
  v.require(s >= 0.8 && s <= 1.3, fmt("comparison-count slope over n = 2^8..2^16: %.3f", s));
  v.note(fmt("mean comparisons at 2^8: %.0f, at 2^16: %.0f", cs.front(), cs.back()));
  report(12, "gamma_select runs in linear time", v, seconds_since(t0));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("%d of 12 criteria failed (%.1f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
