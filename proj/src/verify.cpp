#include "rmsolve/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "rmsolve/driver.hpp"
#include "rmsolve/gamma.hpp"
#include "rmsolve/gradient.hpp"
#include "rmsolve/matchers.hpp"
#include "rmsolve/random.hpp"

namespace rmsolve {

bool SuiteResult::pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.failed == 0; });
}

void print_suite(std::ostream& os, const SuiteResult& result) {
  os << "suite " << result.suite << (result.pass() ? ": pass" : ": FAIL") << '\n';
  char buf[256];
  for (const auto& p : result.properties) {
    std::snprintf(buf, sizeof buf, "  %-24s checked=%-9ld failed=%-6ld worst_slack=%.3e\n",
                  p.name.c_str(), p.checked, p.failed, p.worst_slack);
    os << buf;
    if (p.failed > 0) os << "    first failure: " << p.reproducer << '\n';
  }
}

namespace {

/// Accumulates one property; `slack` is measured so that >= 0 passes.
class Check {
 public:
  explicit Check(std::string name) { r_.name = std::move(name); r_.worst_slack = std::numeric_limits<double>::infinity(); }
  void operator()(double slack, const std::function<std::string()>& repro) {
    ++r_.checked;
    if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
    r_.worst_slack = std::min(r_.worst_slack, slack);
    if (slack < 0.0) {
      if (r_.failed == 0) r_.reproducer = repro();
      ++r_.failed;
    }
  }
  PropertyResult result() const { return r_; }

 private:
  PropertyResult r_;
};

std::string vec_str(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

std::string seed_str(std::uint64_t seed, long instance) {
  return "seed=" + std::to_string(seed) + " instance=" + std::to_string(instance);
}

Vector random_vector(std::mt19937_64& g, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& e : v) e = uniform_real(g, lo, hi);
  return v;
}

}  // namespace

SuiteResult verify_gamma(std::uint64_t seed, long instances) {
  std::mt19937_64 g(seed);
  Check agree("gamma_agreement"), residual("gamma_residual"), active("gamma_active_set");
  for (long i = 0; i < instances; ++i) {
    GammaProblem p;
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 512));
    p.v.resize(n);
    switch (i % 4) {
      case 0:
        for (double& e : p.v) e = uniform_real(g, -5.0, 5.0);
        break;
      case 1:
        for (double& e : p.v) e = static_cast<double>(uniform_int(g, -3, 3));
        break;
      case 2: {
        const double c = uniform_real(g, -5.0, 5.0);
        std::fill(p.v.begin(), p.v.end(), c);
        break;
      }
      default: {
        const Vector pool = random_vector(g, 4, -10.0, 10.0);
        for (double& e : p.v) e = pool[static_cast<std::size_t>(uniform_int(g, 0, 3))];
        break;
      }
    }
    p.target = std::exp(uniform_real(g, std::log(1e-3), std::log(1e2)));
    auto repro = [&] { return seed_str(seed, i) + " t=" + std::to_string(p.target) + " v=" + vec_str(p.v); };

    const double a = gamma_sorted(p);
    const double b = gamma_select(p);
    const double c = gamma_bisect(p);
    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    const double diff = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
    agree(1e-10 * scale - diff, repro);
    double res = 0.0;
    for (double gm : {a, b, c}) res = std::max(res, std::abs(gamma_residual_norm(p.v, gm) - p.target));
    residual(1e-9 - res, repro);

    double s = 0.0, s2 = 0.0;
    long k = 0;
    for (double e : p.v) {
      if (e > a) {
        s += e;
        s2 += e * e;
        ++k;
      }
    }
    const auto root = k > 0 ? solve_k_quadratic(s, s2, k, p.target) : std::nullopt;
    active(root ? 1e-9 * std::max(1.0, std::abs(a)) - std::abs(*root - a) : -1.0, repro);
  }
  return {"gamma", {agree.result(), residual.result(), active.result()}};
}

SuiteResult verify_matchers(std::uint64_t seed, long streams, long rounds) {
  std::mt19937_64 g(seed);
  Check monotone("regret_norm_monotone"), preserved("ir_norm_preserved"),
      orthogonal("orthogonality"), bound("regret_norm_bound"), rvu("ir_rvu");
  const MatcherFlavor flavors[] = {MatcherFlavor::RM, MatcherFlavor::RMPlus, MatcherFlavor::IRPRM,
                                   MatcherFlavor::IRPRMPlus};
  for (long s = 0; s < streams; ++s) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 20));
    const double scale = std::exp(uniform_real(g, -3.0, 3.0));
    const bool optimistic = s % 2 == 0;
    std::vector<Vector> us, ms;
    Vector prev(n, 0.0);
    for (long t = 0; t < rounds; ++t) {
      Vector u = random_vector(g, n, -scale, scale);
      ms.push_back(optimistic ? prev : random_vector(g, n, -scale, scale));
      prev = u;
      us.push_back(std::move(u));
    }
    for (MatcherFlavor f : flavors) {
      RegretMatcher rm(f, n);
      const bool ir = is_increasing_regret_flavor(f);
      Vector cum(n, 0.0);
      double realized = 0.0, sum_g = 0.0, movement = 0.0;
      for (long t = 0; t < rounds; ++t) {
        auto repro = [&] {
          return seed_str(seed, s) + " flavor=" + to_string(f) + " round=" + std::to_string(t + 1);
        };
        const double before = rm.regret_norm();
        const SimplexVector x_tilde = rm.prox_center();
        const SimplexVector x = rm.next_strategy(ms[static_cast<std::size_t>(t)]);
        if (ir) preserved(1e-9 - std::abs(positive_part_norm2(rm.r()) - before), repro);
        rm.observe_utility(us[static_cast<std::size_t>(t)]);
        const double after = rm.regret_norm();
        monotone(after - before + 1e-9, repro);

        double og = 0.0;
        for (std::size_t i = 0; i < n; ++i) og += rm.last_g()[i] * std::max(rm.r()[i], 0.0);
        orthogonal(1e-9 - std::abs(og), repro);

        sum_g += norm2_sq(rm.last_g());
        bound(sum_g * (1.0 + 1e-6) - after * after, repro);

        if (ir) {
          const auto& u = us[static_cast<std::size_t>(t)];
          for (std::size_t i = 0; i < n; ++i) cum[i] += u[i];
          realized += dot(x, u);
          movement += before * dist2_sq(x, x_tilde);
          const double regret = *std::max_element(cum.begin(), cum.end()) - realized;
          const double rhs = std::sqrt(sum_g) - movement / (2.0 * static_cast<double>(n));
          rvu(rhs - regret + 1e-6, repro);
        }
      }
    }
  }
  return {"matchers",
          {monotone.result(), preserved.result(), orthogonal.result(), bound.result(), rvu.result()}};
}

SuiteResult verify_gradient(std::uint64_t seed, long streams, long rounds) {
  std::mt19937_64 g(seed);
  Check projection("projection_variational"), rate("eta_nonincreasing"),
      first("adogd_first_bound"), modified("adogd_modified_rvu");

  for (long i = 0; i < 10000; ++i) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 50));
    const Vector y = random_vector(g, n, -3.0, 3.0);
    const SimplexVector p = simplex_project(y);
    double worst = is_simplex(p, 1e-12) ? -std::numeric_limits<double>::infinity()
                                        : std::numeric_limits<double>::infinity();
    auto probe = [&](std::span<const double> x) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += (y[j] - p[j]) * (x[j] - p[j]);
      worst = std::max(worst, v);
    };
    for (std::size_t a = 0; a < n; ++a) {
      Vector e(n, 0.0);
      e[a] = 1.0;
      probe(e);
    }
    for (int k = 0; k < 5; ++k) probe(normalize_positive_part(random_vector(g, n, 0.0, 1.0)));
    projection(1e-10 - worst, [&] { return seed_str(seed, i) + " y=" + vec_str(y); });
  }

  const double D2 = kSimplexDiameter * kSimplexDiameter;
  for (long s = 0; s < streams; ++s) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 2, 10));
    const double eta = std::pow(10.0, static_cast<double>(uniform_int(g, -1, 1)));
    const bool optimistic = s % 2 == 0;
    AdOGD learner(n, {eta, AdOGDMode::Theorem});
    std::vector<Vector> points{Vector(n, 0.0)};
    Vector prev(n, 0.0), cum(n, 0.0);
    double realized = 0.0, sum_eta_mis = 0.0, sum_path_eta = 0.0, sum_mis = 0.0, sum_path = 0.0;
    double last_eta = std::numeric_limits<double>::infinity();
    struct Row {
      double regret, first_bound, sum_mis, sum_path;
    };
    std::vector<Row> rows;
    for (long t = 0; t < rounds; ++t) {
      const Vector m = optimistic ? prev : random_vector(g, n, -1.0, 1.0);
      const Vector u = random_vector(g, n, -1.0, 1.0);
      const SimplexVector before = learner.prox_center();
      const SimplexVector x = learner.next_strategy(m);
      learner.observe_utility(u);
      const RoundInfo info = learner.last_round();
      const double e = info.eta;
      rate(std::isfinite(last_eta) ? last_eta - e : 0.0,
           [&] { return seed_str(seed, s) + " round=" + std::to_string(t + 1); });
      last_eta = e;
      const double move = dist2_sq(x, before) + dist2_sq(x, learner.prox_center());
      for (std::size_t i = 0; i < n; ++i) cum[i] += u[i];
      realized += dot(x, u);
      sum_eta_mis += e * info.instantaneous_sq;
      sum_path_eta += move / (2.0 * e);
      sum_mis += info.instantaneous_sq;
      sum_path += move;
      const double regret = *std::max_element(cum.begin(), cum.end()) - realized;
      rows.push_back({regret, D2 / e + sum_eta_mis - sum_path_eta, sum_mis, sum_path});
      points.push_back(m);
      points.push_back(u);
      prev = u;
    }
    // Exact spread of everything the learner saw, plus the origin.
    double B2 = 0.0;
    for (std::size_t a = 0; a < points.size(); ++a) {
      for (std::size_t b = a + 1; b < points.size(); ++b) B2 = std::max(B2, dist2_sq(points[a], points[b]));
    }
    const double B = std::sqrt(B2);
    if (!learner.delta()) continue;
    const double delta = *learner.delta();
    for (std::size_t t = 0; t < rows.size(); ++t) {
      auto repro = [&] {
        return seed_str(seed, s) + " round=" + std::to_string(t + 1) + " eta=" + std::to_string(eta);
      };
      first(rows[t].first_bound - rows[t].regret + 1e-6, repro);
      const double rhs = (3.0 * eta * B / delta + D2 / eta) * std::sqrt(rows[t].sum_mis) -
                         delta / (2.0 * eta) * rows[t].sum_path;
      modified(rhs - rows[t].regret + 1e-6, repro);
    }
  }
  return {"gradient", {projection.result(), rate.result(), first.result(), modified.result()}};
}

namespace {

struct NamedGame {
  std::string name;
  NormalFormGame game;
};

}  // namespace

SuiteResult verify_rvu(std::uint64_t seed) {
  std::vector<NamedGame> games{{"counterexample", counterexample_game()}, {"pennies", matching_pennies()}};
  for (int k = 0; k < 3; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    games.push_back({"random:10x10:" + std::to_string(s), random_matrix_game(10, 10, s)});
  }
  struct Algo {
    LearnerSpec spec;
    Setup setup;
  };
  const std::vector<Algo> algos{
      {LearnerSpec::regret_matching(MatcherFlavor::IRPRMPlus), Setup::Extragradient},
      {LearnerSpec::regret_matching(MatcherFlavor::IRPRM), Setup::Extragradient},
      {LearnerSpec::regret_matching(MatcherFlavor::IRPRMPlus), Setup::Simultaneous},
      {LearnerSpec::regret_matching(MatcherFlavor::RMPlus), Setup::Alternating},
      {LearnerSpec::gradient({1.0, AdOGDMode::Theorem}), Setup::Extragradient},
      {LearnerSpec::gradient({1.0, AdOGDMode::Theorem}), Setup::Simultaneous},
  };
  std::map<std::string, Check> checks;
  for (const auto& g : games) {
    for (const auto& a : algos) {
      RunConfig cfg;
      cfg.x_learner = cfg.y_learner = a.spec;
      cfg.setup = a.setup;
      cfg.iterations = 10000;
      const Trace trace = run_self_play(g.game, cfg);
      const MonitorReport report = monitor_suite(trace, cfg);
      for (const auto& e : report.entries) {
        auto it = checks.try_emplace(e.monitor, e.monitor).first;
        // Entries carry their own tolerance, so only the verdict decides the sign.
        const double slack = e.pass ? std::max(e.slack, 0.0) : std::min(e.slack, -1e-300);
        it->second(slack, [&] {
          return "game=" + g.name + " algo=" + a.spec.name() + " setup=" + to_string(a.setup) +
                 " iter=" + std::to_string(e.iter) + " slack=" + std::to_string(e.slack);
        });
      }
    }
  }
  SuiteResult out{"rvu", {}};
  for (const auto& [name, c] : checks) out.properties.push_back(c.result());
  return out;
}

SuiteResult verify_lemma_c(std::uint64_t seed, long instances) {
  std::mt19937_64 g(seed);
  Check improve("one_step_improvement");
  for (long i = 0; i < instances; ++i) {
    const auto n = static_cast<std::size_t>(uniform_int(g, 1, 10));
    const double scale = std::pow(10.0, uniform_real(g, -2.0, 2.0));
    Vector r(n, 0.0);
    if (i % 20 != 0) {
      for (double& e : r) e = uniform_real(g, 0.0, 1.0) < 0.3 ? 0.0 : uniform_real(g, 0.0, scale);
    }
    const Vector u = random_vector(g, n, -1.0, 1.0);
    const SimplexVector x = normalize_positive_part(r);
    const double xu = dot(x, u);
    Vector r2(n);
    for (std::size_t a = 0; a < n; ++a) r2[a] = std::max(r[a] + u[a] - xu, 0.0);
    const double l1 = positive_part_sum(r2);
    if (l1 <= 0.0) continue;
    Vector x2(n);
    for (std::size_t a = 0; a < n; ++a) x2[a] = r2[a] / l1;
    const double gain = dot(x2, u) - xu;
    const double best = *std::max_element(u.begin(), u.end()) - xu;
    improve(gain - best * best / l1 + 1e-12,
            [&] { return seed_str(seed, i) + " r=" + vec_str(r) + " u=" + vec_str(u); });
  }
  return {"lemmaC", {improve.result()}};
}

namespace {

struct Sequence {
  std::vector<SimplexVector> x, y;
};

Sequence play(const NormalFormGame& game, const LearnerSpec& spec, Setup setup, long rounds) {
  auto lx = make_learner(spec, game.rows());
  auto ly = make_learner(spec, game.cols());
  Sequence seq;
  Vector ux(game.rows(), 0.0), uy(game.cols(), 0.0);
  auto neg_t = [&](const SimplexVector& x) {
    Vector v = game.apply_transpose(x);
    for (double& e : v) e = -e;
    return v;
  };
  for (long t = 0; t < rounds; ++t) {
    SimplexVector x, y;
    if (setup == Setup::Extragradient) {
      const SimplexVector xh = lx->extrapolation_strategy();
      const SimplexVector yh = ly->extrapolation_strategy();
      x = lx->next_strategy(game.apply(yh));
      y = ly->next_strategy(neg_t(xh));
    } else {
      x = lx->next_strategy(ux);
      y = ly->next_strategy(uy);
    }
    ux = game.apply(y);
    uy = neg_t(x);
    lx->observe_utility(ux);
    ly->observe_utility(uy);
    seq.x.push_back(std::move(x));
    seq.y.push_back(std::move(y));
  }
  return seq;
}

double sup_distance(const Sequence& a, const Sequence& b) {
  double d = 0.0;
  for (std::size_t t = 0; t < a.x.size(); ++t) {
    for (std::size_t i = 0; i < a.x[t].size(); ++i) d = std::max(d, std::abs(a.x[t][i] - b.x[t][i]));
    for (std::size_t j = 0; j < a.y[t].size(); ++j) d = std::max(d, std::abs(a.y[t][j] - b.y[t][j]));
  }
  return d;
}

}  // namespace

SuiteResult verify_scale(std::uint64_t seed, long rounds) {
  (void)seed;
  const NormalFormGame game = counterexample_game();
  struct Algo {
    LearnerSpec spec;
    Setup setup;
  };
  const std::vector<Algo> algos{
      {LearnerSpec::regret_matching(MatcherFlavor::IRPRMPlus), Setup::Extragradient},
      {LearnerSpec::regret_matching(MatcherFlavor::IRPRMPlus), Setup::Simultaneous},
      {LearnerSpec::regret_matching(MatcherFlavor::PRMPlus), Setup::Simultaneous},
      {LearnerSpec::gradient({1.0, AdOGDMode::ScaleInvariant}), Setup::Extragradient},
      {LearnerSpec::gradient({1.0, AdOGDMode::ScaleInvariant}), Setup::Simultaneous},
  };
  Check scale("scale_invariance");
  for (const auto& a : algos) {
    const Sequence base = play(game, a.spec, a.setup, rounds);
    for (double c : {1e-3, 1e3}) {
      const double d = sup_distance(base, play(game.scaled(c), a.spec, a.setup, rounds));
      scale(1e-7 - d, [&] {
        return "algo=" + a.spec.name() + " setup=" + to_string(a.setup) + " c=" + std::to_string(c) +
               " sup=" + std::to_string(d);
      });
    }
  }
  return {"scale", {scale.result()}};
}

}  // namespace rmsolve
