#include <algorithm>
#include <cmath>
#include <limits>

#include "rmsolve/driver.hpp"

namespace rmsolve {

bool MonitorReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const MonitorEntry& e) { return e.pass; });
}

double MonitorReport::worst_slack(const std::string& monitor) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) {
    if (e.monitor == monitor) worst = std::min(worst, e.slack);
  }
  return worst;
}

std::size_t MonitorReport::count(const std::string& monitor) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [&](const MonitorEntry& e) { return e.monitor == monitor; }));
}

namespace {

const LearnerSpec& spec_for(const RunConfig& cfg, Player p) {
  return p == Player::X ? cfg.x_learner : cfg.y_learner;
}

bool is_matcher(const LearnerSpec& s, std::initializer_list<MatcherFlavor> flavors) {
  if (s.kind != LearnerSpec::Kind::Matcher) return false;
  return std::find(flavors.begin(), flavors.end(), s.flavor) != flavors.end();
}

void add(MonitorReport& report, const char* name, Player p, long iter, double slack, double tol) {
  report.entries.push_back({name, p, iter, slack, slack >= -tol});
}

}  // namespace

MonitorReport monitor_suite(const Trace& trace, const RunConfig& cfg) {
  MonitorReport report;

  for (const auto& r : trace.records) {
    const double td = static_cast<double>(r.iter);
    const double prop1 = std::abs(r.gap_avg_uniform - (r.reg_x + r.reg_y) / td);
    add(report, "prop1", Player::X, r.iter, 1e-8 - prop1, 0.0);
    add(report, "fact2", Player::X, r.iter, r.reg_x + r.reg_y, 1e-9);
  }

  for (const auto& s : trace.samples) {
    const LearnerSpec& spec = spec_for(cfg, s.player);
    // Tree runs only report the regret decomposition.
    if (trace.tree_game) {
      if (s.has_local_regret) {
        const double bound = s.local_positive_regret;
        const double tol = 1e-6 * std::max(1.0, std::abs(bound));
        add(report, "cfr_domination", s.player, s.iter, bound - s.learner_regret, tol);
      }
      continue;
    }
    if (cfg.learner_factory) continue;

    const bool increasing = is_matcher(spec, {MatcherFlavor::IRPRM, MatcherFlavor::IRPRMPlus});
    const bool classical = is_matcher(spec, {MatcherFlavor::RM, MatcherFlavor::RMPlus});

    if (increasing || classical) {
      add(report, "regret_norm_monotone", s.player, s.iter, 1e-9 - s.max_rnorm_drop, 0.0);
      const double cap = s.initial_norm_sq + s.sum_g_sq;
      const double lhs = s.rnorm * s.rnorm;
      add(report, "regret_norm_bound", s.player, s.iter, cap - lhs, 1e-6 * std::max(1.0, cap));
    }
    if (increasing && !spec.matcher.ir_truncate_g) {
      const double n = static_cast<double>(s.actions);
      const double bound = std::sqrt(s.initial_norm_sq + s.sum_g_sq) - s.ir_movement_term / (2.0 * n);
      add(report, "ir_rvu", s.player, s.iter, bound - s.learner_regret, 1e-6);
    }
    if (spec.kind == LearnerSpec::Kind::Gradient && spec.adogd.mode == AdOGDMode::Theorem &&
        s.adogd_active) {
      const double D2 = kSimplexDiameter * kSimplexDiameter;
      const double first = D2 / s.last_eta + s.sum_eta_mis - s.sum_path_over_2eta;
      add(report, "adogd_first_bound", s.player, s.iter, first - s.adogd_regret, 1e-6);
      const double eta = s.eta_base;
      const double modified =
          (3.0 * eta * s.spread_bound / s.delta + D2 / eta) * std::sqrt(s.sum_mis) -
          s.delta / (2.0 * eta) * s.sum_path;
      add(report, "adogd_modified_rvu", s.player, s.iter, modified - s.adogd_regret, 1e-6);
    }
  }
  return report;
}

}  // namespace rmsolve
