#include "rmsolve/matchers.hpp"

#include <cmath>
#include <stdexcept>

namespace rmsolve {

namespace {

constexpr double kSnap = 1e-15;

void check_dim(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(n) + ", got " + std::to_string(v.size()) + ")");
  }
}

void clip_negative(std::vector<double>& v) {
  for (double& e : v) e = e > 0.0 ? e : 0.0;
}

}  // namespace

std::string to_string(MatcherFlavor flavor) {
  switch (flavor) {
    case MatcherFlavor::RM: return "RM";
    case MatcherFlavor::RMPlus: return "RM+";
    case MatcherFlavor::PRMPlus: return "PRM+";
    case MatcherFlavor::DCFR: return "DCFR";
    case MatcherFlavor::IRPRM: return "IR-PRM";
    case MatcherFlavor::IRPRMPlus: return "IR-PRM+";
  }
  return "?";
}

bool is_plus_flavor(MatcherFlavor flavor) {
  return flavor == MatcherFlavor::RMPlus || flavor == MatcherFlavor::PRMPlus ||
         flavor == MatcherFlavor::IRPRMPlus;
}

bool is_increasing_regret_flavor(MatcherFlavor flavor) {
  return flavor == MatcherFlavor::IRPRM || flavor == MatcherFlavor::IRPRMPlus;
}

double dcfr_positive_discount(const DcfrParams& p, long t) {
  if (!p.discount) return 1.0;
  const double ta = std::pow(static_cast<double>(t), p.alpha);
  return ta / (ta + 1.0);
}

double dcfr_negative_discount(const DcfrParams& p, long t) {
  if (!p.discount) return 1.0;
  const double tb = std::pow(static_cast<double>(t), p.beta);
  return tb / (tb + 1.0);
}

RegretMatcher::RegretMatcher(MatcherFlavor flavor, std::size_t n, MatcherOptions options)
    : RegretMatcher(flavor, std::vector<double>(n, 0.0), options) {}

RegretMatcher::RegretMatcher(MatcherFlavor flavor, std::vector<double> initial_regret,
                             MatcherOptions options)
    : flavor_(flavor), options_(options), r_tilde_(std::move(initial_regret)) {
  const std::size_t n = r_tilde_.size();
  if (n == 0) throw std::invalid_argument("RegretMatcher: need at least one action");
  for (double e : r_tilde_) {
    if (!std::isfinite(e)) throw std::invalid_argument("RegretMatcher: non-finite initial regret");
    if (is_plus_flavor(flavor_) && e < 0.0) {
      throw std::invalid_argument("RegretMatcher: initial regret must be nonnegative for " +
                                  to_string(flavor_));
    }
  }
  r_ = r_tilde_;
  m_.assign(n, 0.0);
  g_.assign(n, 0.0);
  x_tilde_ = normalize_positive_part(r_tilde_);
  x_ = x_tilde_;
  avg_sum_.assign(n, 0.0);
}

SimplexVector RegretMatcher::next_strategy(std::span<const double> prediction) {
  const std::size_t n = dimension();
  check_dim(prediction, n, "next_strategy");
  for (double& e : r_tilde_) {
    if (std::abs(e) < kSnap) e = 0.0;
  }
  gamma_.reset();
  const double tilde_norm = positive_part_norm2(r_tilde_);
  info_ = RoundInfo{};
  info_.regret_norm_before = tilde_norm;

  switch (flavor_) {
    case MatcherFlavor::RM:
    case MatcherFlavor::RMPlus:
    case MatcherFlavor::DCFR:
      m_.assign(n, 0.0);
      r_ = r_tilde_;
      x_ = normalize_positive_part(r_);
      break;
    case MatcherFlavor::PRMPlus: {
      const SimplexVector w = normalize_positive_part(r_tilde_);
      const double mw = dot(prediction, w);
      r_.resize(n);
      for (std::size_t i = 0; i < n; ++i) r_[i] = r_tilde_[i] + prediction[i] - mw;
      x_ = normalize_positive_part(r_);
      m_.assign(prediction.begin(), prediction.end());
      break;
    }
    case MatcherFlavor::IRPRM:
    case MatcherFlavor::IRPRMPlus: {
      if (tilde_norm == 0.0) {
        m_.assign(n, 0.0);
        r_ = r_tilde_;
        x_ = x_tilde_;
        break;
      }
      GammaProblem problem;
      problem.v.resize(n);
      for (std::size_t i = 0; i < n; ++i) problem.v[i] = r_tilde_[i] + prediction[i];
      problem.target = tilde_norm;
      const double gamma = gamma_solve(problem, options_.gamma_method);
      gamma_ = gamma;
      r_.resize(n);
      for (std::size_t i = 0; i < n; ++i) r_[i] = problem.v[i] - gamma;
      if (flavor_ == MatcherFlavor::IRPRMPlus) clip_negative(r_);
      x_ = normalize_positive_part(r_);
      m_.assign(prediction.begin(), prediction.end());
      break;
    }
  }
  awaiting_observe_ = true;
  return x_;
}

void RegretMatcher::observe_utility(std::span<const double> utility) {
  const std::size_t n = dimension();
  check_dim(utility, n, "observe_utility");
  if (!awaiting_observe_) {
    throw std::logic_error("observe_utility called without a preceding next_strategy");
  }
  awaiting_observe_ = false;
  ++iter_;

  // PRM+ keeps its prediction out of the accumulated regret: the recurrence
  // below runs on (r~, m = 0) for it.
  const bool prediction_enters_regret = flavor_ != MatcherFlavor::PRMPlus;
  const std::vector<double>& base = prediction_enters_regret ? r_ : r_tilde_;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mi = prediction_enters_regret ? m_[i] : 0.0;
    g_[i] = utility[i] - mi;
    mean += g_[i] * x_[i];
  }
  for (double& e : g_) e -= mean;
  info_.instantaneous_sq = norm2_sq(g_);

  std::vector<double> next(n);
  switch (flavor_) {
    case MatcherFlavor::RM:
      for (std::size_t i = 0; i < n; ++i) next[i] = base[i] + g_[i];
      break;
    case MatcherFlavor::IRPRM:
      for (std::size_t i = 0; i < n; ++i) {
        const double gi = options_.ir_truncate_g ? std::max(g_[i], 0.0) : g_[i];
        next[i] = base[i] + gi;
      }
      break;
    case MatcherFlavor::RMPlus:
    case MatcherFlavor::PRMPlus:
    case MatcherFlavor::IRPRMPlus:
      for (std::size_t i = 0; i < n; ++i) next[i] = std::max(base[i] + g_[i], 0.0);
      break;
    case MatcherFlavor::DCFR: {
      const double pos = dcfr_positive_discount(options_.dcfr, iter_);
      const double neg = dcfr_negative_discount(options_.dcfr, iter_);
      for (std::size_t i = 0; i < n; ++i) {
        const double ri = r_tilde_[i];
        next[i] = (ri > 0.0 ? pos * ri : neg * ri) + g_[i];
      }
      break;
    }
  }
  r_tilde_ = std::move(next);
  x_tilde_ = normalize_positive_part(r_tilde_);

  double decay = 1.0;
  if (flavor_ == MatcherFlavor::DCFR && iter_ > 1) {
    const double t = static_cast<double>(iter_);
    decay = std::pow((t - 1.0) / t, options_.dcfr.avg_exponent);
  }
  avg_weight_ = avg_weight_ * decay + 1.0;
  for (std::size_t i = 0; i < n; ++i) avg_sum_[i] = avg_sum_[i] * decay + x_[i];
}

SimplexVector RegretMatcher::extrapolation_strategy() {
  return next_strategy(std::vector<double>(dimension(), 0.0));
}

double RegretMatcher::regret_norm() const { return positive_part_norm2(r_tilde_); }

std::unique_ptr<OnlineLearner> RegretMatcher::clone() const {
  return std::make_unique<RegretMatcher>(*this);
}

SimplexVector RegretMatcher::weighted_average() const {
  if (avg_weight_ <= 0.0) return x_tilde_;
  SimplexVector out(avg_sum_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = avg_sum_[i] / avg_weight_;
  return out;
}

}  // namespace rmsolve
