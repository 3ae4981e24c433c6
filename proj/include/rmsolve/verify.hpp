#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmsolve {

/// Outcome of one checked inequality over many instances. Slack is
/// tolerance-adjusted: an instance passes iff its slack is >= 0.
struct PropertyResult {
  std::string name;
  long checked = 0;
  long failed = 0;
  double worst_slack = 0.0;
  /// Seed and instance of the first failure.
  std::string reproducer;
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyResult> properties;
  bool pass() const;
};

/// Fuzzed gamma instances: sorted / select / bisect agreement, residual and
/// active-set consistency.
SuiteResult verify_gamma(std::uint64_t seed, long instances = 10000);
/// Random utility streams: regret-norm monotonicity, norm-preserving shift,
/// orthogonality of the instantaneous regret and the regret-norm bound.
SuiteResult verify_matchers(std::uint64_t seed, long streams = 1000, long rounds = 200);
/// Projection characterization, nonincreasing step size and both AdOGD
/// regret bounds on adversarial streams.
SuiteResult verify_gradient(std::uint64_t seed, long streams = 1000, long rounds = 500);
/// Driver monitors on self-play runs.
SuiteResult verify_rvu(std::uint64_t seed);
/// One-step improvement inequality of RM+.
SuiteResult verify_lemma_c(std::uint64_t seed, long instances = 100000);
/// Strategy sequences under rescaled utilities.
SuiteResult verify_scale(std::uint64_t seed, long rounds = 1000);

void print_suite(std::ostream& os, const SuiteResult& result);

}  // namespace rmsolve
