#pragma once

#include <map>
#include <string>
#include <vector>

#include "hwsim/qkd.hpp"

namespace hwsim::security {

using sources::SourceModel;
using sources::SourceParams;

enum class Decision { Consistent, EavesdroppingDetected, Inconclusive };

std::string to_string(Decision d);

/// Outcome of one statistical test over a session's check data. Thresholds
/// are pre-registered: 3-sigma binomial bounds (exact-zero baselines admit no
/// deviation at all), chi-square cutoffs df + 3*sqrt(2 df) for the
/// multi-cell tests.
struct TestReport {
  std::string test;
  Decision decision = Decision::Inconclusive;
  double statistic = 0.0;
  double expected = 0.0;
  double threshold = 0.0;
  int samples = 0;
  std::map<std::string, double> values;  // named sub-statistics for the report
  std::string note;
};

/// Sifted-key error rates on the disclosed check bits against the
/// normal-operation baseline: P(0->1) = 0 and P(1->0) = 3/8.
TestReport error_rate_test(const qkd::QkdSession& session);

/// Same-setting check groups: when Alice's particle-2 spin sum is zero, Bob's
/// must be too (and vice versa).
TestReport spin_sum_zero_correlation_test(const qkd::QkdSession& session);

/// Differing-setting check groups: the zero-sum indicators at the two sites
/// must be statistically independent (2x2 chi-square).
TestReport cross_setting_independence_test(const qkd::QkdSession& session);

/// All 16 local patterns equally probable, at each site and setting.
TestReport local_uniformity_test(const qkd::QkdSession& session);

/// Rare-event check: an extreme local pattern (hex 0 or F) must still allow
/// remote other-setting zero sums at the honest rate 6/16. Inconclusive below
/// 30 qualifying groups.
TestReport extreme_value_test(const qkd::QkdSession& session);

/// Per-timeslot anticorrelation between the sites at equal settings; the
/// honest singlet gives rate exactly 1.
TestReport per_qubit_test(const qkd::QkdSession& session);

std::vector<TestReport> run_all_tests(const qkd::QkdSession& session);

/// Run a named subset ("error_rate", "zero_correlation", "cross_independence",
/// "uniformity", "extreme", "per_qubit").
std::vector<TestReport> run_tests(const qkd::QkdSession& session,
                                  const std::vector<std::string>& names);

// -- exact battery -------------------------------------------------------------

/// Exact-path statistics of a source under the security measurements; the
/// detection-ladder comparisons are made against the honest source's values.
struct ExactBattery {
  qkd::ErrorTable table;
  /// max over bases of P(exactly one site's same-basis sum is zero)
  double lockstep_violation = 0.0;
  /// max over basis orders of |P(A0 and B0) - P(A0) P(B0)| for cross-basis sums
  double cross_zero_indicator_dev = 0.0;
  /// P(remote other-basis sum = 0 | local sum = 0), both orders (z->x, x->z)
  double cross_cond_zero_zx = 0.0;
  double cross_cond_zero_xz = 0.0;
  /// max over sites/bases of |P(pattern) - 1/16|
  double uniformity_dev = 0.0;
  /// P(remote other-basis sum = 0 | local pattern in {0, F})
  double extreme_conditional = 0.0;
  /// same-basis per-timeslot anticorrelation rates
  double per_qubit_rate_z = 0.0;
  double per_qubit_rate_x = 0.0;
  /// informational: max deviation of the full cross-basis spin-sum joint from
  /// the product of its marginals (nonzero even for the illusion source)
  double cross_full_joint_dev = 0.0;
};

ExactBattery exact_battery(const SourceModel& source, const SourceParams& params);

}  // namespace hwsim::security
