#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hwsim/adversary.hpp"
#include "hwsim/security.hpp"

using namespace hwsim;
using namespace hwsim::security;
using adversary::EveStrategy;
using sources::SourceModel;
using sources::SourceParams;

namespace {

const SourceParams kEven = SourceParams::from_a2(0.5);

qkd::QkdSession session_for(const EveStrategy& strategy, int key_len = 3000,
                            std::uint64_t seed = 90210) {
  return qkd::run_qkd_session(kEven, key_len, strategy, seed);
}

const TestReport& find(const std::vector<TestReport>& rs, const std::string& name) {
  for (const TestReport& r : rs)
    if (r.test == name) return r;
  throw std::runtime_error("missing test report: " + name);
}

}  // namespace

// -- exact battery -------------------------------------------------------------

TEST_CASE("exact battery: honest source") {
  const ExactBattery b = exact_battery(SourceModel::honest(), kEven);
  CHECK(b.lockstep_violation < 1e-12);
  CHECK(b.cross_zero_indicator_dev < 1e-12);
  CHECK(b.cross_cond_zero_zx == doctest::Approx(6.0 / 16).epsilon(1e-9));
  CHECK(b.cross_cond_zero_xz == doctest::Approx(6.0 / 16).epsilon(1e-9));
  CHECK(b.uniformity_dev < 1e-12);
  CHECK(b.extreme_conditional == doctest::Approx(6.0 / 16).epsilon(1e-9));
  CHECK(b.per_qubit_rate_z == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.per_qubit_rate_x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.cross_full_joint_dev < 1e-12);
}

TEST_CASE("exact battery: the tuned mixture evades the error-rate test only") {
  const ExactBattery b = exact_battery(SourceModel::mixture40(), kEven);
  const ExactBattery honest = exact_battery(SourceModel::honest(), kEven);
  // error table identical to normal operation
  CHECK(std::abs(b.table.p_ok_bit0 - honest.table.p_ok_bit0) < 1e-9);
  CHECK(std::abs(b.table.p_ok_bit1 - honest.table.p_ok_bit1) < 1e-9);
  CHECK(std::abs(b.table.p_bob0_given_ok_bit0 - honest.table.p_bob0_given_ok_bit0) <
        1e-9);
  CHECK(std::abs(b.table.p_bob0_given_ok_bit1 - honest.table.p_bob0_given_ok_bit1) <
        1e-9);
  // same-setting zero lockstep still holds (the original augmented test)
  CHECK(b.lockstep_violation < 1e-12);
  // but the cross-setting zero sums are locked together, not independent
  CHECK(b.cross_zero_indicator_dev > 0.2);
  CHECK(b.cross_cond_zero_zx == doctest::Approx(1.0).epsilon(1e-9));
  // local data alone looks perfectly uniform
  CHECK(b.uniformity_dev < 1e-12);
  // extreme patterns never coexist with remote zeros
  CHECK(b.extreme_conditional == doctest::Approx(0.0));
  // and the per-qubit test nails it
  CHECK(b.per_qubit_rate_z == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(b.per_qubit_rate_x == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("exact battery: the illusion source") {
  const ExactBattery b = exact_battery(SourceModel::illusion44(), kEven);
  const ExactBattery honest = exact_battery(SourceModel::honest(), kEven);
  // error table identical to normal operation
  CHECK(std::abs(b.table.p_ok_bit0 - honest.table.p_ok_bit0) < 1e-9);
  CHECK(std::abs(b.table.p_bob0_given_ok_bit1 - honest.table.p_bob0_given_ok_bit1) <
        1e-9);
  // requirement (ii): same-setting zero lockstep
  CHECK(b.lockstep_violation < 1e-12);
  // requirement (iii): zero-sum indicators factorize across settings, and the
  // zero-conditioned rate matches the honest 6/16
  CHECK(b.cross_zero_indicator_dev < 1e-9);
  CHECK(b.cross_cond_zero_zx == doctest::Approx(6.0 / 16).epsilon(1e-9));
  CHECK(b.cross_cond_zero_xz == doctest::Approx(6.0 / 16).epsilon(1e-9));
  // requirement (iv)
  CHECK(b.uniformity_dev < 1e-9);
  // the residual imperfection: extreme local patterns exclude remote zeros
  // entirely (honest rate is 6/16), and the full spin-sum joint is not a
  // product (largest cell deviation 7/256)
  CHECK(b.extreme_conditional == doctest::Approx(0.0));
  CHECK(b.cross_full_joint_dev == doctest::Approx(7.0 / 256).epsilon(1e-6));
  // per-qubit anticorrelation collapses to a coin flip
  CHECK(b.per_qubit_rate_z == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(b.per_qubit_rate_x == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("exact battery: single tuned sources distort marginals") {
  const ExactBattery zeros = exact_battery(SourceModel::tuned_zeros(), kEven);
  CHECK(zeros.uniformity_dev > 0.05);  // patterns confined to zero-sum nibbles
  const ExactBattery ones = exact_battery(SourceModel::tuned_ones(), kEven);
  CHECK(ones.uniformity_dev > 0.01);
}

// -- sampled tests ---------------------------------------------------------------

TEST_CASE("honest session passes the battery") {
  const qkd::QkdSession s = session_for(EveStrategy::none());
  const std::vector<TestReport> rs = run_all_tests(s);
  CHECK(find(rs, "error_rate").decision == Decision::Consistent);
  CHECK(find(rs, "zero_correlation").decision == Decision::Consistent);
  CHECK(find(rs, "cross_independence").decision == Decision::Consistent);
  CHECK(find(rs, "uniformity").decision == Decision::Consistent);
  const TestReport& ext = find(rs, "extreme_value");
  CHECK(ext.decision == Decision::Consistent);
  CHECK(ext.samples >= 30);
  CHECK(find(rs, "per_qubit").decision == Decision::Consistent);
}

TEST_CASE("intercept-resend trips the error-rate test") {
  const qkd::QkdSession s = session_for(EveStrategy::intercept());
  const TestReport r = error_rate_test(s);
  CHECK(r.decision == Decision::EavesdroppingDetected);
  CHECK(r.values.at("rate_0_to_1") > 0.2);  // exact rate is 5/16
}

TEST_CASE("the tuned mixture sails through the error-rate test") {
  const qkd::QkdSession s = session_for(EveStrategy::replace(SourceModel::mixture40()));
  CHECK(error_rate_test(s).decision == Decision::Consistent);
  CHECK(spin_sum_zero_correlation_test(s).decision == Decision::Consistent);
  // ... but not through the cross-setting, extreme, or per-qubit checks
  CHECK(cross_setting_independence_test(s).decision ==
        Decision::EavesdroppingDetected);
  CHECK(extreme_value_test(s).decision == Decision::EavesdroppingDetected);
  CHECK(per_qubit_test(s).decision == Decision::EavesdroppingDetected);
  // local statistics still look perfect
  CHECK(local_uniformity_test(s).decision == Decision::Consistent);
}

TEST_CASE("the illusion source defeats every spin-sum statistic") {
  const qkd::QkdSession s = session_for(EveStrategy::replace(SourceModel::illusion44()));
  CHECK(error_rate_test(s).decision == Decision::Consistent);
  CHECK(spin_sum_zero_correlation_test(s).decision == Decision::Consistent);
  CHECK(cross_setting_independence_test(s).decision == Decision::Consistent);
  CHECK(local_uniformity_test(s).decision == Decision::Consistent);
  // detection comes only from the extreme-value conditioning and the
  // per-qubit comparison
  const TestReport ext = extreme_value_test(s);
  REQUIRE(ext.samples >= 30);
  CHECK(ext.decision == Decision::EavesdroppingDetected);
  CHECK(ext.statistic == doctest::Approx(0.0));
  const TestReport pq = per_qubit_test(s);
  CHECK(pq.decision == Decision::EavesdroppingDetected);
  CHECK(std::abs(pq.statistic - 0.5) < 0.05);
}

TEST_CASE("a constant fixed sequence is flagged by uniformity immediately") {
  const qkd::QkdSession s =
      session_for(EveStrategy::replace(SourceModel::fixed_sequence(0xC, 0x3)), 2000);
  CHECK(local_uniformity_test(s).decision == Decision::EavesdroppingDetected);
}

TEST_CASE("extreme-value test declares itself inconclusive on thin data") {
  const qkd::QkdSession s = session_for(EveStrategy::none(), 40);
  const TestReport r = extreme_value_test(s);
  CHECK(r.decision == Decision::Inconclusive);
}

TEST_CASE("test runner resolves names and rejects unknown ones") {
  const qkd::QkdSession s = session_for(EveStrategy::none(), 100);
  const auto rs = run_tests(s, {"error_rate", "per_qubit"});
  CHECK(rs.size() == 2);
  CHECK(rs[0].test == "error_rate");
  CHECK_THROWS_AS(run_tests(s, {"nonsense"}), std::invalid_argument);
}

TEST_CASE("per-qubit anticorrelation holds in both bases for the honest source") {
  const qkd::QkdSession s = session_for(EveStrategy::none(), 2000, 4);
  int z_slots = 0, x_slots = 0;
  for (const qkd::SessionGroup& g : s.groups) {
    if (!g.sacrificed) continue;
    const auto& t = g.transcript;
    if (t.setting == engine::AliceSetting::PairZZ && t.bob_basis == qstate::Basis::Z) {
      for (std::size_t i = 0; i < t.bob.size(); ++i) {
        CHECK(t.bob[i] == -t.alice2[i]);
        ++z_slots;
      }
    }
    if (t.setting == engine::AliceSetting::PairXX && t.bob_basis == qstate::Basis::X) {
      for (std::size_t i = 0; i < t.bob.size(); ++i) {
        CHECK(t.bob[i] == -t.alice2[i]);
        ++x_slots;
      }
    }
  }
  CHECK(z_slots > 100);
  CHECK(x_slots > 100);
}
