#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hwsim/comm.hpp"
#include "hwsim/mc.hpp"

using namespace hwsim;
using namespace hwsim::comm;
using sources::SourceModel;
using sources::SourceParams;

namespace {

/// Independent oracle for the setting-(a) conditional distribution: given OK,
/// two timeslots see +1 with probability a^2 (Psi outcomes) and two with b^2
/// (Phi outcomes). Enumerates the 2^4 sign patterns directly.
std::map<int, double> conditional_sum_oracle(double a2) {
  const double b2 = 1.0 - a2;
  const double up[4] = {a2, a2, b2, b2};
  std::map<int, double> dist;
  for (int pat = 0; pat < 16; ++pat) {
    double p = 1.0;
    int sum = 0;
    for (int t = 0; t < 4; ++t) {
      if ((pat >> t) & 1) {
        p *= up[t];
        sum += 1;
      } else {
        p *= 1.0 - up[t];
        sum -= 1;
      }
    }
    dist[sum] += p;
  }
  return dist;
}

/// Brute-force misdecode oracle over all 2^(4N) outcome patterns.
double misdecode_oracle(double a2, int n) {
  const double b2 = 1.0 - a2;
  const int slots = 4 * n;
  double p0 = 0.0;
  for (int pat = 0; pat < (1 << slots); ++pat) {
    double p = 1.0;
    int sum = 0;
    for (int t = 0; t < slots; ++t) {
      const double up = t < 2 * n ? a2 : b2;
      if ((pat >> t) & 1) {
        p *= up;
        sum += 1;
      } else {
        p *= 1.0 - up;
        sum -= 1;
      }
    }
    if (sum == 0) p0 += p;
  }
  return p0;
}

bool dists_close(const SpinSumDist& x, const SpinSumDist& y, double tol = 1e-9) {
  for (int s = -8; s <= 8; ++s) {
    const double px = x.count(s) ? x.at(s) : 0.0;
    const double py = y.count(s) ? y.at(s) : 0.0;
    if (std::abs(px - py) > tol) return false;
  }
  return true;
}

const double kGrid[9] = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};

}  // namespace

TEST_CASE("criterion Q counts each outcome exactly N times") {
  const std::uint8_t good[] = {2, 0, 3, 1};
  CHECK(criterion_q(good, 1));
  const std::uint8_t bad[] = {0, 0, 2, 3};
  CHECK_FALSE(criterion_q(bad, 1));
  const std::uint8_t n2[] = {0, 1, 2, 3, 3, 2, 1, 0};
  CHECK(criterion_q(n2, 2));
  const std::uint8_t wrong_len[] = {0, 1, 2};
  CHECK_THROWS_AS(criterion_q(wrong_len, 1), std::invalid_argument);
}

TEST_CASE("setting (a) conditional distribution matches the enumeration oracle") {
  for (double a2 : kGrid) {
    const SourceParams p = SourceParams::from_a2(a2);
    const SpinSumDist got = spin_sum_distribution_exact(SourceModel::honest(), p,
                                                        CommSetting::A_Bell, true);
    CHECK(dists_close(got, conditional_sum_oracle(a2)));
  }
}

TEST_CASE("setting (a) at a=b gives the frozen rationals") {
  const SourceParams p = SourceParams::from_a2(0.5);
  const SpinSumDist d = spin_sum_distribution_exact(SourceModel::honest(), p,
                                                    CommSetting::A_Bell, true);
  CHECK(d.at(0) == doctest::Approx(3.0 / 8).epsilon(1e-12));
  CHECK(d.at(2) == doctest::Approx(1.0 / 4).epsilon(1e-12));
  CHECK(d.at(-2) == doctest::Approx(1.0 / 4).epsilon(1e-12));
  CHECK(d.at(4) == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(d.at(-4) == doctest::Approx(1.0 / 16).epsilon(1e-12));
}

TEST_CASE("setting (b) conditional distribution is a point mass at zero") {
  for (double a2 : {0.25, 0.5, 0.625}) {
    const SourceParams p = SourceParams::from_a2(a2);
    for (const SourceModel& m :
         {SourceModel::honest(), SourceModel::separable(), SourceModel::coins()}) {
      const SpinSumDist d = spin_sum_distribution_exact(m, p, CommSetting::B_ZZ, true);
      CHECK(d.at(0) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate coefficients collapse setting (a) to a point mass") {
  const SourceParams p = SourceParams::from_a2(1.0);
  const SpinSumDist d = spin_sum_distribution_exact(SourceModel::honest(), p,
                                                    CommSetting::A_Bell, true);
  CHECK(d.at(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(misdecode_probability(p, 1) == doctest::Approx(1.0));
}

TEST_CASE("three-way equivalence on the a^2 grid") {
  for (double a2 : kGrid) {
    const SourceParams p = SourceParams::from_a2(a2);
    for (CommSetting setting : {CommSetting::A_Bell, CommSetting::B_ZZ}) {
      const double ok_h = ok_probability_exact(SourceModel::honest(), p, setting);
      const double ok_s = ok_probability_exact(SourceModel::separable(), p, setting);
      const double ok_c = ok_probability_exact(SourceModel::coins(), p, setting);
      CHECK(std::abs(ok_h - ok_s) < 1e-9);
      CHECK(std::abs(ok_h - ok_c) < 1e-9);
      if (ok_h < 1e-12) continue;  // endpoint of the (b) setting
      const SpinSumDist dh =
          spin_sum_distribution_exact(SourceModel::honest(), p, setting, true);
      const SpinSumDist ds =
          spin_sum_distribution_exact(SourceModel::separable(), p, setting, true);
      const SpinSumDist dc =
          spin_sum_distribution_exact(SourceModel::coins(), p, setting, true);
      CHECK(dists_close(dh, ds));
      CHECK(dists_close(dh, dc));
      // unconditioned distributions agree as well
      const SpinSumDist uh =
          spin_sum_distribution_exact(SourceModel::honest(), p, setting, false);
      const SpinSumDist uc =
          spin_sum_distribution_exact(SourceModel::coins(), p, setting, false);
      CHECK(dists_close(uh, uc));
    }
  }
}

TEST_CASE("OK probabilities: 3/32 for Bell everywhere, the quartic for pairs") {
  for (double a2 : kGrid) {
    const SourceParams p = SourceParams::from_a2(a2);
    CHECK(ok_probability_exact(SourceModel::honest(), p, CommSetting::A_Bell) ==
          doctest::Approx(3.0 / 32).epsilon(1e-12));
    CHECK(ok_probability_exact(SourceModel::coins(), p, CommSetting::A_Bell) ==
          doctest::Approx(3.0 / 32).epsilon(1e-12));
    const double b2 = 1.0 - a2;
    const double want = 24.0 * (a2 / 2) * (a2 / 2) * (b2 / 2) * (b2 / 2);
    CHECK(ok_probability_exact(SourceModel::honest(), p, CommSetting::B_ZZ) ==
          doctest::Approx(want).epsilon(1e-9));
  }
  // equals 3/32 only at a = b
  const SourceParams even = SourceParams::from_a2(0.5);
  CHECK(ok_probability_exact(SourceModel::honest(), even, CommSetting::B_ZZ) ==
        doctest::Approx(3.0 / 32).epsilon(1e-12));
}

TEST_CASE("moments of the protocol distributions") {
  const SourceParams p = SourceParams::from_a2(0.5);
  const Moments ma = moments(spin_sum_distribution_exact(SourceModel::honest(), p,
                                                         CommSetting::A_Bell, true));
  CHECK(std::abs(ma.mean) < 1e-12);
  CHECK(ma.second == doctest::Approx(4.0).epsilon(1e-12));
  const Moments mb = moments(spin_sum_distribution_exact(SourceModel::honest(), p,
                                                         CommSetting::B_ZZ, true));
  CHECK(std::abs(mb.mean) < 1e-12);
  CHECK(std::abs(mb.second) < 1e-12);
  // coin moments follow E[s^2] = 16 a^2 b^2 (integer-sum units)
  for (double a2 : {0.25, 0.7}) {
    const SourceParams q = SourceParams::from_a2(a2);
    const Moments mc = moments(spin_sum_distribution_exact(SourceModel::coins(), q,
                                                           CommSetting::A_Bell, true));
    CHECK(mc.second == doctest::Approx(16.0 * a2 * (1 - a2)).epsilon(1e-9));
  }
}

TEST_CASE("misdecode probability: closed form, N=2 value, monotone in N") {
  for (double a2 : kGrid) {
    const SourceParams p = SourceParams::from_a2(a2);
    const double a4 = a2 * a2, b2 = 1 - a2, b4 = b2 * b2;
    const double closed = a4 * a4 + 4 * a4 * b4 + b4 * b4;
    CHECK(std::abs(misdecode_probability(p, 1) - closed) < 1e-12);
    CHECK(std::abs(misdecode_probability(p, 1) - misdecode_oracle(a2, 1)) < 1e-12);
  }
  const SourceParams even = SourceParams::from_a2(0.5);
  CHECK(misdecode_probability(even, 2) == doctest::Approx(70.0 / 256).epsilon(1e-12));
  CHECK(std::abs(misdecode_probability(even, 2) - misdecode_oracle(0.5, 2)) < 1e-12);
  double prev = 1.0;
  for (int n = 1; n <= 6; ++n) {
    const double cur = misdecode_probability(even, n);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(misdecode_probability(even, 0), std::invalid_argument);
}

TEST_CASE("coin conditionals") {
  const SourceParams p = SourceParams::from_a2(0.3);
  const CoinConditionals c = coin_conditionals(p);
  CHECK(c.p_minus_given_minus == doctest::Approx(0.7));
  CHECK(c.p_plus_given_minus == doctest::Approx(0.3));
  CHECK(c.p_minus_given_plus == doctest::Approx(0.3));
  CHECK(c.p_plus_given_plus == doctest::Approx(0.7));
  const SourceParams one = SourceParams::from_a2(1.0);
  CHECK(coin_conditionals(one).p_minus_given_plus == doctest::Approx(1.0));
}

TEST_CASE("decode_setting") {
  CHECK(decode_setting(4) == DecodedSetting::CertainlyA);
  CHECK(decode_setting(-2) == DecodedSetting::CertainlyA);
  CHECK(decode_setting(0) == DecodedSetting::GuessB);
}

TEST_CASE("run_group: honest setting (b) forces zero sums on OK groups") {
  const SourceParams p = SourceParams::from_a2(0.5);
  Rng rng(99);
  int ok_seen = 0;
  for (int i = 0; i < 4000 && ok_seen < 50; ++i) {
    const GroupTranscript t =
        run_group(SourceModel::honest(), p, CommSetting::B_ZZ, rng);
    CHECK(t.alice_codes.size() == 4);
    if (t.ok) {
      ++ok_seen;
      CHECK(t.bob_spin_sum == 0);
      CHECK(t.alice2_spin_sum == 0);
    }
  }
  CHECK(ok_seen >= 50);
}

TEST_CASE("run_group: coin groups at setting (b) also lock to zero") {
  const SourceParams p = SourceParams::from_a2(0.5);
  Rng rng(42);
  int ok_seen = 0;
  for (int i = 0; i < 4000 && ok_seen < 50; ++i) {
    const GroupTranscript t = run_group(SourceModel::coins(), p, CommSetting::B_ZZ, rng);
    if (t.ok) {
      ++ok_seen;
      CHECK(t.bob_spin_sum == 0);
    }
  }
  CHECK(ok_seen >= 50);
}

TEST_CASE("fixed sequence: OK needs a complementary particle-1 pattern") {
  // oracle: with the particle-2 pattern fixed to C (up up down down), criterion
  // Q holds iff particle 1 reads distinct values within each half, so
  // P(OK) = (2 a^2 b^2)^2; Bob's pattern 3 always sums to zero.
  const double a2 = 0.3;
  const SourceParams p = SourceParams::from_a2(a2);
  const SourceModel m = SourceModel::fixed_sequence(0xC, 0x3);
  const double want = 4.0 * a2 * a2 * (1 - a2) * (1 - a2);
  CHECK(ok_probability_exact(m, p, CommSetting::B_ZZ) ==
        doctest::Approx(want).epsilon(1e-9));
  const SpinSumDist d = spin_sum_distribution_exact(m, p, CommSetting::B_ZZ, true);
  CHECK(d.at(0) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(7);
  int ok_seen = 0;
  for (int i = 0; i < 2000 && ok_seen < 30; ++i) {
    const GroupTranscript t = run_group(m, p, CommSetting::B_ZZ, rng);
    if (t.ok) {
      ++ok_seen;
      CHECK(t.bob_spin_sum == 0);
    }
  }
  CHECK(ok_seen >= 30);
}

TEST_CASE("tuned-ones source never satisfies criterion Q at setting (b)") {
  const SourceParams p = SourceParams::from_a2(0.5);
  CHECK(ok_probability_exact(SourceModel::tuned_ones(), p, CommSetting::B_ZZ) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(spin_sum_distribution_exact(SourceModel::tuned_ones(), p,
                                              CommSetting::B_ZZ, true),
                  std::domain_error);
}

TEST_CASE("Monte Carlo frequencies converge to the exact maps") {
  const SourceParams p = SourceParams::from_a2(0.5);
  for (const SourceModel& m :
       {SourceModel::honest(), SourceModel::separable(), SourceModel::coins()}) {
    const mc::SpinSumCounts counts =
        mc::spin_sum_mc(m, p, CommSetting::A_Bell, 120000, 777, 2);
    const double p_ok = 3.0 / 32;
    CHECK(std::abs(static_cast<double>(counts.ok) / counts.attempts - p_ok) <
          3.0 * std::sqrt(p_ok * (1 - p_ok) / counts.attempts));
    const SpinSumDist exact =
        spin_sum_distribution_exact(m, p, CommSetting::A_Bell, true);
    for (const auto& [s, prob] : exact) {
      const double freq = counts.given_ok.count(s)
                              ? static_cast<double>(counts.given_ok.at(s)) / counts.ok
                              : 0.0;
      CHECK(std::abs(freq - prob) < 3.0 * std::sqrt(prob * (1 - prob) / counts.ok));
    }
  }
}

TEST_CASE("group size N=2 keeps the exact machinery consistent") {
  const SourceParams p = SourceParams::from_a2(0.5, 2);
  const double ok = ok_probability_exact(SourceModel::honest(), p, CommSetting::A_Bell);
  // multinomial: 8!/(2!^4) / 4^8
  CHECK(ok == doctest::Approx(2520.0 / 65536.0).epsilon(1e-12));
  const SpinSumDist d =
      spin_sum_distribution_exact(SourceModel::honest(), p, CommSetting::A_Bell, true);
  CHECK(d.at(0) == doctest::Approx(70.0 / 256).epsilon(1e-12));
  CHECK(moments(d).second == doctest::Approx(8.0).epsilon(1e-12));
}
