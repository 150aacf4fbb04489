#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hwsim/adversary.hpp"
#include "hwsim/qkd.hpp"
#include "hwsim/report.hpp"

using namespace hwsim;
using namespace hwsim::qkd;
using adversary::EveStrategy;
using sources::SourceModel;
using sources::SourceParams;

namespace {
const SourceParams kEven = SourceParams::from_a2(0.5);

double sigma3(double p, double n) { return 3.0 * std::sqrt(p * (1 - p) / n); }
}  // namespace

TEST_CASE("alice_setting_for and announced_encoding") {
  CHECK(alice_setting_for(1, 0) == AliceSetting::Bell);
  CHECK(alice_setting_for(1, 1) == AliceSetting::Bell);
  CHECK(alice_setting_for(0, 0) == AliceSetting::PairZZ);
  CHECK(alice_setting_for(0, 1) == AliceSetting::PairXX);
  CHECK_THROWS_AS(alice_setting_for(2, 0), std::invalid_argument);
  CHECK(announced_encoding(0, 0) == 'b');
  CHECK(announced_encoding(1, 0) == 'b');
  CHECK(announced_encoding(1, 1) == 'c');
  CHECK(announced_basis('b') == Basis::Z);
  CHECK(announced_basis('c') == Basis::X);
}

TEST_CASE("error table, normal operation (Table 1)") {
  const ErrorTable t = error_table_exact(SourceModel::honest(), kEven);
  CHECK(t.p_ok_bit0 == doctest::Approx(6.0 / 64).epsilon(1e-12));
  CHECK(t.p_ok_bit1 == doctest::Approx(6.0 / 64).epsilon(1e-12));
  CHECK(t.p_bob0_given_ok_bit0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.p_bob0_given_ok_bit1 == doctest::Approx(3.0 / 8).epsilon(1e-12));
}

TEST_CASE("error table, Eve tunes for zeros (Table 4)") {
  const ErrorTable t = error_table_exact(SourceModel::tuned_zeros(), kEven);
  CHECK(t.p_ok_bit0 == doctest::Approx(16.0 / 64).epsilon(1e-9));
  CHECK(t.p_ok_bit1 == doctest::Approx(6.0 / 64).epsilon(1e-9));
  CHECK(t.p_bob0_given_ok_bit0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.p_bob0_given_ok_bit1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("error table, Eve tunes for ones (Table 5)") {
  const ErrorTable t = error_table_exact(SourceModel::tuned_ones(), kEven);
  CHECK(t.p_ok_bit0 == doctest::Approx(0.0));
  CHECK(t.p_ok_bit1 == doctest::Approx(6.0 / 64).epsilon(1e-9));
  CHECK(std::isnan(t.p_bob0_given_ok_bit0));
  CHECK(t.p_bob0_given_ok_bit1 == doctest::Approx(0.0));
  // Bob decodes 1 with certainty even without the OK filter
  CHECK(t.p_bob0_uncond_bit0 == doctest::Approx(0.0));
  CHECK(t.p_bob0_uncond_bit1 == doctest::Approx(0.0));
}

TEST_CASE("error table, Eve's tuned mixture (Table 6 and Eqs. 41-43)") {
  const ErrorTable t = error_table_exact(SourceModel::mixture40(), kEven);
  CHECK(t.p_ok_bit0 == doctest::Approx(6.0 / 64).epsilon(1e-9));
  CHECK(t.p_ok_bit1 == doctest::Approx(6.0 / 64).epsilon(1e-9));
  CHECK(t.p_bob0_given_ok_bit0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.p_bob0_given_ok_bit1 == doctest::Approx(3.0 / 8).epsilon(1e-9));
  // identical to the normal-operation table
  const ErrorTable t1 = error_table_exact(SourceModel::honest(), kEven);
  CHECK(std::abs(t.p_ok_bit0 - t1.p_ok_bit0) < 1e-9);
  CHECK(std::abs(t.p_ok_bit1 - t1.p_ok_bit1) < 1e-9);
  CHECK(std::abs(t.p_bob0_given_ok_bit0 - t1.p_bob0_given_ok_bit0) < 1e-9);
  CHECK(std::abs(t.p_bob0_given_ok_bit1 - t1.p_bob0_given_ok_bit1) < 1e-9);
}

TEST_CASE("bb84 reference constants (Table 3)") {
  const Bb84Reference r = bb84_reference();
  CHECK(r.bb84_bit0_absent == 0.0);
  CHECK(r.bb84_bit1_absent == 0.0);
  CHECK(r.bb84_bit0_present == doctest::Approx(0.25));
  CHECK(r.bb84_bit1_present == doctest::Approx(0.25));
  CHECK(r.hw_bit0_absent == 0.0);
  CHECK(r.hw_bit1_absent == doctest::Approx(3.0 / 8));
  CHECK(r.hw_bit0_present == doctest::Approx(5.0 / 16));
  CHECK(r.hw_bit1_present == doctest::Approx(3.0 / 8));
}

TEST_CASE("honest session reproduces Table 1 within 3 sigma") {
  const QkdSession s = run_qkd_session(kEven, 4000, EveStrategy::none(), 2024);
  CHECK(s.untransmitted_bits == 0);
  // P(ok) per raw bit
  for (int bit = 0; bit < 2; ++bit) {
    const double p_ok =
        static_cast<double>(s.ok_by_bit[bit]) / s.attempts_by_bit[bit];
    CHECK(std::abs(p_ok - 6.0 / 64) <
          sigma3(6.0 / 64, static_cast<double>(s.attempts_by_bit[bit])));
  }
  // sifted error rates
  std::int64_t n0 = 0, n1 = 0, e01 = 0, e10 = 0;
  for (const SiftedBit& b : s.sifted) {
    if (b.alice_bit == 0) {
      ++n0;
      e01 += b.bob_bit == 1;
    } else {
      ++n1;
      e10 += b.bob_bit == 0;
    }
  }
  CHECK(e01 == 0);  // zeros never flip
  const double r10 = static_cast<double>(e10) / n1;
  CHECK(std::abs(r10 - 3.0 / 8) < sigma3(3.0 / 8, static_cast<double>(n1)));
}

TEST_CASE("announcements leak nothing about the raw key") {
  const QkdSession s = run_qkd_session(kEven, 6000, EveStrategy::none(), 77);
  for (int bit = 0; bit < 2; ++bit) {
    const double n = static_cast<double>(s.ok_by_bit[bit]);
    const double b_frac = s.announce_b_by_bit[bit] / n;
    CHECK(std::abs(b_frac - 0.5) < sigma3(0.5, n));
  }
}

TEST_CASE("sifting keeps half of the OK groups") {
  const QkdSession s = run_qkd_session(kEven, 4000, EveStrategy::none(), 31);
  std::int64_t ok = 0, used = 0;
  for (const SessionGroup& g : s.groups) {
    ok += g.announced_ok;
    used += g.bob_used;
  }
  const double frac = static_cast<double>(used) / ok;
  CHECK(std::abs(frac - 0.5) < sigma3(0.5, static_cast<double>(ok)));
  // a group enters the sifted key iff OK was announced and Bob used it
  CHECK(static_cast<std::int64_t>(s.sifted.size()) == used);
  for (const SiftedBit& b : s.sifted) {
    const SessionGroup& g = s.groups[b.group_index];
    CHECK(g.announced_ok);
    CHECK(g.bob_used);
    CHECK(b.bob_bit == decode_bit(g.transcript.bob_spin_sum));
  }
}

TEST_CASE("decoding bits align with groups and drive Bob's basis") {
  const QkdSession s = run_qkd_session(kEven, 300, EveStrategy::none(), 5);
  REQUIRE(s.decoding_bits.size() == s.groups.size());
  for (std::size_t i = 0; i < s.groups.size(); ++i) {
    const Basis want = s.decoding_bits[i] == 0 ? Basis::Z : Basis::X;
    CHECK(s.groups[i].transcript.bob_basis == want);
  }
}

TEST_CASE("tuned-ones sessions never transmit zeros") {
  QkdSession s = run_qkd_session(kEven, 200, EveStrategy::replace(SourceModel::tuned_ones()),
                                 404, {0.25, 64});
  for (const SiftedBit& b : s.sifted) CHECK(b.bob_bit == 1);
  // raw-0 bits can never satisfy criterion Q under this source
  CHECK(s.ok_by_bit[0] == 0);
  CHECK(s.untransmitted_bits > 0);
}

TEST_CASE("sessions are reproducible and seed-sensitive") {
  const QkdSession a = run_qkd_session(kEven, 500, EveStrategy::none(), 11);
  const QkdSession b = run_qkd_session(kEven, 500, EveStrategy::none(), 11);
  const QkdSession c = run_qkd_session(kEven, 500, EveStrategy::none(), 12);
  REQUIRE(a.groups.size() == b.groups.size());
  CHECK(a.raw_key == b.raw_key);
  CHECK(a.sifted.size() == b.sifted.size());
  for (std::size_t i = 0; i < a.sifted.size(); ++i) {
    CHECK(a.sifted[i].key_index == b.sifted[i].key_index);
    CHECK(a.sifted[i].bob_bit == b.sifted[i].bob_bit);
  }
  CHECK(a.raw_key != c.raw_key);
  // serialization is stable too
  const auto ja = report::session_transcripts_to_json(a).dump();
  const auto jb = report::session_transcripts_to_json(b).dump();
  CHECK(ja == jb);
}

TEST_CASE("session transcript JSON carries the protocol fields") {
  const QkdSession s = run_qkd_session(kEven, 50, EveStrategy::none(), 3);
  const nlohmann::json j = report::session_transcripts_to_json(s);
  CHECK(j.contains("raw_key"));
  CHECK(j.contains("group_transcripts"));
  REQUIRE(!j["group_transcripts"].empty());
  const auto& g = j["group_transcripts"][0];
  CHECK(g.contains("setting"));
  CHECK(g.contains("bob_basis"));
  CHECK(g.contains("alice_outcomes"));
  CHECK(g.contains("bob_spin_sum"));
  CHECK(g.contains("ok"));
}

TEST_CASE("sessions with mismatched N are rejected") {
  const SourceParams p2 = SourceParams::from_a2(0.5, 2);
  CHECK_THROWS_AS(run_qkd_session(p2, 10, EveStrategy::none(), 1),
                  std::invalid_argument);
}
