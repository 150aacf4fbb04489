#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hwsim/engine.hpp"
#include "hwsim/sources.hpp"

namespace hwsim::adversary {
struct EveStrategy;
}  // namespace hwsim::adversary

namespace hwsim::qkd {

using engine::AliceSetting;
using qstate::Basis;
using sources::SourceModel;
using sources::SourceParams;

/// Raw bit 1 -> Bell measurements; raw bit 0 -> the encoding bit picks the
/// (b) Z-pair or (c) X-pair setting.
AliceSetting alice_setting_for(int raw_bit, int encoding_bit);

/// What Alice announces after an OK: always the encoding label, 'b' (= Z) or
/// 'c' (= X). For raw bit 1 this is uniform noise.
char announced_encoding(int raw_bit, int encoding_bit);

Basis announced_basis(char label);

/// Exact per-raw-bit table (the shape of Tables 1, 4, 5, 6): P(OK) and Bob's
/// decoded-bit probabilities over sifted runs. Conditional entries are NaN
/// when P(OK) vanishes for that raw bit; the unconditional columns hold the
/// decode probabilities without the OK filter.
struct ErrorTable {
  double p_ok_bit0 = 0.0;
  double p_ok_bit1 = 0.0;
  double p_bob0_given_ok_bit0 = 0.0;
  double p_bob0_given_ok_bit1 = 0.0;
  double p_bob0_uncond_bit0 = 0.0;
  double p_bob0_uncond_bit1 = 0.0;
};

/// Exact enumeration over the protocol's measurement set for any source
/// model (honest or one of Eve's replacements).
ErrorTable error_table_exact(const SourceModel& source, const SourceParams& params);

/// Table 3 constants: P(error) per raw bit with and without Eve, for BB84 and
/// for this protocol.
struct Bb84Reference {
  double bb84_bit0_absent = 0.0;
  double bb84_bit1_absent = 0.0;
  double bb84_bit0_present = 0.25;
  double bb84_bit1_present = 0.25;
  double hw_bit0_absent = 0.0;
  double hw_bit1_absent = 3.0 / 8.0;
  double hw_bit0_present = 5.0 / 16.0;
  double hw_bit1_present = 3.0 / 8.0;
};
Bb84Reference bb84_reference();

// -- sessions -----------------------------------------------------------------

struct SessionOptions {
  double sacrifice_fraction = 0.25;
  int max_attempts_per_bit = 4096;  // gives up on a key bit after this many groups
};

struct SessionGroup {
  int key_index = 0;
  int attempt = 0;
  engine::GroupTranscript transcript;
  bool announced_ok = false;
  char announced = '-';  // 'b'/'c', only meaningful when announced_ok
  bool bob_used = false;
  bool sacrificed = false;
  int eve_predicted_bit = -1;  // bob's bit as Eve expects it, -1 unknown
};

struct SiftedBit {
  int key_index = 0;
  int group_index = 0;
  std::uint8_t alice_bit = 0;
  std::uint8_t bob_bit = 0;
  bool sacrificed = false;
  int eve_predicted_bit = -1;
};

struct QkdSession {
  SourceParams params;
  std::string source_name;
  std::string strategy_name;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> raw_key;
  std::vector<std::uint8_t> encoding_bits;
  std::vector<std::uint8_t> decoding_bits;  // one per group, aligned with groups
  std::vector<SessionGroup> groups;
  std::vector<SiftedBit> sifted;
  std::int64_t attempts_by_bit[2] = {0, 0};
  std::int64_t ok_by_bit[2] = {0, 0};
  std::int64_t announce_b_by_bit[2] = {0, 0};
  std::int64_t untransmitted_bits = 0;  // key bits that never produced an OK
};

/// Run the full protocol: per raw-key bit, groups are retried until criterion
/// Q holds (or the attempt cap is hit), Alice announces OK plus the encoding,
/// Bob filters on basis match and decodes nonzero spin sums as 1. A publicly
/// seeded coin marks check (sacrificed) groups for the security tests.
QkdSession run_qkd_session(const SourceParams& params, int key_len,
                           const adversary::EveStrategy& strategy, std::uint64_t seed,
                           const SessionOptions& options = {});

/// Bob's decoding rule.
inline int decode_bit(int spin_sum) { return spin_sum != 0 ? 1 : 0; }

}  // namespace hwsim::qkd
