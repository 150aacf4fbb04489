#include "hwsim/adversary.hpp"
#include "hwsim/qkd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hwsim::qkd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// stream tags for derived randomness
constexpr std::uint64_t kStreamKey = 0x6B65799ULL;        // raw key bits
constexpr std::uint64_t kStreamEncoding = 0x656E63ULL;    // encoding bits
constexpr std::uint64_t kStreamGroup = 0x677270ULL;       // per-(bit, attempt) group
constexpr std::uint64_t kStreamSacrifice = 0x736163ULL;   // public check coin

double p_zero(const std::map<int, double>& dist) {
  const auto it = dist.find(0);
  return it == dist.end() ? 0.0 : it->second;
}

}  // namespace

AliceSetting alice_setting_for(int raw_bit, int encoding_bit) {
  if ((raw_bit & ~1) || (encoding_bit & ~1))
    throw std::invalid_argument("alice_setting_for: bits must be 0 or 1");
  if (raw_bit == 1) return AliceSetting::Bell;
  return encoding_bit == 0 ? AliceSetting::PairZZ : AliceSetting::PairXX;
}

char announced_encoding(int raw_bit, int encoding_bit) {
  if ((raw_bit & ~1) || (encoding_bit & ~1))
    throw std::invalid_argument("announced_encoding: bits must be 0 or 1");
  return encoding_bit == 0 ? 'b' : 'c';
}

Basis announced_basis(char label) {
  if (label == 'b') return Basis::Z;
  if (label == 'c') return Basis::X;
  throw std::invalid_argument("announced_basis: label must be 'b' or 'c'");
}

ErrorTable error_table_exact(const SourceModel& source, const SourceParams& params) {
  const sources::GroupModel gm = sources::resolve_group_model(source, params);
  // The protocol tables treat Alice's local results as basis-symmetric noise;
  // operationally her particle-1 qubit enters dephased in Z.
  const auto anc = sources::AncillaMode::Dephased;

  ErrorTable t;
  // raw bit 0: setting = encoding, Bob keeps matching-basis runs only.
  const engine::ExactGroup zz =
      engine::exact_group(gm, anc, AliceSetting::PairZZ, Basis::Z);
  const engine::ExactGroup xx =
      engine::exact_group(gm, anc, AliceSetting::PairXX, Basis::X);
  t.p_ok_bit0 = 0.5 * (zz.p_ok + xx.p_ok);
  if (t.p_ok_bit0 > engine::kZeroProb) {
    t.p_bob0_given_ok_bit0 = (0.5 * zz.p_ok * p_zero(zz.bob_given_ok) +
                              0.5 * xx.p_ok * p_zero(xx.bob_given_ok)) /
                             t.p_ok_bit0;
  } else {
    t.p_bob0_given_ok_bit0 = kNaN;
  }
  t.p_bob0_uncond_bit0 = 0.5 * (p_zero(zz.bob_uncond) + p_zero(xx.bob_uncond));

  // raw bit 1: Bell setting; the announcement is the uniform encoding bit and
  // Bob keeps the run when his basis matches it.
  const engine::ExactGroup bz = engine::exact_group(gm, anc, AliceSetting::Bell, Basis::Z);
  const engine::ExactGroup bx = engine::exact_group(gm, anc, AliceSetting::Bell, Basis::X);
  if (std::abs(bz.p_ok - bx.p_ok) > qstate::kTol)
    throw std::logic_error("error_table_exact: Bell OK probability depends on Bob");
  t.p_ok_bit1 = bz.p_ok;
  if (t.p_ok_bit1 > engine::kZeroProb) {
    t.p_bob0_given_ok_bit1 =
        0.5 * (p_zero(bz.bob_given_ok) + p_zero(bx.bob_given_ok));
  } else {
    t.p_bob0_given_ok_bit1 = kNaN;
  }
  t.p_bob0_uncond_bit1 = 0.5 * (p_zero(bz.bob_uncond) + p_zero(bx.bob_uncond));
  return t;
}

Bb84Reference bb84_reference() { return {}; }

QkdSession run_qkd_session(const SourceParams& params, int key_len,
                           const adversary::EveStrategy& strategy, std::uint64_t seed,
                           const SessionOptions& options) {
  if (key_len < 1) throw std::invalid_argument("run_qkd_session: key_len >= 1");
  if (params.group_n != 1)
    throw std::invalid_argument("run_qkd_session: sessions are defined for N = 1");

  const bool replace = strategy.kind == adversary::EveStrategy::Kind::ReplaceSource;
  const SourceModel source = replace ? strategy.replacement : SourceModel::honest();
  sources::GroupModel gm = sources::resolve_group_model(source, params);
  const engine::GroupSampler sampler(gm, sources::AncillaMode::Dephased);
  const int n_trio = static_cast<int>(gm.trio_cases.size());

  std::optional<engine::InterceptSpec> eve_spec;
  if (strategy.kind == adversary::EveStrategy::Kind::InterceptResend)
    eve_spec = engine::InterceptSpec{strategy.policy};

  QkdSession session;
  session.params = params;
  session.source_name = source.name();
  session.strategy_name = strategy.name();
  session.seed = seed;

  {
    Rng key_rng = Rng::derive(seed, kStreamKey);
    Rng enc_rng = Rng::derive(seed, kStreamEncoding);
    for (int i = 0; i < key_len; ++i) {
      session.raw_key.push_back(key_rng.bernoulli(0.5) ? 1 : 0);
      session.encoding_bits.push_back(enc_rng.bernoulli(0.5) ? 1 : 0);
    }
  }

  for (int i = 0; i < key_len; ++i) {
    const int raw = session.raw_key[i];
    const int enc = session.encoding_bits[i];
    const AliceSetting setting = alice_setting_for(raw, enc);
    const char announce = announced_encoding(raw, enc);
    const Basis announce_b = announced_basis(announce);

    bool transmitted = false;
    for (int attempt = 0; attempt < options.max_attempts_per_bit; ++attempt) {
      Rng rng = Rng::derive(seed, kStreamGroup, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(attempt));
      const int dec = rng.bernoulli(0.5) ? 1 : 0;  // Bob's decoding bit
      const Basis bob_basis = dec == 0 ? Basis::Z : Basis::X;
      engine::GroupTranscript t = sampler.sample(setting, bob_basis, rng, eve_spec);

      SessionGroup g;
      g.key_index = i;
      g.attempt = attempt;
      g.announced_ok = t.ok;
      g.announced = t.ok ? announce : '-';
      g.bob_used = t.ok && bob_basis == announce_b;
      g.sacrificed = Rng::derive(seed, kStreamSacrifice, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(attempt))
                         .bernoulli(options.sacrifice_fraction);
      if (replace && t.eve_case >= n_trio) {
        const sources::PairCase& c = gm.pair_cases[t.eve_case - n_trio];
        g.eve_predicted_bit = announce_b == Basis::Z ? c.tuned_z : c.tuned_x;
      }
      g.transcript = std::move(t);

      session.decoding_bits.push_back(static_cast<std::uint8_t>(dec));
      ++session.attempts_by_bit[raw];
      if (g.announced_ok) {
        ++session.ok_by_bit[raw];
        if (announce == 'b') ++session.announce_b_by_bit[raw];
      }
      const bool ok = g.announced_ok;
      const bool used = g.bob_used;
      const int group_index = static_cast<int>(session.groups.size());
      session.groups.push_back(std::move(g));
      if (used) {
        const SessionGroup& back = session.groups.back();
        session.sifted.push_back({i, group_index, static_cast<std::uint8_t>(raw),
                                  static_cast<std::uint8_t>(
                                      decode_bit(back.transcript.bob_spin_sum)),
                                  back.sacrificed, back.eve_predicted_bit});
      }
      if (ok) {
        transmitted = true;
        break;
      }
    }
    if (!transmitted) ++session.untransmitted_bits;
  }
  return session;
}

}  // namespace hwsim::qkd
