#include "hwsim/mc.hpp"

#include <thread>
#include <vector>

#include "hwsim/adversary.hpp"
#include "hwsim/qkd.hpp"

namespace hwsim::mc {

namespace {

constexpr std::uint64_t kStreamDist = 0xD157ULL;
constexpr std::uint64_t kStreamTable = 0x7AB1EULL;

/// Run fn(chunk_result, begin, end) over [0, n) split across threads and a
/// deterministic merge; results must combine order-independently (integers).
template <typename Result, typename Fn>
Result chunked(std::int64_t n, int threads, Fn fn) {
  if (threads < 1) threads = 1;
  if (threads == 1 || n < 4096) {
    Result r{};
    fn(r, 0, n);
    return r;
  }
  std::vector<Result> partial(threads);
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&partial, t, lo, hi, &fn] { fn(partial[t], lo, hi); });
  }
  for (std::thread& th : pool) th.join();
  Result merged{};
  for (Result& p : partial) merged.merge(p);
  return merged;
}

struct SpinSumPartial {
  std::map<int, std::int64_t> given_ok;
  std::map<int, std::int64_t> all;
  std::int64_t attempts = 0;
  std::int64_t ok = 0;
  void merge(const SpinSumPartial& o) {
    for (const auto& [k, v] : o.given_ok) given_ok[k] += v;
    for (const auto& [k, v] : o.all) all[k] += v;
    attempts += o.attempts;
    ok += o.ok;
  }
};

struct CellPartial {
  ErrorCell bit[2];
  ErrorCell extra[2];  // intercept: correct/incorrect split of bit 0
  void merge(const CellPartial& o) {
    for (int i = 0; i < 2; ++i) {
      bit[i].attempts += o.bit[i].attempts;
      bit[i].ok += o.bit[i].ok;
      bit[i].used += o.bit[i].used;
      bit[i].bob0 += o.bit[i].bob0;
      extra[i].attempts += o.extra[i].attempts;
      extra[i].ok += o.extra[i].ok;
      extra[i].used += o.extra[i].used;
      extra[i].bob0 += o.extra[i].bob0;
    }
  }
};

void tally_group(ErrorCell& cell, const engine::GroupTranscript& t, bool basis_match) {
  ++cell.attempts;
  if (!t.ok) return;
  ++cell.ok;
  if (!basis_match) return;
  ++cell.used;
  if (qkd::decode_bit(t.bob_spin_sum) == 0) ++cell.bob0;
}

}  // namespace

SpinSumCounts spin_sum_mc(const SourceModel& model, const SourceParams& params,
                          comm::CommSetting setting, std::int64_t attempts,
                          std::uint64_t seed, int threads) {
  const sources::GroupModel gm = sources::resolve_group_model(model, params);
  const engine::GroupSampler sampler(gm, gm.ancilla);
  const engine::AliceSetting es = comm::to_engine_setting(setting);
  const std::uint64_t tag = kStreamDist + (setting == comm::CommSetting::A_Bell ? 0 : 1);

  SpinSumPartial r = chunked<SpinSumPartial>(
      attempts, threads, [&](SpinSumPartial& p, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          Rng rng = Rng::derive(seed, tag, static_cast<std::uint64_t>(i));
          const engine::GroupTranscript t = sampler.sample(es, qstate::Basis::Z, rng);
          ++p.attempts;
          ++p.all[t.bob_spin_sum];
          if (t.ok) {
            ++p.ok;
            ++p.given_ok[t.bob_spin_sum];
          }
        }
      });
  return {std::move(r.given_ok), std::move(r.all), r.attempts, r.ok};
}

ErrorTableCounts error_table_mc(const SourceModel& source,
                                const adversary::EveStrategy& strategy,
                                const SourceParams& params, std::int64_t groups_per_bit,
                                std::uint64_t seed, int threads) {
  const bool replace = strategy.kind == adversary::EveStrategy::Kind::ReplaceSource;
  const SourceModel effective = replace ? strategy.replacement : source;
  const sources::GroupModel gm = sources::resolve_group_model(effective, params);
  const engine::GroupSampler sampler(gm, sources::AncillaMode::Dephased);
  std::optional<engine::InterceptSpec> eve;
  if (strategy.kind == adversary::EveStrategy::Kind::InterceptResend)
    eve = engine::InterceptSpec{strategy.policy};

  CellPartial r = chunked<CellPartial>(
      2 * groups_per_bit, threads, [&](CellPartial& p, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          const int raw = i < groups_per_bit ? 0 : 1;
          Rng rng = Rng::derive(seed, kStreamTable, static_cast<std::uint64_t>(i));
          const int enc = rng.bernoulli(0.5) ? 1 : 0;
          const int dec = rng.bernoulli(0.5) ? 1 : 0;
          const qkd::AliceSetting setting = qkd::alice_setting_for(raw, enc);
          const qstate::Basis bob = dec == 0 ? qstate::Basis::Z : qstate::Basis::X;
          const qstate::Basis ann = qkd::announced_basis(qkd::announced_encoding(raw, enc));
          const engine::GroupTranscript t = sampler.sample(setting, bob, rng, eve);
          tally_group(p.bit[raw], t, bob == ann);
        }
      });
  ErrorTableCounts out;
  out.bit[0] = r.bit[0];
  out.bit[1] = r.bit[1];
  return out;
}

InterceptCounts intercept_mc(const SourceParams& params, std::int64_t groups_per_bit,
                             std::uint64_t seed, int threads) {
  const sources::GroupModel gm =
      sources::resolve_group_model(SourceModel::honest(), params);
  const engine::GroupSampler sampler(gm, sources::AncillaMode::Dephased);
  const engine::InterceptSpec eve{engine::InterceptPolicy::PerGroup};

  CellPartial r = chunked<CellPartial>(
      2 * groups_per_bit, threads, [&](CellPartial& p, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          const int raw = i < groups_per_bit ? 0 : 1;
          Rng rng = Rng::derive(seed, kStreamTable + 1, static_cast<std::uint64_t>(i));
          const int enc = rng.bernoulli(0.5) ? 1 : 0;
          const int dec = rng.bernoulli(0.5) ? 1 : 0;
          const qkd::AliceSetting setting = qkd::alice_setting_for(raw, enc);
          const qstate::Basis bob = dec == 0 ? qstate::Basis::Z : qstate::Basis::X;
          const qstate::Basis ann = qkd::announced_basis(qkd::announced_encoding(raw, enc));
          const engine::GroupTranscript t = sampler.sample(setting, bob, rng, eve);
          const bool match = bob == ann;
          if (raw == 1) {
            tally_group(p.bit[1], t, match);
          } else {
            const bool correct = !t.eve_bases.empty() && t.eve_bases.front() == ann;
            tally_group(correct ? p.extra[0] : p.extra[1], t, match);
          }
        }
      });
  return {r.extra[0], r.extra[1], r.bit[1]};
}

}  // namespace hwsim::mc
