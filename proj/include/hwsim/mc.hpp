#pragma once

#include <cstdint>
#include <map>

#include "hwsim/adversary.hpp"
#include "hwsim/comm.hpp"

namespace hwsim::mc {

using sources::SourceModel;
using sources::SourceParams;

/// Monte Carlo spin-sum histograms for the communication protocol (Bob in Z).
/// Counts are integers so results are identical for any worker count.
struct SpinSumCounts {
  std::map<int, std::int64_t> given_ok;
  std::map<int, std::int64_t> all;
  std::int64_t attempts = 0;
  std::int64_t ok = 0;
};

SpinSumCounts spin_sum_mc(const SourceModel& model, const SourceParams& params,
                          comm::CommSetting setting, std::int64_t attempts,
                          std::uint64_t seed, int threads = 1);

/// Monte Carlo tallies for one raw-key-bit column of an error table.
struct ErrorCell {
  std::int64_t attempts = 0;
  std::int64_t ok = 0;
  std::int64_t used = 0;   // ok and Bob's basis matched the announcement
  std::int64_t bob0 = 0;   // decoded 0 among used
  double p_ok() const { return attempts ? static_cast<double>(ok) / attempts : 0.0; }
  double p_bob0() const { return used ? static_cast<double>(bob0) / used : 0.0; }
};

struct ErrorTableCounts {
  ErrorCell bit[2];
};

/// Per-group simulation of the QKD table statistics for a source model (or
/// honest source + intercept strategy). groups_per_bit attempts are run for
/// each raw-bit value.
ErrorTableCounts error_table_mc(const SourceModel& source,
                                const adversary::EveStrategy& strategy,
                                const SourceParams& params, std::int64_t groups_per_bit,
                                std::uint64_t seed, int threads = 1);

/// Intercept-resend rows of Table 2, split by whether Eve guessed the shared
/// basis (raw bit 0) plus the raw-bit-1 row.
struct InterceptCounts {
  ErrorCell bit0_correct;
  ErrorCell bit0_incorrect;
  ErrorCell bit1;
};

InterceptCounts intercept_mc(const SourceParams& params, std::int64_t groups_per_bit,
                             std::uint64_t seed, int threads = 1);

}  // namespace hwsim::mc
