#pragma once

#include <map>
#include <span>

#include "hwsim/engine.hpp"
#include "hwsim/sources.hpp"

namespace hwsim::comm {

using engine::GroupTranscript;
using sources::SourceModel;
using sources::SourceParams;

/// Alice's two settings in the communication protocol: (a) Bell-state
/// measurements on particles 1 and 2, or (b) S_z measurements of both.
enum class CommSetting { A_Bell, B_ZZ };

engine::AliceSetting to_engine_setting(CommSetting s);

/// Spin-sum distribution over the integer sum of +-1 results.
using SpinSumDist = std::map<int, double>;

/// True when each of the four outcomes occurs exactly N times.
bool criterion_q(std::span<const std::uint8_t> outcomes, int group_n);

/// Sample one protocol group. Bob always measures S_z3.
GroupTranscript run_group(const SourceModel& model, const SourceParams& params,
                          CommSetting setting, Rng& rng);

/// Exact distribution of Bob's spin sum, by enumeration, optionally
/// conditioned on Alice announcing OK. Throws std::domain_error when
/// conditioning on an event of probability zero.
SpinSumDist spin_sum_distribution_exact(const SourceModel& model,
                                        const SourceParams& params, CommSetting setting,
                                        bool condition_ok);

/// Exact probability that criterion Q holds.
double ok_probability_exact(const SourceModel& model, const SourceParams& params,
                            CommSetting setting);

struct Moments {
  double mean = 0.0;
  double second = 0.0;  // E[s^2] in integer-sum units
};
Moments moments(const SpinSumDist& dist);

/// P(spin sum = 0 | setting (a), OK): the probability that Bob mistakes
/// setting (a) for (b). Exact convolution of 2N Bernoulli(a^2) and 2N
/// Bernoulli(b^2) +-1 variables.
double misdecode_probability(const SourceParams& params, int group_n);

/// The conditional table P(c3 | c1 c2) of the coin implementation.
struct CoinConditionals {
  double p_minus_given_minus;  // P(c3=-1 | c1c2=-1) = b^2
  double p_plus_given_minus;   // P(c3=+1 | c1c2=-1) = a^2
  double p_minus_given_plus;   // P(c3=-1 | c1c2=+1) = a^2
  double p_plus_given_plus;    // P(c3=+1 | c1c2=+1) = b^2
};
CoinConditionals coin_conditionals(const SourceParams& params);

enum class DecodedSetting { CertainlyA, GuessB };

/// Nonzero sums only occur for setting (a); zero favors (b).
DecodedSetting decode_setting(int spin_sum);

}  // namespace hwsim::comm
