#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hwsim/qstate.hpp"
#include "hwsim/rng.hpp"
#include "hwsim/sources.hpp"

namespace hwsim::engine {

using qstate::Basis;
using sources::AncillaMode;
using sources::GroupModel;
using sources::SourceParams;

/// Probabilities below this are treated as exactly zero. Every genuine
/// probability in the protocol is a small rational; smaller values are
/// rounding dust from the complex arithmetic.
inline constexpr double kZeroProb = 1e-12;

/// Alice's per-group measurement choice. Bell acts on (particle 1, particle 2)
/// per timeslot; the pair settings read both particles in one basis.
enum class AliceSetting { Bell, PairZZ, PairXX };

Basis pair_setting_basis(AliceSetting s);

/// Eve's in-flight measurement of particle 3 (intercept-resend).
enum class InterceptPolicy { PerGroup, PerParticle };
struct InterceptSpec {
  InterceptPolicy policy = InterceptPolicy::PerGroup;
};

/// Outcome alphabet: Bell outcomes 0..3 in (Psi+, Psi-, Phi+, Phi-) order, or
/// pair codes (r1_down << 1) | r2_down.
bool criterion_q(std::span<const std::uint8_t> codes, int group_n);

/// One sampled group. Results are +-1 per timeslot; alice2 carries Alice's
/// particle-2 readings for the pair settings (empty for Bell groups).
struct GroupTranscript {
  AliceSetting setting = AliceSetting::Bell;
  Basis bob_basis = Basis::Z;
  std::vector<std::uint8_t> alice_codes;
  std::vector<std::int8_t> alice2;
  bool ok = false;
  std::vector<std::int8_t> bob;
  int bob_spin_sum = 0;
  int alice2_spin_sum = 0;  // defined for pair settings
  // Eve bookkeeping
  int eve_case = -1;                   // sampled source component
  std::vector<Basis> eve_bases;        // intercept: one entry (per-group) or 4N
  std::vector<std::int8_t> eve_bits;   // intercept: measured results
};

// -- exact paths --------------------------------------------------------------

/// Per-slot joint distribution of (alice outcome code, bob result[, eve]) for
/// i.i.d. sources, computed from the one-timeslot density.
struct SlotJoint {
  std::array<double, 4> alice{};
  std::array<std::array<double, 2>, 4> joint{};  // [code][bob: 0=up,1=down]
  bool has_eve = false;
  std::array<std::array<std::array<double, 2>, 2>, 4> joint3{};  // [code][eve][bob]
};

SlotJoint slot_joint(const SourceParams& params, const Eigen::Matrix4cd& pair23,
                     AncillaMode anc, AliceSetting setting, Basis bob_basis,
                     std::optional<Basis> eve_basis = std::nullopt);

/// The coin-toss analogue of a slot joint ((c4, c1c2) pairs for setting (a)).
SlotJoint slot_joint_coins(const SourceParams& params, AliceSetting setting);

/// Alice's measurement reduced to a POVM on her particle-2 qubit.
std::array<Eigen::Matrix2cd, 4> alice_povm_on2(const SourceParams& params,
                                               AncillaMode anc, AliceSetting setting);

using Pattern16 = std::array<double, 16>;

/// |<pattern|psi>|^2 by hex digit (bit = spin up) in the given basis.
Pattern16 pattern_distribution(const qstate::StateVector& psi, Basis basis);

/// Distribution of Alice's 4-slot outcome-code pattern for a group-entangled
/// component (index = code_1*64 + code_2*16 + code_3*4 + code_4).
std::vector<double> alice_code_pattern_dist(const SourceParams& params, AncillaMode anc,
                                            AliceSetting setting,
                                            const qstate::StateVector& psi2);

/// Exact per-group results: OK probability and Bob's spin-sum distribution.
struct ExactGroup {
  double p_ok = 0.0;
  std::map<int, double> bob_given_ok;  // empty when p_ok == 0
  std::map<int, double> bob_uncond;
};

ExactGroup exact_group(const GroupModel& gm, AncillaMode anc, AliceSetting setting,
                       Basis bob_basis, std::optional<Basis> eve_basis = std::nullopt);

/// Exact joint of (Alice particle-2 pattern, Bob pattern), 16x16 by hex digit.
using Joint16 = std::array<std::array<double, 16>, 16>;
Joint16 site_pattern_joint(const GroupModel& gm, Basis alice_basis, Basis bob_basis);

/// Same-timeslot anticorrelation rate P(bob = -alice2) with both sites in
/// `basis`, averaged over slots.
double per_qubit_anticorrelation(const GroupModel& gm, Basis basis);

/// P(sum of +-1 variables = s) for independent up-probabilities.
std::map<int, double> convolve_pm(std::span<const double> up_probs);

/// (4N)! / (N!)^4 * prod p_i^N - the probability that each outcome shows up
/// exactly N times.
double multinomial_q_probability(const std::array<double, 4>& p, int group_n);

// -- sampling -----------------------------------------------------------------

/// Samples group transcripts for a resolved source model. Tables are built at
/// construction; sample() is const apart from the caller-owned Rng, so one
/// sampler can serve many threads.
class GroupSampler {
 public:
  GroupSampler(GroupModel gm, AncillaMode anc);

  const GroupModel& model() const { return gm_; }

  GroupTranscript sample(AliceSetting setting, Basis bob_basis, Rng& rng,
                         const std::optional<InterceptSpec>& eve = std::nullopt) const;

 private:
  struct PerSettingTables {
    std::array<double, 8> j2{};                      // code*2 + bob_down
    std::array<std::array<double, 16>, 2> j3{};      // [eve basis][code*4+eve_down*2+bob_down]
  };
  struct CaseTables {
    std::array<std::array<PerSettingTables, 2>, 3> sb{};  // [setting][bob basis]
  };
  struct PairTables {
    std::array<double, 16> alice_pattern_zz{};  // particle-2 pattern by hex digit
    std::array<double, 16> alice_pattern_xx{};
    std::vector<double> bell_codes;             // 256 outcome-code patterns
    std::array<double, 16> bob_z{};
    std::array<double, 16> bob_x{};
  };

  GroupTranscript sample_trio(int case_idx, AliceSetting setting, Basis bob, Rng& rng,
                              const std::optional<InterceptSpec>& eve) const;
  GroupTranscript sample_pair(int case_idx, AliceSetting setting, Basis bob,
                              Rng& rng) const;
  GroupTranscript sample_coins(AliceSetting setting, Rng& rng) const;

  GroupModel gm_;
  AncillaMode anc_;
  std::vector<double> case_weights_;
  std::vector<CaseTables> trio_tables_;
  std::vector<PairTables> pair_tables_;
  double p_r1_up_[2] = {1.0, 1.0};  // P(particle-1 result up) per basis (Z, X)
};

}  // namespace hwsim::engine
