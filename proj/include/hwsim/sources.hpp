#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwsim/qstate.hpp"
#include "hwsim/rng.hpp"

namespace hwsim::sources {

using qstate::Basis;
using qstate::DensityOperator;
using qstate::StateVector;

/// State coefficients (a, b) with a^2 + b^2 = 1 (a, b real) and the group
/// size N: a group spans 4N timeslots.
struct SourceParams {
  double a = 1.0 / std::numbers::sqrt2;
  double b = 1.0 / std::numbers::sqrt2;
  int group_n = 1;

  static SourceParams from_a2(double a2, int group_n = 1);
  int slots() const { return 4 * group_n; }
  void validate() const;
};

enum class SourceKind {
  HonestEntangled,
  SeparableMixed,
  ClassicalCoins,
  EveMixedBasis,
  EveFixedSequence,
  EveTunedZeros,
  EveTunedOnes,
  EveMixture40,
  EveIllusion44,
};

/// Tagged source selector. Eve kinds are restricted to N = 1 groups.
struct SourceModel {
  SourceKind kind = SourceKind::HonestEntangled;
  /// EveMixedBasis: basis of the per-slot product mixture; nullopt means the
  /// source flips a fair coin per group between the two bases.
  std::optional<Basis> mixed_basis;
  int hex2 = 0xC;  // EveFixedSequence: pattern sent to Alice's side
  int hex3 = 0x3;  // EveFixedSequence: pattern sent to Bob's side

  static SourceModel honest() { return {SourceKind::HonestEntangled, {}, 0, 0}; }
  static SourceModel separable() { return {SourceKind::SeparableMixed, {}, 0, 0}; }
  static SourceModel coins() { return {SourceKind::ClassicalCoins, {}, 0, 0}; }
  static SourceModel mixed_basis_model(std::optional<Basis> b) {
    return {SourceKind::EveMixedBasis, b, 0, 0};
  }
  static SourceModel fixed_sequence(int hex2 = 0xC, int hex3 = 0x3) {
    return {SourceKind::EveFixedSequence, {}, hex2, hex3};
  }
  static SourceModel tuned_zeros() { return {SourceKind::EveTunedZeros, {}, 0, 0}; }
  static SourceModel tuned_ones() { return {SourceKind::EveTunedOnes, {}, 0, 0}; }
  static SourceModel mixture40() { return {SourceKind::EveMixture40, {}, 0, 0}; }
  static SourceModel illusion44() { return {SourceKind::EveIllusion44, {}, 0, 0}; }

  static std::optional<SourceModel> by_name(std::string_view name);
  std::string name() const;
  bool is_eve_source() const;
};

// -- trio-level states (one timeslot) ---------------------------------------

/// Particle-1 state. Pure is the coherent a|up>+b|down>; Dephased is its
/// Z-diagonal a^2/b^2 mixture (what the cryptography tables assume).
enum class AncillaMode { Pure, Dephased };

Eigen::Matrix2cd ancilla_density(const SourceParams& params, AncillaMode mode);

/// Particles 2 and 3 of one timeslot (2-qubit density).
Eigen::Matrix4cd pair23_honest();
Eigen::Matrix4cd pair23_dephased(Basis basis);

/// The full 3-qubit emission of the honest or separable-mixed source.
DensityOperator build_trio_state(const SourceParams& params, SourceKind kind);

// -- group-level source description ------------------------------------------

/// Per-slot i.i.d. emission: every timeslot carries this particle-(2,3) state.
struct TrioCase {
  double weight = 1.0;
  Eigen::Matrix4cd pair23;
  std::string label;
};

/// Sequence-entangled emission (N = 1): Eve sends one 4-qubit group state to
/// each site, classically correlated only through the mixture weight. The
/// tuned tags give the spin-sum bit the component forces per basis
/// (0 = sum is zero, 1 = sum is nonzero, -1 = not determined).
struct PairCase {
  double weight = 1.0;
  StateVector psi2{4};
  StateVector psi3{4};
  int tuned_z = -1;
  int tuned_x = -1;
  std::string label;
};

struct GroupModel {
  SourceParams params;
  SourceKind kind = SourceKind::HonestEntangled;
  bool classical = false;           // coin-toss path
  /// The particle-1 state this source emits (Eve never touches particle 1, so
  /// Eve kinds keep the honest Pure ancilla). Protocol engines may override.
  AncillaMode ancilla = AncillaMode::Pure;
  std::vector<TrioCase> trio_cases;
  std::vector<PairCase> pair_cases;
};

/// Expand a SourceModel into its group-level builder form.
/// Throws std::invalid_argument for Eve kinds with N > 1.
GroupModel resolve_group_model(const SourceModel& model, const SourceParams& params);

/// Materialized group state (N = 1 only): particle-1 group density (16x16)
/// and the particles-2&3 joint group density (256x256, 2-group qubits first).
struct GroupStateParts {
  DensityOperator particle1_group;
  DensityOperator particles23_group;
};
GroupStateParts build_group_state(const SourceModel& model, const SourceParams& params);

// -- Eve's tuned group states -------------------------------------------------

enum class TunedBits { Zeros, Ones };

/// The qunybble state tuned for spin-sum zero (support on the two-up-two-down
/// patterns, identical expansion in both bases) or for nonzero sums in both
/// bases. particle_role (2 or 3) only labels which site receives it.
StateVector psi_tuned(int particle_role, TunedBits bits);

/// Both printed variants of the tuned-for-ones state: the one ending in hex 6
/// (as printed) and in hex 7 (the complement-consistent reading). Exactly one
/// of them avoids zero spin sums in both bases; the builder selects it.
StateVector psi_tuned_ones_variant(bool use_seven);

/// The ten weighted components of the illusion source, with per-basis tuned
/// bit tags. Weights are {9,5,5,5,5,5,5,8,8,9}/64 and sum to one.
std::vector<PairCase> illusion_components();

// -- coin-toss implementation -------------------------------------------------

/// c1 is biased with P(heads)=a^2, c2 and c4 are fair, c3 = -c2; c1, c2, c4
/// are mutually independent.
struct CoinSpec {
  double p_heads_c1 = 0.5;
};
CoinSpec coin_spec(const SourceParams& params);

/// One timeslot of coin results (c1, c2, c3, c4), each +-1.
std::array<int, 4> sample_coins(const CoinSpec& spec, Rng& rng);

// -- state-identity verification ----------------------------------------------

enum class IdentityStatus {
  Exact,             // holds as printed
  GlobalPhase,       // holds after a global sign/phase
  CorrectedForm,     // holds after the documented pair-sign correction
  InfeasibleAsExpected,  // the no-go statement, shown by residual bound
  Failed,
};

struct IdentityCheck {
  std::string name;
  IdentityStatus status = IdentityStatus::Failed;
  bool pass = false;
  double max_diff = 0.0;  // vector max-norm difference for the accepted form
  double residual = 0.0;  // least-squares residual (infeasibility checks)
  std::string note;
};

/// Evaluate every hex-ket identity used by the tuned and illusion states,
/// including the infeasible decomposition and the tuned-for-ones variant
/// resolution. A check passes when its accepted form holds within 1e-9.
std::vector<IdentityCheck> verify_state_identities();

}  // namespace hwsim::sources
