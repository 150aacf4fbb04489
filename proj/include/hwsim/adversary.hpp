#pragma once

#include <optional>
#include <string>

#include "hwsim/engine.hpp"
#include "hwsim/qkd.hpp"
#include "hwsim/sources.hpp"

namespace hwsim::adversary {

using engine::InterceptPolicy;
using sources::SourceModel;
using sources::SourceParams;

/// Eve's options: do nothing, measure particle 3 in flight, or replace the
/// source outright (the replacement model carries its own mixture weights,
/// e.g. tuned-for-zeros with probability 6/16 and tuned-for-ones with 10/16).
struct EveStrategy {
  enum class Kind { None, InterceptResend, ReplaceSource };

  Kind kind = Kind::None;
  InterceptPolicy policy = InterceptPolicy::PerGroup;
  SourceModel replacement;

  static EveStrategy none() { return {}; }
  static EveStrategy intercept(InterceptPolicy p = InterceptPolicy::PerGroup) {
    EveStrategy s;
    s.kind = Kind::InterceptResend;
    s.policy = p;
    return s;
  }
  static EveStrategy replace(SourceModel m) {
    EveStrategy s;
    s.kind = Kind::ReplaceSource;
    s.replacement = m;
    return s;
  }

  static std::optional<EveStrategy> by_name(std::string_view name);
  std::string name() const;
};

/// Intercept-resend applied to a materialized group state (particles 2&3,
/// 2-group qubits first): Eve measures each particle-3 qubit in her chosen
/// basis (one basis per group or per particle) and forwards the collapsed
/// state.
struct InterceptOutcome {
  std::vector<qstate::Basis> bases;  // one entry for per-group policy, else 4N
  std::vector<std::int8_t> bits;     // Eve's measured results, +-1
  qstate::DensityOperator post{8};
};
InterceptOutcome intercept_group(const qstate::DensityOperator& group23,
                                 InterceptPolicy policy, Rng& rng);

/// Sample a replacement component index according to the model's mixture
/// weights, along with its tuned-bit tags.
struct ReplacementChoice {
  int component = 0;
  int tuned_z = -1;
  int tuned_x = -1;
  std::string label;
};
ReplacementChoice choose_replacement(const sources::GroupModel& gm, Rng& rng);

/// Exact Table-2 shape: intercept-resend on the honest source.
struct InterceptTable {
  double p_ok = 0.0;                  // unchanged by Eve
  double bit0_correct_to0 = 0.0;      // P(bob=0 | ok, eve basis matches)
  double bit0_incorrect_to0 = 0.0;
  double bit0_mean_to0 = 0.0;
  double bit1_to0 = 0.0;              // either eve basis
};
InterceptTable intercept_table_exact(const SourceParams& params);

/// Alice's reduced (particle 1, particle 2) state is invariant under Eve's
/// particle-3 measurement; returns the max-norm difference.
double alice_marginal_disturbance(const SourceParams& params, qstate::Basis eve_basis);

/// Eve's prediction scorecard over the sifted key.
struct AccuracyReport {
  double accuracy = 0.0;  // over sifted bits with a defined prediction
  int covered = 0;
  int total = 0;
};
/// Fraction of sifted bits Eve predicted correctly (ReplaceSource sessions).
/// Throws std::invalid_argument for intercept sessions, where predictions are
/// partial; use eve_basis_match_rate there.
AccuracyReport eve_accuracy(const qkd::QkdSession& session);

/// Intercept sessions: fraction of used groups where Eve guessed Bob's basis.
double eve_basis_match_rate(const qkd::QkdSession& session);

/// Exact error table for a replacement source (Tables 4, 5, 6) or for the
/// honest source (Table 1).
qkd::ErrorTable replacement_table_exact(const SourceModel& source,
                                        const SourceParams& params);

/// Exact table predicted for a strategy: the intercept rows for
/// intercept-resend, the per-raw-bit error table otherwise.
struct PredictedTables {
  std::optional<InterceptTable> intercept;
  std::optional<qkd::ErrorTable> table;
};
PredictedTables predicted_tables(const EveStrategy& strategy, const SourceParams& params);

}  // namespace hwsim::adversary
