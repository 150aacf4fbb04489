#include "hwsim/adversary.hpp"

#include <cmath>
#include <stdexcept>

#include "hwsim/qkd.hpp"

namespace hwsim::adversary {

std::optional<EveStrategy> EveStrategy::by_name(std::string_view name) {
  if (name == "none") return none();
  if (name == "intercept") return intercept(InterceptPolicy::PerGroup);
  if (name == "intercept-per-particle") return intercept(InterceptPolicy::PerParticle);
  if (const auto model = SourceModel::by_name(name); model && model->is_eve_source())
    return replace(*model);
  return std::nullopt;
}

std::string EveStrategy::name() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::InterceptResend:
      return policy == InterceptPolicy::PerGroup ? "intercept" : "intercept-per-particle";
    case Kind::ReplaceSource: return replacement.name();
  }
  return "?";
}

namespace {

qstate::Mat embed_on_qubit(const qstate::Mat& op, int qubit, int num_qubits) {
  qstate::Mat out = qstate::Mat::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) {
    const qstate::Mat& step = q == qubit ? op : qstate::Mat::Identity(2, 2);
    qstate::Mat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(i * 2, j * 2, 2, 2) = out(i, j) * step;
    out = std::move(next);
  }
  return out;
}

}  // namespace

InterceptOutcome intercept_group(const qstate::DensityOperator& group23,
                                 InterceptPolicy policy, Rng& rng) {
  if (group23.num_qubits() != 8)
    throw std::invalid_argument("intercept_group: expected an N=1 group state");
  InterceptOutcome out;
  out.post = group23;
  qstate::Basis group_basis = qstate::Basis::Z;
  if (policy == InterceptPolicy::PerGroup) {
    group_basis = rng.bernoulli(0.5) ? qstate::Basis::X : qstate::Basis::Z;
    out.bases.push_back(group_basis);
  }
  for (int slot = 0; slot < 4; ++slot) {
    qstate::Basis b = group_basis;
    if (policy == InterceptPolicy::PerParticle) {
      b = rng.bernoulli(0.5) ? qstate::Basis::X : qstate::Basis::Z;
      out.bases.push_back(b);
    }
    std::vector<qstate::Mat> family;
    for (const qstate::Mat& p : qstate::single_qubit_projectors(b))
      family.push_back(embed_on_qubit(p, 4 + slot, 8));  // particle-3 group qubit
    auto [outcome, post] = qstate::measure_projective(out.post, family, rng);
    out.bits.push_back(outcome == 0 ? 1 : -1);
    out.post = std::move(post);
  }
  return out;
}

ReplacementChoice choose_replacement(const sources::GroupModel& gm, Rng& rng) {
  std::vector<double> weights;
  for (const sources::TrioCase& c : gm.trio_cases) weights.push_back(c.weight);
  for (const sources::PairCase& c : gm.pair_cases) weights.push_back(c.weight);
  if (weights.empty()) throw std::invalid_argument("choose_replacement: empty model");
  const int idx = weights.size() > 1 ? rng.categorical(weights) : 0;
  const int n_trio = static_cast<int>(gm.trio_cases.size());
  ReplacementChoice out;
  out.component = idx;
  if (idx >= n_trio) {
    const sources::PairCase& c = gm.pair_cases[idx - n_trio];
    out.tuned_z = c.tuned_z;
    out.tuned_x = c.tuned_x;
    out.label = c.label;
  } else {
    out.label = gm.trio_cases[idx].label;
  }
  return out;
}

InterceptTable intercept_table_exact(const SourceParams& params) {
  const sources::GroupModel gm =
      sources::resolve_group_model(SourceModel::honest(), params);
  const auto anc = sources::AncillaMode::Dephased;
  using engine::AliceSetting;
  using qstate::Basis;

  auto p_zero_ok = [](const engine::ExactGroup& eg) {
    const auto it = eg.bob_given_ok.find(0);
    return it == eg.bob_given_ok.end() ? 0.0 : it->second;
  };

  InterceptTable t;
  // raw bit 0: Alice and Bob share the announced basis; "correct" means Eve
  // guessed that basis. Average the two encodings weighted by their OK rates.
  double num_corr = 0.0, num_inc = 0.0, den = 0.0;
  double p_ok_ref = -1.0;
  for (int e = 0; e < 2; ++e) {
    const AliceSetting setting = e == 0 ? AliceSetting::PairZZ : AliceSetting::PairXX;
    const Basis shared = e == 0 ? Basis::Z : Basis::X;
    const Basis other = e == 0 ? Basis::X : Basis::Z;
    const engine::ExactGroup corr = engine::exact_group(gm, anc, setting, shared, shared);
    const engine::ExactGroup inc = engine::exact_group(gm, anc, setting, shared, other);
    if (std::abs(corr.p_ok - inc.p_ok) > qstate::kTol)
      throw std::logic_error("intercept_table_exact: P(OK) depends on Eve");
    num_corr += 0.5 * corr.p_ok * p_zero_ok(corr);
    num_inc += 0.5 * inc.p_ok * p_zero_ok(inc);
    den += 0.5 * corr.p_ok;
    p_ok_ref = corr.p_ok;
  }
  t.bit0_correct_to0 = num_corr / den;
  t.bit0_incorrect_to0 = num_inc / den;
  t.bit0_mean_to0 = 0.5 * (t.bit0_correct_to0 + t.bit0_incorrect_to0);

  // raw bit 1: Bell at Alice; average over Bob's kept basis and Eve's guess.
  double acc = 0.0;
  double p_ok_bell = 0.0;
  for (int b = 0; b < 2; ++b) {
    for (int e = 0; e < 2; ++e) {
      const engine::ExactGroup eg =
          engine::exact_group(gm, anc, AliceSetting::Bell, b == 0 ? Basis::Z : Basis::X,
                              e == 0 ? Basis::Z : Basis::X);
      acc += 0.25 * p_zero_ok(eg);
      p_ok_bell = eg.p_ok;
    }
  }
  t.bit1_to0 = acc;
  if (std::abs(p_ok_bell - p_ok_ref) > qstate::kTol)
    throw std::logic_error("intercept_table_exact: OK rates differ between settings");
  t.p_ok = p_ok_bell;
  return t;
}

double alice_marginal_disturbance(const SourceParams& params, qstate::Basis eve_basis) {
  const qstate::DensityOperator trio =
      sources::build_trio_state(params, sources::SourceKind::HonestEntangled);
  const std::vector<qstate::Mat> eve = qstate::single_qubit_projectors(eve_basis);
  qstate::Mat after = qstate::Mat::Zero(8, 8);
  for (const qstate::Mat& p : eve) {
    qstate::Mat full = qstate::Mat::Zero(8, 8);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        full.block(i * 2, j * 2, 2, 2) = qstate::Mat::Identity(4, 4)(i, j) * p;
    after += full * trio.matrix() * full.adjoint();
  }
  const int keep[] = {0, 1};
  const qstate::DensityOperator before12 = qstate::partial_trace(trio, keep);
  const qstate::DensityOperator after12 =
      qstate::partial_trace(qstate::DensityOperator(3, after), keep);
  return (before12.matrix() - after12.matrix()).cwiseAbs().maxCoeff();
}

AccuracyReport eve_accuracy(const qkd::QkdSession& session) {
  if (session.strategy_name == "intercept" ||
      session.strategy_name == "intercept-per-particle")
    throw std::invalid_argument(
        "eve_accuracy: undefined for intercept-resend; use eve_basis_match_rate");
  AccuracyReport r;
  int correct = 0;
  for (const qkd::SiftedBit& s : session.sifted) {
    ++r.total;
    if (s.eve_predicted_bit < 0) continue;
    ++r.covered;
    if (s.eve_predicted_bit == s.bob_bit) ++correct;
  }
  r.accuracy = r.covered > 0 ? static_cast<double>(correct) / r.covered : 0.0;
  return r;
}

double eve_basis_match_rate(const qkd::QkdSession& session) {
  std::int64_t used = 0, matched = 0;
  for (const qkd::SessionGroup& g : session.groups) {
    if (!g.bob_used) continue;
    if (g.transcript.eve_bases.empty()) continue;
    ++used;
    // per-group policy: one basis entry
    if (g.transcript.eve_bases.front() == g.transcript.bob_basis) ++matched;
  }
  return used > 0 ? static_cast<double>(matched) / used : 0.0;
}

qkd::ErrorTable replacement_table_exact(const SourceModel& source,
                                        const SourceParams& params) {
  return qkd::error_table_exact(source, params);
}

PredictedTables predicted_tables(const EveStrategy& strategy,
                                 const SourceParams& params) {
  PredictedTables out;
  switch (strategy.kind) {
    case EveStrategy::Kind::InterceptResend:
      if (strategy.policy != InterceptPolicy::PerGroup)
        throw std::invalid_argument(
            "predicted_tables: exact rows assume the per-group basis policy");
      out.intercept = intercept_table_exact(params);
      break;
    case EveStrategy::Kind::ReplaceSource:
      out.table = qkd::error_table_exact(strategy.replacement, params);
      break;
    case EveStrategy::Kind::None:
      out.table = qkd::error_table_exact(SourceModel::honest(), params);
      break;
  }
  return out;
}

}  // namespace hwsim::adversary
