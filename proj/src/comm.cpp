#include "hwsim/comm.hpp"

#include <cmath>
#include <stdexcept>

namespace hwsim::comm {

engine::AliceSetting to_engine_setting(CommSetting s) {
  return s == CommSetting::A_Bell ? engine::AliceSetting::Bell
                                  : engine::AliceSetting::PairZZ;
}

bool criterion_q(std::span<const std::uint8_t> outcomes, int group_n) {
  return engine::criterion_q(outcomes, group_n);
}

GroupTranscript run_group(const SourceModel& model, const SourceParams& params,
                          CommSetting setting, Rng& rng) {
  const sources::GroupModel gm = sources::resolve_group_model(model, params);
  const engine::GroupSampler sampler(gm, gm.ancilla);
  return sampler.sample(to_engine_setting(setting), qstate::Basis::Z, rng);
}

SpinSumDist spin_sum_distribution_exact(const SourceModel& model,
                                        const SourceParams& params, CommSetting setting,
                                        bool condition_ok) {
  const sources::GroupModel gm = sources::resolve_group_model(model, params);
  const engine::ExactGroup eg =
      engine::exact_group(gm, gm.ancilla, to_engine_setting(setting), qstate::Basis::Z);
  if (!condition_ok) return eg.bob_uncond;
  if (eg.p_ok <= engine::kZeroProb)
    throw std::domain_error("spin_sum_distribution_exact: P(OK) is zero, "
                            "conditional distribution undefined");
  return eg.bob_given_ok;
}

double ok_probability_exact(const SourceModel& model, const SourceParams& params,
                            CommSetting setting) {
  const sources::GroupModel gm = sources::resolve_group_model(model, params);
  return engine::exact_group(gm, gm.ancilla, to_engine_setting(setting), qstate::Basis::Z)
      .p_ok;
}

Moments moments(const SpinSumDist& dist) {
  Moments m;
  double total = 0.0;
  for (const auto& [s, p] : dist) {
    m.mean += s * p;
    m.second += static_cast<double>(s) * s * p;
    total += p;
  }
  if (std::abs(total - 1.0) > qstate::kTol)
    throw std::invalid_argument("moments: probabilities do not sum to 1");
  return m;
}

double misdecode_probability(const SourceParams& params, int group_n) {
  if (group_n < 1) throw std::invalid_argument("misdecode_probability: N >= 1 required");
  params.validate();
  const double a2 = params.a * params.a;
  const double b2 = params.b * params.b;
  std::vector<double> ups;
  for (int k = 0; k < 2 * group_n; ++k) ups.push_back(a2);
  for (int k = 0; k < 2 * group_n; ++k) ups.push_back(b2);
  const std::map<int, double> dist = engine::convolve_pm(ups);
  const auto it = dist.find(0);
  return it == dist.end() ? 0.0 : it->second;
}

CoinConditionals coin_conditionals(const SourceParams& params) {
  params.validate();
  const double a2 = params.a * params.a;
  const double b2 = params.b * params.b;
  return {b2, a2, a2, b2};
}

DecodedSetting decode_setting(int spin_sum) {
  return spin_sum != 0 ? DecodedSetting::CertainlyA : DecodedSetting::GuessB;
}

}  // namespace hwsim::comm
