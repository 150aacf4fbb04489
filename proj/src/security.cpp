#include "hwsim/security.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hwsim::security {

namespace {

using engine::AliceSetting;
using qstate::Basis;

// pre-registered thresholds
constexpr double kChi2OneDf = 9.0;          // ~3 sigma for 1 df
const double kChi2FifteenDf = 15.0 + 3.0 * std::sqrt(30.0);
constexpr int kMinExtremeSamples = 30;
constexpr int kMinUniformitySamples = 16 * 100;

bool is_pair_setting(AliceSetting s) { return s != AliceSetting::Bell; }

Basis setting_basis(AliceSetting s) { return engine::pair_setting_basis(s); }

struct CheckGroups {
  std::vector<const qkd::SessionGroup*> same_basis;   // pair setting, bob matches
  std::vector<const qkd::SessionGroup*> cross_basis;  // pair setting, bob differs
  std::vector<const qkd::SessionGroup*> all;          // every sacrificed group
};

CheckGroups check_groups(const qkd::QkdSession& session) {
  CheckGroups out;
  for (const qkd::SessionGroup& g : session.groups) {
    if (!g.sacrificed) continue;
    out.all.push_back(&g);
    if (!is_pair_setting(g.transcript.setting)) continue;
    if (setting_basis(g.transcript.setting) == g.transcript.bob_basis)
      out.same_basis.push_back(&g);
    else
      out.cross_basis.push_back(&g);
  }
  return out;
}

double binom_sigma(double p, int n) {
  return n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0;
}

int transcript_alice_hex(const engine::GroupTranscript& t) {
  int hex = 0;
  for (int s = 0; s < 4; ++s)
    if (t.alice2[s] > 0) hex |= 1 << (3 - s);
  return hex;
}

int transcript_bob_hex(const engine::GroupTranscript& t) {
  int hex = 0;
  for (int s = 0; s < 4; ++s)
    if (t.bob[s] > 0) hex |= 1 << (3 - s);
  return hex;
}

}  // namespace

std::string to_string(Decision d) {
  switch (d) {
    case Decision::Consistent: return "consistent";
    case Decision::EavesdroppingDetected: return "eavesdropping_detected";
    case Decision::Inconclusive: return "inconclusive";
  }
  return "?";
}

TestReport error_rate_test(const qkd::QkdSession& session) {
  TestReport r;
  r.test = "error_rate";
  std::int64_t n0 = 0, n1 = 0, e01 = 0, e10 = 0;
  for (const qkd::SiftedBit& s : session.sifted) {
    if (!s.sacrificed) continue;
    if (s.alice_bit == 0) {
      ++n0;
      if (s.bob_bit == 1) ++e01;
    } else {
      ++n1;
      if (s.bob_bit == 0) ++e10;
    }
  }
  r.samples = static_cast<int>(n0 + n1);
  if (n0 == 0 || n1 == 0) {
    r.decision = Decision::Inconclusive;
    r.note = "empty check subset for one bit value";
    return r;
  }
  const double r01 = static_cast<double>(e01) / n0;
  const double r10 = static_cast<double>(e10) / n1;
  r.values["rate_0_to_1"] = r01;
  r.values["rate_1_to_0"] = r10;
  r.values["n_bit0"] = static_cast<double>(n0);
  r.values["n_bit1"] = static_cast<double>(n1);
  r.statistic = r01;
  r.expected = 0.0;
  const double exp10 = 3.0 / 8.0;
  const double dev10 = std::abs(r10 - exp10);
  r.threshold = 3.0 * binom_sigma(exp10, static_cast<int>(n1));
  // the zero baseline admits no 0->1 errors at all
  const bool flagged = e01 > 0 || dev10 > r.threshold;
  r.decision = flagged ? Decision::EavesdroppingDetected : Decision::Consistent;
  return r;
}

TestReport spin_sum_zero_correlation_test(const qkd::QkdSession& session) {
  TestReport r;
  r.test = "zero_correlation";
  const CheckGroups cg = check_groups(session);
  std::int64_t alice_zero = 0, lockstep_bad = 0;
  for (const qkd::SessionGroup* g : cg.same_basis) {
    const bool a0 = g->transcript.alice2_spin_sum == 0;
    const bool b0 = g->transcript.bob_spin_sum == 0;
    if (a0) ++alice_zero;
    if (a0 != b0) ++lockstep_bad;
  }
  r.samples = static_cast<int>(cg.same_basis.size());
  if (cg.same_basis.empty()) {
    r.decision = Decision::Inconclusive;
    r.note = "no same-setting check groups";
    return r;
  }
  r.statistic = static_cast<double>(lockstep_bad) / cg.same_basis.size();
  r.expected = 0.0;
  r.threshold = 0.0;
  r.values["n_alice_zero"] = static_cast<double>(alice_zero);
  r.values["lockstep_violations"] = static_cast<double>(lockstep_bad);
  r.decision = lockstep_bad > 0 ? Decision::EavesdroppingDetected : Decision::Consistent;
  return r;
}

TestReport cross_setting_independence_test(const qkd::QkdSession& session) {
  TestReport r;
  r.test = "cross_independence";
  const CheckGroups cg = check_groups(session);
  // 2x2 table of (alice sum zero?, bob sum zero?) at differing settings
  double n[2][2] = {{0, 0}, {0, 0}};
  for (const qkd::SessionGroup* g : cg.cross_basis) {
    const int a = g->transcript.alice2_spin_sum == 0 ? 1 : 0;
    const int b = g->transcript.bob_spin_sum == 0 ? 1 : 0;
    n[a][b] += 1.0;
  }
  const double total = n[0][0] + n[0][1] + n[1][0] + n[1][1];
  r.samples = static_cast<int>(total);
  if (total < 30) {
    r.decision = Decision::Inconclusive;
    r.note = "insufficient differing-setting check groups";
    return r;
  }
  const double pa = (n[1][0] + n[1][1]) / total;
  const double pb = (n[0][1] + n[1][1]) / total;
  if (pa == 0.0 || pa == 1.0 || pb == 0.0 || pb == 1.0) {
    // degenerate marginals are the uniformity test's business
    r.decision = Decision::Inconclusive;
    r.note = "degenerate zero-sum marginal";
    return r;
  }
  double chi2 = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double expct = total * (a ? pa : 1 - pa) * (b ? pb : 1 - pb);
      chi2 += (n[a][b] - expct) * (n[a][b] - expct) / expct;
    }
  r.statistic = chi2;
  r.expected = 0.0;
  r.threshold = kChi2OneDf;
  r.values["p_alice_zero"] = pa;
  r.values["p_bob_zero"] = pb;
  r.values["p_both_zero"] = n[1][1] / total;
  r.decision =
      chi2 > kChi2OneDf ? Decision::EavesdroppingDetected : Decision::Consistent;
  return r;
}

TestReport local_uniformity_test(const qkd::QkdSession& session) {
  TestReport r;
  r.test = "uniformity";
  const CheckGroups cg = check_groups(session);
  // pattern tallies per (site, basis)
  std::map<std::string, std::array<std::int64_t, 16>> tallies;
  for (const qkd::SessionGroup* g : cg.all) {
    const auto& t = g->transcript;
    const std::string bob_key =
        t.bob_basis == Basis::Z ? "bob_z" : "bob_x";
    ++tallies[bob_key][transcript_bob_hex(t)];
    if (is_pair_setting(t.setting)) {
      const std::string alice_key =
          setting_basis(t.setting) == Basis::Z ? "alice_z" : "alice_x";
      ++tallies[alice_key][transcript_alice_hex(t)];
    }
  }
  double worst = 0.0;
  std::string worst_key;
  int usable = 0;
  for (const auto& [key, counts] : tallies) {
    std::int64_t n = 0;
    for (std::int64_t c : counts) n += c;
    if (n < kMinUniformitySamples) continue;
    ++usable;
    double chi2 = 0.0;
    const double expct = static_cast<double>(n) / 16.0;
    for (std::int64_t c : counts) chi2 += (c - expct) * (c - expct) / expct;
    r.values["chi2_" + key] = chi2;
    if (chi2 > worst) {
      worst = chi2;
      worst_key = key;
    }
    r.samples += static_cast<int>(n);
  }
  if (usable == 0) {
    r.decision = Decision::Inconclusive;
    r.note = "fewer than 16*100 samples per table";
    return r;
  }
  r.statistic = worst;
  r.expected = 15.0;
  r.threshold = kChi2FifteenDf;
  r.note = "worst table: " + worst_key;
  r.decision =
      worst > kChi2FifteenDf ? Decision::EavesdroppingDetected : Decision::Consistent;
  return r;
}

TestReport extreme_value_test(const qkd::QkdSession& session) {
  TestReport r;
  r.test = "extreme_value";
  const CheckGroups cg = check_groups(session);
  std::int64_t extreme = 0, remote_zero = 0;
  for (const qkd::SessionGroup* g : cg.cross_basis) {
    const int hex = transcript_alice_hex(g->transcript);
    if (hex != 0x0 && hex != 0xF) continue;
    ++extreme;
    if (g->transcript.bob_spin_sum == 0) ++remote_zero;
  }
  r.samples = static_cast<int>(extreme);
  r.expected = 6.0 / 16.0;
  if (extreme < kMinExtremeSamples) {
    r.decision = Decision::Inconclusive;
    r.note = "rare-event test: fewer than 30 qualifying groups";
    return r;
  }
  const double p = static_cast<double>(remote_zero) / extreme;
  r.statistic = p;
  r.threshold = 3.0 * binom_sigma(r.expected, static_cast<int>(extreme));
  r.values["n_extreme"] = static_cast<double>(extreme);
  r.decision = std::abs(p - r.expected) > r.threshold
                   ? Decision::EavesdroppingDetected
                   : Decision::Consistent;
  return r;
}

TestReport per_qubit_test(const qkd::QkdSession& session) {
  TestReport r;
  r.test = "per_qubit";
  const CheckGroups cg = check_groups(session);
  std::int64_t slots = 0, anti = 0;
  for (const qkd::SessionGroup* g : cg.same_basis) {
    const auto& t = g->transcript;
    for (std::size_t s = 0; s < t.bob.size(); ++s) {
      ++slots;
      if (t.bob[s] == -t.alice2[s]) ++anti;
    }
  }
  r.samples = static_cast<int>(slots);
  if (slots == 0) {
    r.decision = Decision::Inconclusive;
    r.note = "no same-setting check groups";
    return r;
  }
  r.statistic = static_cast<double>(anti) / slots;
  r.expected = 1.0;
  r.threshold = 0.0;  // the singlet baseline admits no mismatches
  r.decision =
      anti == slots ? Decision::Consistent : Decision::EavesdroppingDetected;
  return r;
}

std::vector<TestReport> run_all_tests(const qkd::QkdSession& session) {
  return {error_rate_test(session),    spin_sum_zero_correlation_test(session),
          cross_setting_independence_test(session), local_uniformity_test(session),
          extreme_value_test(session), per_qubit_test(session)};
}

std::vector<TestReport> run_tests(const qkd::QkdSession& session,
                                  const std::vector<std::string>& names) {
  std::vector<TestReport> out;
  for (const std::string& n : names) {
    if (n == "error_rate") out.push_back(error_rate_test(session));
    else if (n == "zero_correlation") out.push_back(spin_sum_zero_correlation_test(session));
    else if (n == "cross_independence") out.push_back(cross_setting_independence_test(session));
    else if (n == "uniformity") out.push_back(local_uniformity_test(session));
    else if (n == "extreme") out.push_back(extreme_value_test(session));
    else if (n == "per_qubit") out.push_back(per_qubit_test(session));
    else throw std::invalid_argument("unknown security test: " + n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact battery
// ---------------------------------------------------------------------------

namespace {

std::map<int, double> sum_marginal_alice(const engine::Joint16& j) {
  std::map<int, double> out;
  for (int p = 0; p < 16; ++p) {
    double row = 0.0;
    for (int q = 0; q < 16; ++q) row += j[p][q];
    out[qstate::hex_spin_sum(p)] += row;
  }
  return out;
}

std::map<int, double> sum_marginal_bob(const engine::Joint16& j) {
  std::map<int, double> out;
  for (int q = 0; q < 16; ++q) {
    double col = 0.0;
    for (int p = 0; p < 16; ++p) col += j[p][q];
    out[qstate::hex_spin_sum(q)] += col;
  }
  return out;
}

std::map<std::pair<int, int>, double> sum_joint(const engine::Joint16& j) {
  std::map<std::pair<int, int>, double> out;
  for (int p = 0; p < 16; ++p)
    for (int q = 0; q < 16; ++q)
      out[{qstate::hex_spin_sum(p), qstate::hex_spin_sum(q)}] += j[p][q];
  return out;
}

}  // namespace

ExactBattery exact_battery(const SourceModel& source, const SourceParams& params) {
  const sources::GroupModel gm = sources::resolve_group_model(source, params);
  ExactBattery out;
  out.table = qkd::error_table_exact(source, params);

  const engine::Joint16 zz = engine::site_pattern_joint(gm, Basis::Z, Basis::Z);
  const engine::Joint16 xx = engine::site_pattern_joint(gm, Basis::X, Basis::X);
  const engine::Joint16 zx = engine::site_pattern_joint(gm, Basis::Z, Basis::X);
  const engine::Joint16 xz = engine::site_pattern_joint(gm, Basis::X, Basis::Z);

  // requirement (ii): same-basis zero-sum lockstep
  for (const engine::Joint16& j : {zz, xx}) {
    double bad = 0.0;
    for (const auto& [st, p] : sum_joint(j))
      if ((st.first == 0) != (st.second == 0)) bad += p;
    out.lockstep_violation = std::max(out.lockstep_violation, bad);
  }

  // requirement (iii), zero-indicator form + conditional zero rates
  bool first = true;
  for (const engine::Joint16& j : {zx, xz}) {
    double both = 0.0, a0 = 0.0, b0 = 0.0;
    for (const auto& [st, p] : sum_joint(j)) {
      if (st.first == 0) a0 += p;
      if (st.second == 0) b0 += p;
      if (st.first == 0 && st.second == 0) both += p;
    }
    out.cross_zero_indicator_dev =
        std::max(out.cross_zero_indicator_dev, std::abs(both - a0 * b0));
    const double cond = a0 > 0.0 ? both / a0 : std::numeric_limits<double>::quiet_NaN();
    (first ? out.cross_cond_zero_zx : out.cross_cond_zero_xz) = cond;
    first = false;

    // full-table factorization residual (informational)
    const std::map<int, double> ma = sum_marginal_alice(j);
    const std::map<int, double> mb = sum_marginal_bob(j);
    const auto joint = sum_joint(j);
    for (const auto& [sa, pa] : ma)
      for (const auto& [sb, pb] : mb) {
        const auto it = joint.find({sa, sb});
        const double pj = it == joint.end() ? 0.0 : it->second;
        out.cross_full_joint_dev =
            std::max(out.cross_full_joint_dev, std::abs(pj - pa * pb));
      }
  }

  // requirement (iv): local uniformity at each site/basis
  for (const engine::Joint16& j : {zz, xx}) {
    for (int p = 0; p < 16; ++p) {
      double row = 0.0, col = 0.0;
      for (int q = 0; q < 16; ++q) {
        row += j[p][q];
        col += j[q][p];
      }
      out.uniformity_dev = std::max(out.uniformity_dev, std::abs(row - 1.0 / 16.0));
      out.uniformity_dev = std::max(out.uniformity_dev, std::abs(col - 1.0 / 16.0));
    }
  }

  // extreme-pattern conditional (local z extreme, remote x sum)
  {
    double p_ext = 0.0, p_ext_zero = 0.0;
    for (int p : {0x0, 0xF})
      for (int q = 0; q < 16; ++q) {
        p_ext += zx[p][q];
        if (qstate::hex_spin_sum(q) == 0) p_ext_zero += zx[p][q];
      }
    out.extreme_conditional = p_ext > 0.0 ? p_ext_zero / p_ext
                                          : std::numeric_limits<double>::quiet_NaN();
  }

  out.per_qubit_rate_z = engine::per_qubit_anticorrelation(gm, Basis::Z);
  out.per_qubit_rate_x = engine::per_qubit_anticorrelation(gm, Basis::X);
  return out;
}

}  // namespace hwsim::security
