#include "hwsim/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace hwsim::engine {

using qstate::Mat;
using qstate::StateVector;
using qstate::Vec;

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<Mat> alice_ops(AliceSetting setting) {
  if (setting == AliceSetting::Bell) return qstate::bell_projectors();
  return qstate::pair_projectors(pair_setting_basis(setting));
}

double real_trace_product(const Mat& op, const Mat& rho) {
  return (op * rho).trace().real();
}

int setting_index(AliceSetting s) { return static_cast<int>(s); }

/// Mix per-case spin-sum maps: out += w * d.
void accumulate(std::map<int, double>& out, const std::map<int, double>& d, double w) {
  for (const auto& [s, p] : d) out[s] += w * p;
}

}  // namespace

Basis pair_setting_basis(AliceSetting s) {
  switch (s) {
    case AliceSetting::PairZZ: return Basis::Z;
    case AliceSetting::PairXX: return Basis::X;
    case AliceSetting::Bell: break;
  }
  throw std::invalid_argument("pair_setting_basis: Bell setting has no single basis");
}

bool criterion_q(std::span<const std::uint8_t> codes, int group_n) {
  if (static_cast<int>(codes.size()) != 4 * group_n)
    throw std::invalid_argument("criterion_q: expected 4N outcomes");
  std::array<int, 4> counts{};
  for (std::uint8_t c : codes) {
    if (c > 3) throw std::invalid_argument("criterion_q: outcome code out of range");
    ++counts[c];
  }
  return counts[0] == group_n && counts[1] == group_n && counts[2] == group_n &&
         counts[3] == group_n;
}

SlotJoint slot_joint(const SourceParams& params, const Eigen::Matrix4cd& pair23,
                     AncillaMode anc, AliceSetting setting, Basis bob_basis,
                     std::optional<Basis> eve_basis) {
  const Mat trio = kron(Mat(sources::ancilla_density(params, anc)), Mat(pair23));
  const std::vector<Mat> aops = alice_ops(setting);
  const std::vector<Mat> bob = qstate::single_qubit_projectors(bob_basis);

  SlotJoint sj;
  if (!eve_basis) {
    for (int o = 0; o < 4; ++o) {
      for (int b = 0; b < 2; ++b) {
        const Mat op = kron(aops[o], bob[b]);
        sj.joint[o][b] = std::max(0.0, real_trace_product(op, trio));
      }
      sj.alice[o] = sj.joint[o][0] + sj.joint[o][1];
    }
    return sj;
  }

  sj.has_eve = true;
  const std::vector<Mat> eve = qstate::single_qubit_projectors(*eve_basis);
  for (int o = 0; o < 4; ++o) {
    for (int e = 0; e < 2; ++e) {
      for (int b = 0; b < 2; ++b) {
        // Eve projects in flight; Bob measures the forwarded collapsed state.
        const Mat op3 = eve[e] * bob[b] * eve[e];
        const Mat op = kron(aops[o], op3);
        const double p = std::max(0.0, real_trace_product(op, trio));
        sj.joint3[o][e][b] = p;
        sj.joint[o][b] += p;
      }
    }
    sj.alice[o] = sj.joint[o][0] + sj.joint[o][1];
  }
  return sj;
}

SlotJoint slot_joint_coins(const SourceParams& params, AliceSetting setting) {
  const double a2 = params.a * params.a;
  const double b2 = params.b * params.b;
  SlotJoint sj;
  if (setting == AliceSetting::Bell) {
    // Alice reads (c4, c1*c2); both fair and independent. Bob reads c3, with
    // P(c3 = +1 | c1c2 = +1) = b^2 and P(c3 = +1 | c1c2 = -1) = a^2.
    for (int code = 0; code < 4; ++code) {
      const bool prod_tails = code & 1;  // c1*c2 == -1
      const double p_up = prod_tails ? a2 : b2;
      sj.joint[code][0] = 0.25 * p_up;
      sj.joint[code][1] = 0.25 * (1.0 - p_up);
      sj.alice[code] = 0.25;
    }
    return sj;
  }
  if (setting == AliceSetting::PairZZ) {
    // Alice reads (c1, c2); c3 = -c2 deterministically.
    for (int code = 0; code < 4; ++code) {
      const bool c1_tails = code & 2;
      const bool c2_tails = code & 1;
      const double p_code = (c1_tails ? b2 : a2) * 0.5;
      sj.alice[code] = p_code;
      sj.joint[code][c2_tails ? 0 : 1] = p_code;  // bob = -c2
    }
    return sj;
  }
  throw std::invalid_argument("coin source defines settings (a) and (b) only");
}

std::array<Eigen::Matrix2cd, 4> alice_povm_on2(const SourceParams& params,
                                               AncillaMode anc, AliceSetting setting) {
  const Eigen::Matrix2cd rho_a = sources::ancilla_density(params, anc);
  std::array<Eigen::Matrix2cd, 4> out;
  if (setting == AliceSetting::Bell) {
    const std::vector<Mat> bells = qstate::bell_projectors();
    for (int o = 0; o < 4; ++o) {
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
      // M = tr_1[(rho_a ox I) B]
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
              m(r, c) += rho_a(i, k) * bells[o](k * 2 + r, i * 2 + c);
      out[o] = m;
    }
    return out;
  }
  const Basis basis = pair_setting_basis(setting);
  const std::vector<Mat> proj = qstate::single_qubit_projectors(basis);
  for (int code = 0; code < 4; ++code) {
    const int r1 = (code >> 1) & 1;
    const int r2 = code & 1;
    const double p1 = (proj[r1] * Mat(rho_a)).trace().real();
    out[code] = p1 * Eigen::Matrix2cd(proj[r2]);
  }
  return out;
}

Pattern16 pattern_distribution(const StateVector& psi, Basis basis) {
  const std::array<Basis, 4> labels{basis, basis, basis, basis};
  const StateVector t = qstate::change_basis(psi, labels);
  Pattern16 out{};
  for (int idx = 0; idx < 16; ++idx) {
    const double p = std::norm(t[idx]);
    out[qstate::index_to_hex(idx)] = p < kZeroProb ? 0.0 : p;
  }
  return out;
}

std::vector<double> alice_code_pattern_dist(const SourceParams& params, AncillaMode anc,
                                            AliceSetting setting,
                                            const StateVector& psi2) {
  std::vector<double> out(256, 0.0);
  if (setting == AliceSetting::Bell) {
    const std::array<Eigen::Matrix2cd, 4> ms = alice_povm_on2(params, anc, setting);
    for (int pat = 0; pat < 256; ++pat) {
      Vec v = psi2.amplitudes();
      for (int t = 0; t < 4; ++t) {
        const int code = (pat >> (2 * (3 - t))) & 3;
        qstate::apply_single_qubit(v, ms[code], t, 4);
      }
      out[pat] = std::max(0.0, psi2.amplitudes().dot(v).real());
    }
    return out;
  }
  const Basis basis = pair_setting_basis(setting);
  const Pattern16 p2 = pattern_distribution(psi2, basis);
  const Eigen::Matrix2cd rho_a = sources::ancilla_density(params, anc);
  const std::vector<Mat> proj = qstate::single_qubit_projectors(basis);
  const double p1_up = (proj[0] * Mat(rho_a)).trace().real();
  for (int pat = 0; pat < 256; ++pat) {
    double p_anc = 1.0;
    int hex2 = 0;
    for (int t = 0; t < 4; ++t) {
      const int code = (pat >> (2 * (3 - t))) & 3;
      const int r1_down = (code >> 1) & 1;
      const int r2_down = code & 1;
      p_anc *= r1_down ? (1.0 - p1_up) : p1_up;
      if (!r2_down) hex2 |= 1 << (3 - t);
    }
    out[pat] = p_anc * p2[hex2];
  }
  return out;
}

std::map<int, double> convolve_pm(std::span<const double> up_probs) {
  std::map<int, double> dist{{0, 1.0}};
  for (double p : up_probs) {
    std::map<int, double> next;
    for (const auto& [s, q] : dist) {
      next[s + 1] += q * p;
      next[s - 1] += q * (1.0 - p);
    }
    dist = std::move(next);
  }
  return dist;
}

double multinomial_q_probability(const std::array<double, 4>& p, int group_n) {
  double coeff = 1.0;
  int placed = 0;
  // (4N)! / (N!)^4 via successive binomials C(placed+N, N)
  for (int o = 0; o < 4; ++o) {
    for (int k = 1; k <= group_n; ++k) {
      coeff *= static_cast<double>(placed + k) / static_cast<double>(k);
    }
    placed += group_n;
  }
  double prob = coeff;
  for (int o = 0; o < 4; ++o) prob *= std::pow(p[o], group_n);
  return prob;
}

namespace {

/// Exact group statistics for one i.i.d. slot joint.
ExactGroup exact_from_slot(const SlotJoint& sj, int group_n) {
  ExactGroup out;
  out.p_ok = multinomial_q_probability(sj.alice, group_n);

  std::vector<double> uncond_up;
  const double m_up = sj.joint[0][0] + sj.joint[1][0] + sj.joint[2][0] + sj.joint[3][0];
  for (int t = 0; t < 4 * group_n; ++t) uncond_up.push_back(m_up);
  out.bob_uncond = convolve_pm(uncond_up);

  if (out.p_ok > kZeroProb) {
    std::vector<double> cond_up;
    for (int o = 0; o < 4; ++o) {
      const double u = sj.joint[o][0] / sj.alice[o];
      for (int k = 0; k < group_n; ++k) cond_up.push_back(u);
    }
    out.bob_given_ok = convolve_pm(cond_up);
  }
  return out;
}

std::map<int, double> sums_from_pattern(const Pattern16& p) {
  std::map<int, double> out;
  for (int hex = 0; hex < 16; ++hex)
    if (p[hex] > 0.0) out[qstate::hex_spin_sum(hex)] += p[hex];
  return out;
}

double q_probability_from_codes(const std::vector<double>& code_pattern_dist) {
  double p = 0.0;
  for (int pat = 0; pat < 256; ++pat) {
    std::array<std::uint8_t, 4> codes{};
    for (int t = 0; t < 4; ++t) codes[t] = (pat >> (2 * (3 - t))) & 3;
    if (criterion_q(codes, 1)) p += code_pattern_dist[pat];
  }
  return p;
}

}  // namespace

ExactGroup exact_group(const GroupModel& gm, AncillaMode anc, AliceSetting setting,
                       Basis bob_basis, std::optional<Basis> eve_basis) {
  ExactGroup mixed;
  std::map<int, double> given_ok_weighted;

  if (gm.classical) {
    if (eve_basis) throw std::invalid_argument("coin source has no quantum channel");
    return exact_from_slot(slot_joint_coins(gm.params, setting), gm.params.group_n);
  }

  for (const sources::TrioCase& c : gm.trio_cases) {
    const SlotJoint sj =
        slot_joint(gm.params, c.pair23, anc, setting, bob_basis, eve_basis);
    const ExactGroup eg = exact_from_slot(sj, gm.params.group_n);
    mixed.p_ok += c.weight * eg.p_ok;
    accumulate(given_ok_weighted, eg.bob_given_ok, c.weight * eg.p_ok);
    accumulate(mixed.bob_uncond, eg.bob_uncond, c.weight);
  }
  for (const sources::PairCase& c : gm.pair_cases) {
    if (eve_basis)
      throw std::invalid_argument("intercept channels apply to i.i.d. sources only");
    const std::vector<double> adist =
        alice_code_pattern_dist(gm.params, anc, setting, c.psi2);
    const double p_ok = q_probability_from_codes(adist);
    const std::map<int, double> bob =
        sums_from_pattern(pattern_distribution(c.psi3, bob_basis));
    mixed.p_ok += c.weight * p_ok;
    accumulate(given_ok_weighted, bob, c.weight * p_ok);  // bob independent of OK
    accumulate(mixed.bob_uncond, bob, c.weight);
  }

  if (mixed.p_ok > kZeroProb) {
    for (auto& [s, p] : given_ok_weighted) p /= mixed.p_ok;
    mixed.bob_given_ok = std::move(given_ok_weighted);
  }
  return mixed;
}

Joint16 site_pattern_joint(const GroupModel& gm, Basis alice_basis, Basis bob_basis) {
  if (gm.classical)
    throw std::invalid_argument("site_pattern_joint: classical source has no sites");
  Joint16 out{};
  for (const sources::TrioCase& c : gm.trio_cases) {
    // per-slot joint q(r2, r3) from the one-timeslot pair density
    const std::vector<Mat> pa = qstate::single_qubit_projectors(alice_basis);
    const std::vector<Mat> pb = qstate::single_qubit_projectors(bob_basis);
    double q[2][2];
    for (int r2 = 0; r2 < 2; ++r2)
      for (int r3 = 0; r3 < 2; ++r3)
        q[r2][r3] = std::max(0.0, real_trace_product(kron(pa[r2], pb[r3]), Mat(c.pair23)));
    for (int p = 0; p < 16; ++p)
      for (int r = 0; r < 16; ++r) {
        double prob = 1.0;
        for (int t = 0; t < 4; ++t) {
          const int up2 = (p >> (3 - t)) & 1;
          const int up3 = (r >> (3 - t)) & 1;
          prob *= q[up2 ? 0 : 1][up3 ? 0 : 1];
        }
        out[p][r] += c.weight * prob;
      }
  }
  for (const sources::PairCase& c : gm.pair_cases) {
    const Pattern16 p2 = pattern_distribution(c.psi2, alice_basis);
    const Pattern16 p3 = pattern_distribution(c.psi3, bob_basis);
    for (int p = 0; p < 16; ++p)
      for (int r = 0; r < 16; ++r) out[p][r] += c.weight * p2[p] * p3[r];
  }
  return out;
}

double per_qubit_anticorrelation(const GroupModel& gm, Basis basis) {
  const Joint16 joint = site_pattern_joint(gm, basis, basis);
  double rate = 0.0;
  for (int p = 0; p < 16; ++p)
    for (int r = 0; r < 16; ++r) {
      if (joint[p][r] == 0.0) continue;
      // a differing pattern bit means the two sites read opposite spins there
      const int anti_slots = __builtin_popcount(static_cast<unsigned>((p ^ r) & 0xF));
      rate += joint[p][r] * anti_slots / 4.0;
    }
  return rate;
}

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

GroupSampler::GroupSampler(GroupModel gm, AncillaMode anc)
    : gm_(std::move(gm)), anc_(anc) {
  for (const sources::TrioCase& c : gm_.trio_cases) case_weights_.push_back(c.weight);
  for (const sources::PairCase& c : gm_.pair_cases) case_weights_.push_back(c.weight);

  const AliceSetting settings[3] = {AliceSetting::Bell, AliceSetting::PairZZ,
                                    AliceSetting::PairXX};
  for (const sources::TrioCase& c : gm_.trio_cases) {
    CaseTables tables;
    for (int s = 0; s < 3; ++s) {
      for (int b = 0; b < 2; ++b) {
        const Basis bob = b == 0 ? Basis::Z : Basis::X;
        const SlotJoint plain = slot_joint(gm_.params, c.pair23, anc_, settings[s], bob);
        for (int o = 0; o < 4; ++o)
          for (int rb = 0; rb < 2; ++rb) tables.sb[s][b].j2[o * 2 + rb] = plain.joint[o][rb];
        for (int e = 0; e < 2; ++e) {
          const Basis eb = e == 0 ? Basis::Z : Basis::X;
          const SlotJoint we = slot_joint(gm_.params, c.pair23, anc_, settings[s], bob, eb);
          for (int o = 0; o < 4; ++o)
            for (int re = 0; re < 2; ++re)
              for (int rb = 0; rb < 2; ++rb)
                tables.sb[s][b].j3[e][o * 4 + re * 2 + rb] = we.joint3[o][re][rb];
        }
      }
    }
    trio_tables_.push_back(std::move(tables));
  }

  for (const sources::PairCase& c : gm_.pair_cases) {
    PairTables t;
    t.alice_pattern_zz = pattern_distribution(c.psi2, Basis::Z);
    t.alice_pattern_xx = pattern_distribution(c.psi2, Basis::X);
    t.bell_codes = alice_code_pattern_dist(gm_.params, anc_, AliceSetting::Bell, c.psi2);
    t.bob_z = pattern_distribution(c.psi3, Basis::Z);
    t.bob_x = pattern_distribution(c.psi3, Basis::X);
    pair_tables_.push_back(std::move(t));
  }

  const Eigen::Matrix2cd rho_a = sources::ancilla_density(gm_.params, anc_);
  for (int b = 0; b < 2; ++b) {
    const Basis basis = b == 0 ? Basis::Z : Basis::X;
    const std::vector<Mat> proj = qstate::single_qubit_projectors(basis);
    p_r1_up_[b] = (proj[0] * Mat(rho_a)).trace().real();
  }
}

GroupTranscript GroupSampler::sample(AliceSetting setting, Basis bob_basis, Rng& rng,
                                     const std::optional<InterceptSpec>& eve) const {
  if (gm_.classical) {
    if (eve) throw std::invalid_argument("coin source has no quantum channel");
    return sample_coins(setting, rng);
  }
  int case_idx = 0;
  if (case_weights_.size() > 1) case_idx = rng.categorical(case_weights_);
  const int n_trio = static_cast<int>(gm_.trio_cases.size());
  if (case_idx < n_trio) return sample_trio(case_idx, setting, bob_basis, rng, eve);
  if (eve) throw std::invalid_argument("intercept channels apply to i.i.d. sources only");
  return sample_pair(case_idx, setting, bob_basis, rng);
}

GroupTranscript GroupSampler::sample_trio(int case_idx, AliceSetting setting, Basis bob,
                                          Rng& rng,
                                          const std::optional<InterceptSpec>& eve) const {
  const int slots = gm_.params.slots();
  GroupTranscript t;
  t.setting = setting;
  t.bob_basis = bob;
  t.eve_case = static_cast<int>(case_weights_.size()) > 1 ? case_idx : -1;
  const PerSettingTables& tbl =
      trio_tables_[case_idx].sb[setting_index(setting)][bob == Basis::Z ? 0 : 1];
  const bool pair_setting = setting != AliceSetting::Bell;

  Basis group_eve_basis = Basis::Z;
  if (eve && eve->policy == InterceptPolicy::PerGroup) {
    group_eve_basis = rng.bernoulli(0.5) ? Basis::X : Basis::Z;
    t.eve_bases.push_back(group_eve_basis);
  }

  for (int s = 0; s < slots; ++s) {
    int code, bob_down;
    if (eve) {
      Basis eb = group_eve_basis;
      if (eve->policy == InterceptPolicy::PerParticle) {
        eb = rng.bernoulli(0.5) ? Basis::X : Basis::Z;
        t.eve_bases.push_back(eb);
      }
      const auto& j3 = tbl.j3[eb == Basis::Z ? 0 : 1];
      const int cell = rng.categorical(std::span<const double>(j3.data(), 16));
      code = cell >> 2;
      const int eve_down = (cell >> 1) & 1;
      bob_down = cell & 1;
      t.eve_bits.push_back(eve_down ? -1 : 1);
    } else {
      const int cell = rng.categorical(std::span<const double>(tbl.j2.data(), 8));
      code = cell >> 1;
      bob_down = cell & 1;
    }
    t.alice_codes.push_back(static_cast<std::uint8_t>(code));
    if (pair_setting) {
      const int r2_down = code & 1;
      t.alice2.push_back(r2_down ? -1 : 1);
      t.alice2_spin_sum += r2_down ? -1 : 1;
    }
    t.bob.push_back(bob_down ? -1 : 1);
    t.bob_spin_sum += bob_down ? -1 : 1;
  }
  t.ok = criterion_q(t.alice_codes, gm_.params.group_n);
  return t;
}

GroupTranscript GroupSampler::sample_pair(int case_idx, AliceSetting setting, Basis bob,
                                          Rng& rng) const {
  const int n_trio = static_cast<int>(gm_.trio_cases.size());
  const PairTables& tbl = pair_tables_[case_idx - n_trio];
  GroupTranscript t;
  t.setting = setting;
  t.bob_basis = bob;
  t.eve_case = case_idx;

  if (setting == AliceSetting::Bell) {
    const int pat = rng.categorical(tbl.bell_codes);
    for (int s = 0; s < 4; ++s)
      t.alice_codes.push_back(static_cast<std::uint8_t>((pat >> (2 * (3 - s))) & 3));
  } else {
    const bool x = setting == AliceSetting::PairXX;
    const auto& adist = x ? tbl.alice_pattern_xx : tbl.alice_pattern_zz;
    const int hex2 = rng.categorical(std::span<const double>(adist.data(), 16));
    const double p1_up = p_r1_up_[x ? 1 : 0];
    for (int s = 0; s < 4; ++s) {
      const int r2_up = (hex2 >> (3 - s)) & 1;
      const int r1_up = rng.bernoulli(p1_up) ? 1 : 0;
      t.alice_codes.push_back(static_cast<std::uint8_t>(((r1_up ? 0 : 1) << 1) | (r2_up ? 0 : 1)));
      t.alice2.push_back(r2_up ? 1 : -1);
      t.alice2_spin_sum += r2_up ? 1 : -1;
    }
  }

  const auto& bdist = bob == Basis::Z ? tbl.bob_z : tbl.bob_x;
  const int hex3 = rng.categorical(std::span<const double>(bdist.data(), 16));
  for (int s = 0; s < 4; ++s) {
    const int up = (hex3 >> (3 - s)) & 1;
    t.bob.push_back(up ? 1 : -1);
    t.bob_spin_sum += up ? 1 : -1;
  }
  t.ok = criterion_q(t.alice_codes, 1);
  return t;
}

GroupTranscript GroupSampler::sample_coins(AliceSetting setting, Rng& rng) const {
  if (setting == AliceSetting::PairXX)
    throw std::invalid_argument("coin source defines settings (a) and (b) only");
  const sources::CoinSpec spec = sources::coin_spec(gm_.params);
  const int slots = gm_.params.slots();
  GroupTranscript t;
  t.setting = setting;
  t.bob_basis = Basis::Z;
  for (int s = 0; s < slots; ++s) {
    const std::array<int, 4> c = sources::sample_coins(spec, rng);
    int code;
    if (setting == AliceSetting::Bell) {
      code = ((c[3] < 0 ? 1 : 0) << 1) | (c[0] * c[1] < 0 ? 1 : 0);
    } else {
      code = ((c[0] < 0 ? 1 : 0) << 1) | (c[1] < 0 ? 1 : 0);
      t.alice2.push_back(static_cast<std::int8_t>(c[1]));
      t.alice2_spin_sum += c[1];
    }
    t.alice_codes.push_back(static_cast<std::uint8_t>(code));
    t.bob.push_back(static_cast<std::int8_t>(c[2]));
    t.bob_spin_sum += c[2];
  }
  t.ok = criterion_q(t.alice_codes, gm_.params.group_n);
  return t;
}

}  // namespace hwsim::engine
