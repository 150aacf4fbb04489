#include "hwsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace hwsim::report {

std::string nearest_rational(double x) {
  if (!std::isfinite(x)) return "";
  for (int q = 1; q <= 256; ++q) {
    const double pd = std::round(x * q);
    if (std::abs(x - pd / q) < 1e-9) {
      const long p = static_cast<long>(pd);
      const long g = std::gcd(std::abs(p), static_cast<long>(q));
      const long pn = g ? p / g : p;
      const long qn = g ? q / g : q;
      if (qn == 1) return std::to_string(pn);
      return std::to_string(pn) + "/" + std::to_string(qn);
    }
  }
  return "";
}

json prob(double value) {
  json j;
  j["value"] = value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", value);
  j["decimal"] = buf;
  const std::string r = nearest_rational(value);
  if (!r.empty()) j["rational"] = r;
  return j;
}

json dist_to_json(const std::map<int, double>& dist) {
  json j = json::object();
  for (const auto& [s, p] : dist) j[std::to_string(s)] = prob(p);
  return j;
}

json dist_counts_to_json(const std::map<int, std::int64_t>& counts, std::int64_t total) {
  json j = json::object();
  for (const auto& [s, c] : counts) {
    json cell;
    cell["count"] = c;
    cell["frequency"] = total > 0 ? static_cast<double>(c) / total : 0.0;
    j[std::to_string(s)] = cell;
  }
  j["total"] = total;
  return j;
}

json error_table_to_json(const qkd::ErrorTable& t) {
  json j;
  j["p_ok_bit0"] = prob(t.p_ok_bit0);
  j["p_ok_bit1"] = prob(t.p_ok_bit1);
  j["p_bob0_given_ok_bit0"] =
      std::isnan(t.p_bob0_given_ok_bit0) ? json(nullptr) : prob(t.p_bob0_given_ok_bit0);
  j["p_bob0_given_ok_bit1"] =
      std::isnan(t.p_bob0_given_ok_bit1) ? json(nullptr) : prob(t.p_bob0_given_ok_bit1);
  j["p_bob0_unconditional_bit0"] = prob(t.p_bob0_uncond_bit0);
  j["p_bob0_unconditional_bit1"] = prob(t.p_bob0_uncond_bit1);
  return j;
}

json test_report_to_json(const security::TestReport& r) {
  json j;
  j["test"] = r.test;
  j["decision"] = security::to_string(r.decision);
  j["statistic"] = r.statistic;
  j["expected"] = r.expected;
  j["threshold"] = r.threshold;
  j["samples"] = r.samples;
  if (!r.values.empty()) {
    json v = json::object();
    for (const auto& [k, x] : r.values) v[k] = x;
    j["values"] = v;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json session_summary_to_json(const qkd::QkdSession& s) {
  json j;
  j["source"] = s.source_name;
  j["strategy"] = s.strategy_name;
  j["seed"] = s.seed;
  j["key_len"] = s.raw_key.size();
  j["groups"] = s.groups.size();
  j["sifted_bits"] = s.sifted.size();
  j["untransmitted_bits"] = s.untransmitted_bits;
  for (int bit = 0; bit < 2; ++bit) {
    json b;
    b["attempts"] = s.attempts_by_bit[bit];
    b["ok"] = s.ok_by_bit[bit];
    b["announce_b"] = s.announce_b_by_bit[bit];
    b["p_ok"] = s.attempts_by_bit[bit]
                    ? static_cast<double>(s.ok_by_bit[bit]) / s.attempts_by_bit[bit]
                    : 0.0;
    j[bit == 0 ? "raw_bit_0" : "raw_bit_1"] = b;
  }
  std::int64_t n0 = 0, n1 = 0, e01 = 0, e10 = 0;
  for (const qkd::SiftedBit& b : s.sifted) {
    if (b.alice_bit == 0) {
      ++n0;
      e01 += b.bob_bit == 1;
    } else {
      ++n1;
      e10 += b.bob_bit == 0;
    }
  }
  json err;
  err["sifted_bit0"] = n0;
  err["sifted_bit1"] = n1;
  err["rate_0_to_1"] = n0 ? static_cast<double>(e01) / n0 : 0.0;
  err["rate_1_to_0"] = n1 ? static_cast<double>(e10) / n1 : 0.0;
  j["sifted_errors"] = err;
  return j;
}

json session_transcripts_to_json(const qkd::QkdSession& s) {
  json j = session_summary_to_json(s);
  j["raw_key"] = s.raw_key;
  j["encoding_bits"] = s.encoding_bits;
  j["decoding_bits"] = s.decoding_bits;
  json groups = json::array();
  for (const qkd::SessionGroup& g : s.groups) {
    json gj;
    gj["key_index"] = g.key_index;
    gj["attempt"] = g.attempt;
    switch (g.transcript.setting) {
      case engine::AliceSetting::Bell: gj["setting"] = "a"; break;
      case engine::AliceSetting::PairZZ: gj["setting"] = "b"; break;
      case engine::AliceSetting::PairXX: gj["setting"] = "c"; break;
    }
    gj["bob_basis"] = g.transcript.bob_basis == qstate::Basis::Z ? "z" : "x";
    gj["alice_outcomes"] = g.transcript.alice_codes;
    if (!g.transcript.alice2.empty()) {
      gj["alice2"] = g.transcript.alice2;
      gj["alice2_spin_sum"] = g.transcript.alice2_spin_sum;
    }
    gj["ok"] = g.announced_ok;
    if (g.announced_ok) gj["announced"] = std::string(1, g.announced);
    gj["bob"] = g.transcript.bob;
    gj["bob_spin_sum"] = g.transcript.bob_spin_sum;
    gj["used"] = g.bob_used;
    gj["sacrificed"] = g.sacrificed;
    if (g.eve_predicted_bit >= 0) gj["eve_predicted_bit"] = g.eve_predicted_bit;
    if (!g.transcript.eve_bases.empty()) {
      json bases = json::array();
      for (qstate::Basis b : g.transcript.eve_bases)
        bases.push_back(b == qstate::Basis::Z ? "z" : "x");
      gj["eve_bases"] = bases;
      gj["eve_bits"] = g.transcript.eve_bits;
    }
    groups.push_back(std::move(gj));
  }
  j["group_transcripts"] = std::move(groups);
  json sifted = json::array();
  for (const qkd::SiftedBit& b : s.sifted) {
    json bj;
    bj["key_index"] = b.key_index;
    bj["group_index"] = b.group_index;
    bj["alice_bit"] = b.alice_bit;
    bj["bob_bit"] = b.bob_bit;
    bj["sacrificed"] = b.sacrificed;
    sifted.push_back(std::move(bj));
  }
  j["sifted"] = std::move(sifted);
  return j;
}

namespace {

void flatten(const json& j, const std::string& path, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, path.empty() ? k : path + "." + k, out);
    return;
  }
  if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) flatten(v, path + "." + std::to_string(i++), out);
    return;
  }
  // split path into (section, row, column)
  std::string section = path, row, column;
  if (const auto p1 = path.find('.'); p1 != std::string::npos) {
    section = path.substr(0, p1);
    const std::string rest = path.substr(p1 + 1);
    if (const auto p2 = rest.rfind('.'); p2 != std::string::npos) {
      row = rest.substr(0, p2);
      column = rest.substr(p2 + 1);
    } else {
      row = rest;
    }
  }
  out << section << ',' << row << ',' << column << ',';
  if (j.is_string())
    out << j.get<std::string>();
  else if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
    out << buf;
  } else
    out << j.dump();
  out << '\n';
}

}  // namespace

std::string to_csv(const json& j) {
  std::ostringstream out;
  out << "section,row,column,value\n";
  flatten(j, "", out);
  return out.str();
}

}  // namespace hwsim::report
