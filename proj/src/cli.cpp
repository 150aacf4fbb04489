#include "hwsim/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "hwsim/comm.hpp"
#include "hwsim/mc.hpp"
#include "hwsim/report.hpp"
#include "hwsim/security.hpp"

namespace hwsim::cli {

namespace {

using nlohmann::json;
using report::prob;
using sources::SourceModel;
using sources::SourceParams;

struct GlobalOpts {
  double a2 = 0.5;
  int group_n = 1;
  std::uint64_t seed = 12345;
  std::int64_t trials = 100000;
  int threads = 1;
  std::string format = "json";
  std::string output;
  bool omit_timestamp = false;
};

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json provenance(const GlobalOpts& g) {
  json j;
  j["tool"] = "hwsim";
  j["version"] = "1.0.0";
  j["seed"] = g.seed;
  // the worker count is an execution detail: reports must not depend on it
  if (!g.omit_timestamp) j["timestamp"] = iso_now();
  return j;
}

double sigma3(double p, std::int64_t n) {
  return n > 0 ? 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

/// One MC-versus-exact cell: pass when the frequency sits within 3 sigma of
/// the exact probability (exact 0/1 probabilities admit no deviation).
json mc_cell(const std::string& name, double exact, std::int64_t count, std::int64_t n,
             bool* all_pass) {
  json j;
  const double freq = n > 0 ? static_cast<double>(count) / n : 0.0;
  const double bound = sigma3(exact, n);
  const bool pass = n > 0 && std::abs(freq - exact) <= bound + 1e-15;
  j["name"] = name;
  j["exact"] = prob(exact);
  j["mc"] = freq;
  j["n"] = n;
  j["bound_3sigma"] = bound;
  j["pass"] = pass;
  if (!pass && all_pass) *all_pass = false;
  return j;
}

int emit(const json& j, const GlobalOpts& g, std::ostream& out, int code) {
  std::string text =
      g.format == "csv" ? report::to_csv(j) : j.dump(2) + "\n";
  if (!g.output.empty()) {
    std::ofstream f(g.output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + g.output);
    f << text;
  } else {
    out << text;
  }
  return code;
}

SourceModel parse_source(const std::string& name, int hex2, int hex3) {
  auto m = SourceModel::by_name(name);
  if (!m) throw CLI::ValidationError("--source", "unknown source model: " + name);
  if (m->kind == sources::SourceKind::EveFixedSequence) {
    m->hex2 = hex2;
    m->hex3 = hex3;
  }
  return *m;
}

adversary::EveStrategy parse_eve(const std::string& name, int hex2, int hex3) {
  auto s = adversary::EveStrategy::by_name(name);
  if (!s) throw CLI::ValidationError("--eve", "unknown eavesdropping strategy: " + name);
  if (s->kind == adversary::EveStrategy::Kind::ReplaceSource &&
      s->replacement.kind == sources::SourceKind::EveFixedSequence) {
    s->replacement.hex2 = hex2;
    s->replacement.hex3 = hex3;
  }
  return *s;
}

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

int cmd_dist(const GlobalOpts& g, const std::string& source_name, int hex2, int hex3,
             const std::string& setting_name, bool unconditioned, std::ostream& out) {
  const SourceModel model = parse_source(source_name, hex2, hex3);
  const SourceParams params = SourceParams::from_a2(g.a2, g.group_n);
  const comm::CommSetting setting =
      setting_name == "a" ? comm::CommSetting::A_Bell : comm::CommSetting::B_ZZ;

  json j;
  j["config"] = {{"command", "dist"},     {"source", model.name()},
                 {"setting", setting_name}, {"a2", g.a2},
                 {"group_n", g.group_n},  {"trials", g.trials},
                 {"condition_ok", !unconditioned}};
  j["provenance"] = provenance(g);

  const double p_ok = comm::ok_probability_exact(model, params, setting);
  json exact;
  exact["p_ok"] = prob(p_ok);
  const comm::SpinSumDist uncond =
      comm::spin_sum_distribution_exact(model, params, setting, false);
  exact["spin_sum"] = report::dist_to_json(uncond);
  bool conditional_feasible = p_ok > engine::kZeroProb;
  comm::SpinSumDist cond;
  if (conditional_feasible) {
    cond = comm::spin_sum_distribution_exact(model, params, setting, true);
    exact["spin_sum_given_ok"] = report::dist_to_json(cond);
    const comm::Moments m = comm::moments(cond);
    exact["moments_given_ok"] = {{"mean", m.mean}, {"second", m.second}};
  } else {
    exact["spin_sum_given_ok"] = nullptr;
  }
  j["exact"] = exact;

  bool all_pass = true;
  if (g.trials > 0) {
    const mc::SpinSumCounts counts =
        mc::spin_sum_mc(model, params, setting, g.trials, g.seed, g.threads);
    json sampled;
    sampled["attempts"] = counts.attempts;
    sampled["ok"] = counts.ok;
    sampled["given_ok"] = report::dist_counts_to_json(counts.given_ok, counts.ok);
    sampled["all"] = report::dist_counts_to_json(counts.all, counts.attempts);
    j["sampled"] = sampled;

    json checks = json::array();
    checks.push_back(mc_cell("p_ok", p_ok, counts.ok, counts.attempts, &all_pass));
    const auto& target = unconditioned || !conditional_feasible ? uncond : cond;
    const auto& hist = unconditioned || !conditional_feasible ? counts.all : counts.given_ok;
    const std::int64_t n =
        unconditioned || !conditional_feasible ? counts.attempts : counts.ok;
    for (const auto& [s, p] : target) {
      const auto it = hist.find(s);
      checks.push_back(mc_cell("spin_sum[" + std::to_string(s) + "]", p,
                               it == hist.end() ? 0 : it->second, n, &all_pass));
    }
    j["checks"] = checks;
  }
  return emit(j, g, out, all_pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// protocol
// ---------------------------------------------------------------------------

int cmd_protocol(const GlobalOpts& g, const std::string& source_name, std::ostream& out) {
  const SourceModel model = parse_source(source_name, 0xC, 0x3);
  const SourceParams params = SourceParams::from_a2(g.a2, g.group_n);

  json j;
  j["config"] = {{"command", "protocol"},
                 {"source", model.name()},
                 {"a2", g.a2},
                 {"group_n", g.group_n},
                 {"trials", g.trials}};
  j["provenance"] = provenance(g);

  json exact;
  exact["p_ok_setting_a"] =
      prob(comm::ok_probability_exact(model, params, comm::CommSetting::A_Bell));
  exact["p_ok_setting_b"] =
      prob(comm::ok_probability_exact(model, params, comm::CommSetting::B_ZZ));
  exact["misdecode_probability"] = prob(comm::misdecode_probability(params, params.group_n));
  j["exact"] = exact;

  bool all_pass = true;
  if (g.trials > 0) {
    json sampled;
    json checks = json::array();
    for (comm::CommSetting s : {comm::CommSetting::A_Bell, comm::CommSetting::B_ZZ}) {
      const std::string name = s == comm::CommSetting::A_Bell ? "a" : "b";
      const mc::SpinSumCounts counts =
          mc::spin_sum_mc(model, params, s, g.trials, g.seed, g.threads);
      // decode: nonzero sum reads as setting (a)
      std::int64_t decode_a = 0;
      for (const auto& [sum, c] : counts.given_ok)
        if (sum != 0) decode_a += c;
      json sj;
      sj["attempts"] = counts.attempts;
      sj["ok"] = counts.ok;
      sj["decoded_a_given_ok"] =
          counts.ok ? static_cast<double>(decode_a) / counts.ok : 0.0;
      sampled[name] = sj;
      const double p_ok = comm::ok_probability_exact(model, params, s);
      checks.push_back(
          mc_cell("p_ok_setting_" + name, p_ok, counts.ok, counts.attempts, &all_pass));
      if (p_ok > engine::kZeroProb) {
        const double p_decode_a =
            s == comm::CommSetting::A_Bell
                ? 1.0 - comm::misdecode_probability(params, params.group_n)
                : 0.0;
        checks.push_back(mc_cell("decoded_a_given_ok_setting_" + name, p_decode_a,
                                 decode_a, counts.ok, &all_pass));
      }
    }
    j["sampled"] = sampled;
    j["checks"] = checks;
  }
  return emit(j, g, out, all_pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// qkd / security
// ---------------------------------------------------------------------------

int cmd_session(const GlobalOpts& g, const std::string& command,
                const std::string& eve_name, int hex2, int hex3, int key_len,
                double sacrifice, const std::vector<std::string>& tests,
                bool dump_session, std::ostream& out) {
  const adversary::EveStrategy strategy = parse_eve(eve_name, hex2, hex3);
  const SourceParams params = SourceParams::from_a2(g.a2, 1);

  json j;
  j["config"] = {{"command", command}, {"eve", strategy.name()},
                 {"a2", g.a2},         {"key_len", key_len},
                 {"sacrifice_fraction", sacrifice}};
  j["provenance"] = provenance(g);

  qkd::SessionOptions opts;
  opts.sacrifice_fraction = sacrifice;
  const qkd::QkdSession session =
      qkd::run_qkd_session(params, key_len, strategy, g.seed, opts);
  j["session"] = dump_session ? report::session_transcripts_to_json(session)
                              : report::session_summary_to_json(session);

  if (strategy.kind == adversary::EveStrategy::Kind::ReplaceSource) {
    const adversary::AccuracyReport acc = adversary::eve_accuracy(session);
    j["eve"] = {{"accuracy", acc.accuracy},
                {"covered", acc.covered},
                {"sifted_total", acc.total}};
  } else if (strategy.kind == adversary::EveStrategy::Kind::InterceptResend) {
    j["eve"] = {{"basis_match_rate", adversary::eve_basis_match_rate(session)}};
  }

  const std::vector<security::TestReport> reports =
      tests.empty() ? security::run_all_tests(session)
                    : security::run_tests(session, tests);
  json tj = json::array();
  for (const security::TestReport& r : reports)
    tj.push_back(report::test_report_to_json(r));
  j["tests"] = tj;
  return emit(j, g, out, 0);
}

// ---------------------------------------------------------------------------
// reproduce-tables
// ---------------------------------------------------------------------------

json table_cells_error(const qkd::ErrorTable& exact, const mc::ErrorTableCounts& counts,
                       double exp_ok0, double exp_ok1, double exp_b0_ok0,
                       double exp_b0_ok1, bool* all_pass) {
  json cells = json::array();
  auto close = [](double x, double y) { return std::abs(x - y) < qstate::kTol; };
  auto exact_cell = [&](const std::string& name, double got, double want) {
    json c;
    c["name"] = name;
    c["exact"] = prob(got);
    c["expected"] = prob(want);
    const bool pass = close(got, want);
    c["pass"] = pass;
    if (!pass) *all_pass = false;
    return c;
  };
  cells.push_back(exact_cell("P(ok | raw 0)", exact.p_ok_bit0, exp_ok0));
  cells.push_back(exact_cell("P(ok | raw 1)", exact.p_ok_bit1, exp_ok1));
  if (!std::isnan(exp_b0_ok0))
    cells.push_back(
        exact_cell("P(bob=0 | ok, raw 0)", exact.p_bob0_given_ok_bit0, exp_b0_ok0));
  if (!std::isnan(exp_b0_ok1))
    cells.push_back(
        exact_cell("P(bob=0 | ok, raw 1)", exact.p_bob0_given_ok_bit1, exp_b0_ok1));

  // Monte Carlo at the same cells
  cells.push_back(mc_cell("mc P(ok | raw 0)", exp_ok0, counts.bit[0].ok,
                          counts.bit[0].attempts, all_pass));
  cells.push_back(mc_cell("mc P(ok | raw 1)", exp_ok1, counts.bit[1].ok,
                          counts.bit[1].attempts, all_pass));
  if (!std::isnan(exp_b0_ok0))
    cells.push_back(mc_cell("mc P(bob=0 | ok, raw 0)", exp_b0_ok0, counts.bit[0].bob0,
                            counts.bit[0].used, all_pass));
  if (!std::isnan(exp_b0_ok1))
    cells.push_back(mc_cell("mc P(bob=0 | ok, raw 1)", exp_b0_ok1, counts.bit[1].bob0,
                            counts.bit[1].used, all_pass));
  return cells;
}

int cmd_reproduce_tables(const GlobalOpts& g, std::ostream& out) {
  // All printed tables assume a = b and N = 1.
  const SourceParams params = SourceParams::from_a2(0.5, 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  json j;
  j["config"] = {{"command", "reproduce-tables"}, {"a2", 0.5}, {"trials", g.trials}};
  j["provenance"] = provenance(g);
  bool all_pass = true;

  struct Spec {
    const char* key;
    const char* title;
    SourceModel model;
    double ok0, ok1, b0_ok0, b0_ok1;
  };
  const Spec specs[] = {
      {"table1", "normal operation", SourceModel::honest(), 6.0 / 64, 6.0 / 64, 1.0,
       3.0 / 8},
      {"table4", "eve tunes the source for zeros", SourceModel::tuned_zeros(), 16.0 / 64,
       6.0 / 64, 1.0, 1.0},
      {"table5", "eve tunes the source for ones", SourceModel::tuned_ones(), 0.0,
       6.0 / 64, nan, 0.0},
      {"table6", "eve tunes the source", SourceModel::mixture40(), 6.0 / 64, 6.0 / 64,
       1.0, 3.0 / 8},
  };
  for (const Spec& s : specs) {
    const qkd::ErrorTable exact = qkd::error_table_exact(s.model, params);
    const mc::ErrorTableCounts counts = mc::error_table_mc(
        s.model, adversary::EveStrategy::none(), params, g.trials, g.seed, g.threads);
    json tj;
    tj["title"] = s.title;
    tj["exact"] = report::error_table_to_json(exact);
    tj["cells"] = table_cells_error(exact, counts, s.ok0, s.ok1, s.b0_ok0, s.b0_ok1,
                                    &all_pass);
    if (s.model.kind == sources::SourceKind::EveTunedOnes) {
      // P(OK | raw 0) vanishes; Bob's unconditional decode must still be 1.
      json c;
      c["name"] = "P(bob=1 unconditional)";
      c["exact"] = prob(1.0 - exact.p_bob0_uncond_bit0);
      c["expected"] = prob(1.0);
      const bool pass = std::abs(exact.p_bob0_uncond_bit0) < qstate::kTol;
      c["pass"] = pass;
      if (!pass) all_pass = false;
      tj["cells"].push_back(c);
    }
    j["tables"][s.key] = tj;
  }

  // Table 2: intercept-resend rows.
  {
    const adversary::InterceptTable exact = adversary::intercept_table_exact(params);
    const mc::InterceptCounts counts =
        mc::intercept_mc(params, g.trials, g.seed, g.threads);
    json tj;
    tj["title"] = "eve is listening";
    tj["exact"] = {{"p_ok", prob(exact.p_ok)},
                   {"bit0_correct_to0", prob(exact.bit0_correct_to0)},
                   {"bit0_incorrect_to0", prob(exact.bit0_incorrect_to0)},
                   {"bit0_mean_to0", prob(exact.bit0_mean_to0)},
                   {"bit1_to0", prob(exact.bit1_to0)}};
    json cells = json::array();
    auto exact_cell = [&](const std::string& name, double got, double want) {
      json c;
      c["name"] = name;
      c["exact"] = prob(got);
      c["expected"] = prob(want);
      const bool pass = std::abs(got - want) < qstate::kTol;
      c["pass"] = pass;
      if (!pass) all_pass = false;
      return c;
    };
    cells.push_back(exact_cell("P(ok)", exact.p_ok, 6.0 / 64));
    cells.push_back(exact_cell("P(bob=0 | correct)", exact.bit0_correct_to0, 1.0));
    cells.push_back(exact_cell("P(bob=0 | incorrect)", exact.bit0_incorrect_to0, 3.0 / 8));
    cells.push_back(exact_cell("P(bob=0 | mean)", exact.bit0_mean_to0, 11.0 / 16));
    cells.push_back(exact_cell("P(bob=1 | mean)", 1.0 - exact.bit0_mean_to0, 5.0 / 16));
    cells.push_back(exact_cell("P(bob=0 | raw 1)", exact.bit1_to0, 3.0 / 8));
    cells.push_back(mc_cell("mc P(bob=0 | correct)", 1.0, counts.bit0_correct.bob0,
                            counts.bit0_correct.used, &all_pass));
    cells.push_back(mc_cell("mc P(bob=0 | incorrect)", 3.0 / 8,
                            counts.bit0_incorrect.bob0, counts.bit0_incorrect.used,
                            &all_pass));
    cells.push_back(mc_cell("mc P(bob=0 | raw 1)", 3.0 / 8, counts.bit1.bob0,
                            counts.bit1.used, &all_pass));
    const std::int64_t att0 = counts.bit0_correct.attempts + counts.bit0_incorrect.attempts;
    cells.push_back(mc_cell("mc P(ok | raw 0)", 6.0 / 64,
                            counts.bit0_correct.ok + counts.bit0_incorrect.ok, att0,
                            &all_pass));
    tj["cells"] = cells;
    j["tables"]["table2"] = tj;
  }

  // Table 3: embedded reference constants.
  {
    const qkd::Bb84Reference ref = qkd::bb84_reference();
    json tj;
    tj["title"] = "comparison with bb84";
    tj["bb84"] = {{"bit0_absent", prob(ref.bb84_bit0_absent)},
                  {"bit1_absent", prob(ref.bb84_bit1_absent)},
                  {"bit0_present", prob(ref.bb84_bit0_present)},
                  {"bit1_present", prob(ref.bb84_bit1_present)}};
    tj["hw"] = {{"bit0_absent", prob(ref.hw_bit0_absent)},
                {"bit1_absent", prob(ref.hw_bit1_absent)},
                {"bit0_present", prob(ref.hw_bit0_present)},
                {"bit1_present", prob(ref.hw_bit1_present)}};
    // cross-check the HW column against the computed tables
    const adversary::InterceptTable t2 = adversary::intercept_table_exact(params);
    const qkd::ErrorTable t1 = qkd::error_table_exact(SourceModel::honest(), params);
    json cells = json::array();
    auto cell = [&](const std::string& name, double got, double want) {
      json c;
      c["name"] = name;
      c["exact"] = prob(got);
      c["expected"] = prob(want);
      const bool pass = std::abs(got - want) < qstate::kTol;
      c["pass"] = pass;
      if (!pass) all_pass = false;
      return c;
    };
    cells.push_back(cell("hw bit0 absent = 1 - P(0->0)", 1.0 - t1.p_bob0_given_ok_bit0,
                         ref.hw_bit0_absent));
    cells.push_back(
        cell("hw bit1 absent = P(1->0)", t1.p_bob0_given_ok_bit1, ref.hw_bit1_absent));
    cells.push_back(cell("hw bit0 present = 1 - mean(0->0)", 1.0 - t2.bit0_mean_to0,
                         ref.hw_bit0_present));
    cells.push_back(cell("hw bit1 present = P(1->0)", t2.bit1_to0, ref.hw_bit1_present));
    tj["cells"] = cells;
    j["tables"]["table3"] = tj;
  }

  // Mixture-40 bookkeeping identities.
  {
    const qkd::ErrorTable t6 = qkd::error_table_exact(SourceModel::mixture40(), params);
    json cells = json::array();
    auto cell = [&](const std::string& name, double got, double want) {
      json c;
      c["name"] = name;
      c["exact"] = prob(got);
      c["expected"] = prob(want);
      const bool pass = std::abs(got - want) < qstate::kTol;
      c["pass"] = pass;
      if (!pass) all_pass = false;
      return c;
    };
    cells.push_back(cell("P(ok | raw 0) balanced", t6.p_ok_bit0, 6.0 / 64));
    cells.push_back(cell("P(ok | raw 1) balanced", t6.p_ok_bit1, 6.0 / 64));
    cells.push_back(cell("P(bob=0 | ok, raw 1)", t6.p_bob0_given_ok_bit1, 3.0 / 8));
    j["tables"]["tuned_mixture_rates"] = {{"cells", cells}};
  }

  j["pass"] = all_pass;
  return emit(j, g, out, all_pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// verify-identities
// ---------------------------------------------------------------------------

const char* status_name(sources::IdentityStatus s) {
  switch (s) {
    case sources::IdentityStatus::Exact: return "exact";
    case sources::IdentityStatus::GlobalPhase: return "global_phase";
    case sources::IdentityStatus::CorrectedForm: return "corrected_form";
    case sources::IdentityStatus::InfeasibleAsExpected: return "infeasible_as_expected";
    case sources::IdentityStatus::Failed: return "failed";
  }
  return "?";
}

int cmd_verify_identities(const GlobalOpts& g, std::ostream& out) {
  json j;
  j["config"] = {{"command", "verify-identities"}};
  j["provenance"] = provenance(g);
  bool all_pass = true;
  json arr = json::array();
  for (const sources::IdentityCheck& c : sources::verify_state_identities()) {
    json cj;
    cj["name"] = c.name;
    cj["status"] = status_name(c.status);
    cj["pass"] = c.pass;
    cj["max_diff"] = c.max_diff;
    if (c.residual > 0.0) cj["residual"] = c.residual;
    if (!c.note.empty()) cj["note"] = c.note;
    arr.push_back(std::move(cj));
    if (!c.pass) all_pass = false;
  }
  j["identities"] = arr;
  j["pass"] = all_pass;
  return emit(j, g, out, all_pass ? 0 : 1);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hwsim: simulator and cryptanalysis workbench for the Home-Whitaker "
               "communication and key-distribution protocols"};
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--a2", g.a2, "particle-1 coefficient a^2")->check(CLI::Range(0.0, 1.0));
  app.add_option("-N,--group-n", g.group_n, "group size N (4N timeslots)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "master seed")->envname("HWSIM_SEED");
  app.add_option("--trials", g.trials, "Monte Carlo group count");
  app.add_option("--threads", g.threads, "worker threads for Monte Carlo")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "write the report to a file");
  app.add_flag("--omit-timestamp", g.omit_timestamp,
               "omit the timestamp (for byte-identical reports)");
  app.set_config("--config", "", "key=value config file");

  // dist
  auto* dist = app.add_subcommand("dist", "spin-sum distributions, exact and sampled");
  std::string source_name = "honest";
  std::string setting_name = "a";
  bool unconditioned = false;
  int hex2 = 0xC, hex3 = 0x3;
  dist->add_option("--source", source_name, "source model");
  dist->add_option("--setting", setting_name, "alice setting")
      ->check(CLI::IsMember({"a", "b"}));
  dist->add_flag("--unconditioned", unconditioned, "do not condition on OK");
  dist->add_option("--hex2", hex2, "fixed-seq pattern to Alice");
  dist->add_option("--hex3", hex3, "fixed-seq pattern to Bob");

  // protocol
  auto* protocol =
      app.add_subcommand("protocol", "communication-protocol demo and misdecode stats");
  std::string proto_source = "honest";
  protocol->add_option("--source", proto_source, "source model");

  // qkd / security
  auto add_session_opts = [&](CLI::App* cmd, std::string& eve, int& klen, double& sac,
                              std::vector<std::string>& tests, bool& dump) {
    cmd->add_option("--eve", eve, "eavesdropping strategy");
    cmd->add_option("--key-len", klen, "raw-key length")->check(CLI::PositiveNumber);
    cmd->add_option("--sacrifice", sac, "check-data fraction")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--tests", tests,
                    "security tests to run (default: all)")
        ->delimiter(',');
    cmd->add_flag("--dump-session", dump, "embed full group transcripts");
    cmd->add_option("--hex2", hex2, "fixed-seq pattern to Alice");
    cmd->add_option("--hex3", hex3, "fixed-seq pattern to Bob");
  };
  auto* qkd_cmd = app.add_subcommand("qkd", "run a key-distribution session");
  std::string qkd_eve = "none";
  int qkd_keylen = 2000;
  double qkd_sacrifice = 0.25;
  std::vector<std::string> qkd_tests;
  bool qkd_dump = false;
  add_session_opts(qkd_cmd, qkd_eve, qkd_keylen, qkd_sacrifice, qkd_tests, qkd_dump);

  auto* sec_cmd = app.add_subcommand("security", "run the detection-test battery");
  std::string sec_eve = "none";
  int sec_keylen = 4000;
  double sec_sacrifice = 0.25;
  std::vector<std::string> sec_tests;
  bool sec_dump = false;
  add_session_opts(sec_cmd, sec_eve, sec_keylen, sec_sacrifice, sec_tests, sec_dump);

  auto* tables = app.add_subcommand("reproduce-tables",
                                    "reproduce all printed tables exactly and by MC");
  auto* verify = app.add_subcommand("verify-identities", "hex-ket identity suite");

  app.require_subcommand(1);

  std::vector<const char*> argv;
  argv.push_back("hwsim");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (dist->parsed())
      return cmd_dist(g, source_name, hex2, hex3, setting_name, unconditioned, out);
    if (protocol->parsed()) return cmd_protocol(g, proto_source, out);
    if (qkd_cmd->parsed())
      return cmd_session(g, "qkd", qkd_eve, hex2, hex3, qkd_keylen, qkd_sacrifice,
                         qkd_tests, qkd_dump, out);
    if (sec_cmd->parsed())
      return cmd_session(g, "security", sec_eve, hex2, hex3, sec_keylen, sec_sacrifice,
                         sec_tests, sec_dump, out);
    if (tables->parsed()) return cmd_reproduce_tables(g, out);
    if (verify->parsed()) return cmd_verify_identities(g, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command given\n";
  return 2;
}

}  // namespace hwsim::cli
