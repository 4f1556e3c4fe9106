#include "commands.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fatpoints/degen.hpp"
#include "fatpoints/dims.hpp"
#include "fatpoints/lowdeg.hpp"
#include "fatpoints/oracle.hpp"
#include "fatpoints/planar.hpp"
#include "report_json.hpp"

#ifndef FATPOINTS_VERSION
#define FATPOINTS_VERSION "0.0.0"
#endif

namespace fatpoints::commands {

using nlohmann::json;

namespace {

constexpr const char* kRuleH0Surface = "h0_surface: C3(e+3) - C3(e-d+3)";
constexpr const char* kRuleH0Curve = "h0_curve: Koszul inclusion-exclusion";
constexpr const char* kRuleVdim = "vdim: h0 - sum C(m+1,2); edim = max(vdim, 0)";
constexpr const char* kRuleG = "g: nonnegative root of g(g+1)/2 = h0(O_S(a)) - 1";
constexpr const char* kRulePlanar = "planar: split line if m1+m2 >= e+1, else Cremona a = m1+m2+m3-e > 0";
constexpr const char* kRuleQuadric = "quadric: L_e^2(G) -> L_2e^1(e,e,G)";
constexpr const char* kRuleCubic = "cubic: L_e^3(G) -> L_3e^1(e^6,G)";
constexpr const char* kRuleOracle = "oracle: Taylor rows of x^i y^j (i+j < m) in a surface chart; delta appends x^(m-j) y^j, j < n";
constexpr const char* kRuleLedger = "ledger: residuals first; tipping item leaves delta(m-1,m-v); others take colon by C";
constexpr const char* kRuleStaircase = "staircase: restrict Fat(m)=m, delta(m,n)=m+1; colon Fat(m)->Fat(m-1), delta(m,n)->delta(m-1,n-1)";
constexpr const char* kRuleDeltaReplace = "delta replacement: nonspecial with delta(m,n) if nonspecial with m and m+1";
constexpr const char* kRuleGeneralPosition = "general position: alpha + 2 beta <= h0(O_T(2)) - 1";

struct Ctx {
  const json& req;
  const Defaults& defaults;
  json config = json::object();
  json result = json::object();
  std::vector<std::string> rules;
};

const json* field(const json& r, const char* k) {
  if (!r.is_object()) return nullptr;
  auto it = r.find(k);
  return it == r.end() || it->is_null() ? nullptr : &*it;
}

std::int64_t req_int(Ctx& c, const char* k) {
  const json* v = field(c.req, k);
  if (!v) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + k + "'");
  if (!v->is_number_integer()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + k + "' must be an integer");
  c.config[k] = *v;
  return v->get<std::int64_t>();
}

std::int64_t opt_int(Ctx& c, const char* k, std::int64_t def) {
  const json* v = field(c.req, k);
  if (v && !v->is_number_integer()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + k + "' must be an integer");
  const std::int64_t x = v ? v->get<std::int64_t>() : def;
  c.config[k] = x;
  return x;
}

bool opt_bool(Ctx& c, const char* k, bool def) {
  const json* v = field(c.req, k);
  if (v && !v->is_boolean()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + k + "' must be a boolean");
  const bool x = v ? v->get<bool>() : def;
  c.config[k] = x;
  return x;
}

std::optional<std::string> opt_string(Ctx& c, const char* k) {
  const json* v = field(c.req, k);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + k + "' must be a string");
  c.config[k] = *v;
  return v->get<std::string>();
}

int as_int(std::int64_t v, const char* what) {
  if (v < -1000000 || v > 1000000) throw Error(ErrorCode::InvalidArgument, std::string(what) + " out of range");
  return static_cast<int>(v);
}

Multiplicities mults(Ctx& c, const char* k = "mults") {
  const json* v = field(c.req, k);
  auto m = report::mults_from(v ? *v : json());
  c.config[k] = format_multiplicities(m);
  return m;
}

// Ordered list "4,4,3" or "4^2,3" without sorting.
std::vector<std::int64_t> ordered_list(Ctx& c, const char* k) {
  const json* v = field(c.req, k);
  if (!v) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + k + "'");
  std::vector<std::int64_t> out;
  if (v->is_array()) {
    for (const auto& x : *v) {
      if (!x.is_number_integer()) throw Error(ErrorCode::InvalidArgument, std::string(k) + " must hold integers");
      out.push_back(x.get<std::int64_t>());
    }
  } else if (v->is_string()) {
    std::stringstream ss(v->get<std::string>());
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      for (int m : parse_multiplicities(tok)) out.push_back(m);
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, std::string(k) + " must be a list");
  }
  c.config[k] = out;
  return out;
}

oracle::OracleConfig oracle_config(Ctx& c) {
  oracle::OracleConfig cfg;
  cfg.p = static_cast<std::uint32_t>(opt_int(c, "prime", c.defaults.prime));
  cfg.p2 = static_cast<std::uint32_t>(opt_int(c, "prime2", c.defaults.prime2));
  cfg.seed = static_cast<std::uint64_t>(opt_int(c, "seed", static_cast<std::int64_t>(c.defaults.seed)));
  cfg.trials = as_int(opt_int(c, "trials", 3), "trials");
  cfg.max_retries = as_int(opt_int(c, "max_retries", 64), "max_retries");
  cfg.column_budget = opt_int(c, "budget", 2000);
  cfg.threads = as_int(opt_int(c, "threads", c.defaults.threads), "threads");
  cfg.validate();
  return cfg;
}

using Handler = std::function<Verdict(Ctx&)>;

Verdict h0_surface_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d"), e = as_int(req_int(c, "e"), "e");
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  c.result["value"] = dims::h0_surface(d, e);
  c.rules = {kRuleH0Surface};
  return kVerified;
}

Verdict h0_curve_cmd(Ctx& c) {
  const int s = as_int(req_int(c, "s"), "s"), t = as_int(req_int(c, "t"), "t");
  const int k = as_int(req_int(c, "k"), "k");
  if (s < 1 || t < 1) throw Error(ErrorCode::InvalidArgument, "s, t must be >= 1");
  c.result["value"] = dims::h0_curve(dims::CICurve{s, t}, k);
  c.rules = {kRuleH0Curve};
  return kVerified;
}

Verdict vdim_cmd(Ctx& c) {
  const auto spec = SurfaceSeriesSpec::make(as_int(req_int(c, "d"), "d"), as_int(req_int(c, "e"), "e"), mults(c));
  c.result = {{"series", spec.to_string()},
              {"h0", dims::h0_surface(spec.d, spec.e)},
              {"degree", dims::scheme_degree(spec.mults)},
              {"vdim", dims::vdim(spec)},
              {"edim", dims::edim(spec)}};
  c.result["value"] = c.result["vdim"];
  c.rules = {kRuleH0Surface, kRuleVdim};
  return kVerified;
}

json pairs_json(const std::vector<std::pair<int, int>>& v) {
  json a = json::array();
  for (const auto& [x, y] : v) a.push_back({x, y});
  return a;
}

Verdict g_scan_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d");
  const int amax = as_int(opt_int(c, "amax", 60), "amax");
  const auto scan = dims::scan_superadditivity(d, amax);
  const std::set<std::pair<int, int>> expected{{1, 1}, {2, 1}};
  const bool match = std::set<std::pair<int, int>>(scan.failures.begin(), scan.failures.end()) == expected;
  c.result = {{"failures", pairs_json(scan.failures)},
              {"expected_failures", pairs_json({{1, 1}, {2, 1}})},
              {"matches_expected", match},
              {"warning", scan.warning}};
  c.rules = {kRuleG};
  if (scan.warning) return kInconclusive;
  return match ? kVerified : kViolated;
}

Verdict convexity_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d");
  const int kmax = as_int(opt_int(c, "kmax", 50), "kmax");
  const auto fails = dims::scan_discrete_convexity(d, kmax);
  c.result = {{"failures", fails}};
  c.rules = {kRuleG};
  return fails.empty() ? kVerified : kViolated;
}

json small_pairs_json(const dims::SmallPairsReport& r) {
  json v = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 20; ++i) {
    const auto& x = r.violations[i];
    v.push_back({{"a", x.a}, {"a_prime", x.a_prime}, {"b", x.b}, {"b_prime", x.b_prime}, {"v_sum", x.v_sum}});
  }
  return {{"checked", r.checked}, {"min_v_21", r.min_v_21}, {"violations", r.violations.size()}, {"examples", v}};
}

Verdict small_pairs_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d");
  const int points = as_int(opt_int(c, "points", 9), "points");
  const auto r = dims::check_small_pairs(d, points);
  c.result = small_pairs_json(r);
  c.rules = {kRuleG, "v(aH - sum b E) = h0(O_S(a)) - 1 - sum b(b+1)/2"};
  return r.violations.empty() ? kVerified : kViolated;
}

Verdict inequalities_cmd(Ctx& c) {
  const int d = as_int(opt_int(c, "d", 5), "d");
  const int amax = as_int(opt_int(c, "amax", 60), "amax");
  const int kmax = as_int(opt_int(c, "kmax", 50), "kmax");
  const int points = as_int(opt_int(c, "points", 9), "points");
  const int samples = as_int(opt_int(c, "samples", 10000), "samples");
  const auto seed = static_cast<std::uint64_t>(opt_int(c, "seed", static_cast<std::int64_t>(c.defaults.seed)));
  if (d < 5) throw Error(ErrorCode::InvalidArgument, "the inequalities are stated for d >= 5");

  json checks = json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool ok, json detail) {
    checks.push_back({{"name", name}, {"ok", ok}, {"detail", std::move(detail)}});
    all = all && ok;
  };
  if (d == 5) {
    const double want[] = {1.77, 1.91, 2.08};
    for (int a = 1; a <= 3; ++a) {
      const double diff = dims::g_value(5, a + 1) - dims::g_value(5, a);
      add("g(" + std::to_string(a + 1) + ") - g(" + std::to_string(a) + ")",
          std::abs(diff - want[a - 1]) <= 0.01, {{"value", diff}, {"expected", want[a - 1]}, {"tolerance", 0.01}});
    }
  }
  const auto scan = dims::scan_superadditivity(d, amax);
  const std::set<std::pair<int, int>> expected{{1, 1}, {2, 1}};
  add("superadditivity failures", std::set<std::pair<int, int>>(scan.failures.begin(), scan.failures.end()) == expected,
      {{"failures", pairs_json(scan.failures)}});
  const auto conv = dims::scan_discrete_convexity(d, kmax);
  add("discrete convexity", conv.empty(), {{"failures", conv}});
  const auto sp = dims::check_small_pairs(d, points);
  add("small pairs", sp.violations.empty(), small_pairs_json(sp));
  const std::tuple<int, int, int> mins[] = {{2, 1, 5}, {1, 1, 5}, {3, 3, 3}};
  for (const auto& [a, ap, pts] : mins) {
    const auto r = dims::randomized_min_config(d, a, ap, pts, samples, seed);
    add("min configuration (" + std::to_string(a) + "," + std::to_string(ap) + ")",
        r.ok && r.min_value >= r.single_point_value - dims::kGTolerance,
        {{"min_value", r.min_value}, {"single_point_value", r.single_point_value}, {"samples", r.samples}});
  }
  c.result = {{"checks", checks}, {"all_ok", all}};
  c.rules = {kRuleG, "tolerance 1e-6"};
  return all ? kVerified : kViolated;
}

Verdict expect_special(Ctx& c, bool special) {
  const auto expect = opt_string(c, "expect");
  if (!expect) return kVerified;
  if (*expect != "special" && *expect != "nonspecial") {
    throw Error(ErrorCode::InvalidArgument, "expect must be 'special' or 'nonspecial'");
  }
  c.result["expected"] = *expect;
  return (*expect == "special") == special ? kVerified : kViolated;
}

Verdict classify_cmd(Ctx& c) {
  const auto spec = SurfaceSeriesSpec::make(as_int(req_int(c, "d"), "d"), as_int(req_int(c, "e"), "e"), mults(c));
  if (spec.d <= 3) {
    const auto v = lowdeg::classify_lowdeg(spec);
    c.result = report::to_json(v);
    c.result["series"] = spec.to_string();
    c.result["route"] = spec.d == 1 ? "planar" : (spec.d == 2 ? "quadric" : "cubic");
    c.rules = {kRuleVdim, kRulePlanar};
    if (spec.d == 2) c.rules.push_back(kRuleQuadric);
    if (spec.d == 3) c.rules.push_back(kRuleCubic);
    const Verdict ev = expect_special(c, v.special);
    if (ev != kVerified) return ev;
    return v.confidence == planar::Confidence::Unconditional ? kVerified : kInconclusive;
  }
  degen::TheoremBVerifier verifier;
  verifier.set_plan_search(opt_bool(c, "plan_search", true));
  const auto tr = verifier.verify(spec.d, spec.e, spec.mults);
  c.result = report::to_json(tr);
  c.result["series"] = spec.to_string();
  c.result["route"] = "degeneration";
  c.result["special"] = tr.conclusion == degen::Conclusion::Special;
  c.rules = {kRuleVdim, kRuleLedger, kRuleStaircase, kRuleDeltaReplace, kRuleGeneralPosition};
  if (tr.conclusion == degen::Conclusion::Inconclusive) return kInconclusive;
  return expect_special(c, tr.conclusion == degen::Conclusion::Special);
}

Verdict enumerate_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d");
  const int emax = as_int(req_int(c, "emax"), "emax");
  const int slack = as_int(opt_int(c, "slack", 20), "slack");
  const int threads = as_int(opt_int(c, "threads", c.defaults.threads), "threads");
  const auto table = lowdeg::enumerate_special(d, emax, slack, threads);
  c.result = report::to_json(table);
  c.result["text"] = lowdeg::render_table(table);
  c.rules = {kRuleVdim, kRulePlanar, d == 2 ? kRuleQuadric : kRuleCubic};
  if (const json* want = field(c.req, "expect_count")) {
    c.config["expect_count"] = *want;
    if (!want->is_number_integer()) throw Error(ErrorCode::InvalidArgument, "expect_count must be an integer");
    if (want->get<std::int64_t>() != static_cast<std::int64_t>(table.entries.size())) return kViolated;
  }
  return table.conditional_entries.empty() ? kVerified : kInconclusive;
}

Verdict oracle_cmd(Ctx& c) {
  const auto spec = SurfaceSeriesSpec::make(as_int(req_int(c, "d"), "d"), as_int(req_int(c, "e"), "e"), mults(c));
  const auto cfg = oracle_config(c);
  const auto v = oracle::oracle_verdict(spec, cfg);
  c.result = report::to_json(v);
  c.rules = {kRuleOracle, kRuleVdim};
  if (const json* want = field(c.req, "expect_dim")) {
    c.config["expect_dim"] = *want;
    if (!want->is_number_integer()) throw Error(ErrorCode::InvalidArgument, "expect_dim must be an integer");
    bool all = true;
    for (const auto& t : v.trials) all = all && t.dim == want->get<std::int64_t>();
    c.result["all_trials_match"] = all;
    if (!all) return kViolated;
  }
  return v.certified == oracle::Certification::Inconclusive ? kInconclusive : kVerified;
}

Verdict oracle_delta_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d"), e = as_int(req_int(c, "e"), "e");
  const int m = as_int(req_int(c, "m"), "m"), n = as_int(req_int(c, "n"), "n");
  const auto cfg = oracle_config(c);
  const auto r = oracle::delta_condition_count(d, e, m, n, cfg);
  c.result = report::to_json(r);
  c.rules = {kRuleOracle, kRuleDeltaReplace};
  if (!r.hypothesis_met) return kInconclusive;
  return r.dichotomy_holds ? kVerified : kViolated;
}

Verdict verify_b_cmd(Ctx& c) {
  const int d = as_int(req_int(c, "d"), "d"), e = as_int(req_int(c, "e"), "e");
  const auto m = mults(c);
  const bool pad = opt_bool(c, "pad", false);
  const auto spec = SurfaceSeriesSpec::make(d, e, m);
  if (!pad && e >= 0 && dims::vdim(spec) > 0) {
    throw Error(ErrorCode::PreconditionViolated,
                "vdim " + std::to_string(dims::vdim(spec)) + " > 0; pad with simple points to proceed");
  }
  degen::TheoremBVerifier verifier;
  verifier.set_plan_search(opt_bool(c, "plan_search", true));
  const auto tr = verifier.verify(d, e, m);
  c.result = report::to_json(tr);
  c.result["proof"] = degen::render_proof(tr);
  c.rules = {kRuleVdim, kRuleLedger, kRuleStaircase, kRuleDeltaReplace, kRuleGeneralPosition, kRuleQuadric, kRuleCubic};
  return tr.conclusion == degen::Conclusion::Inconclusive ? kInconclusive : kVerified;
}

Verdict ledger_cmd(Ctx& c) {
  const auto th = ordered_list(c, "thresholds");
  const auto q64 = ordered_list(c, "queue");
  Multiplicities q;
  for (auto x : q64) q.push_back(as_int(x, "queue entry"));
  const int t = as_int(opt_int(c, "t", 2), "t");
  const auto tr = degen::run_ledger(q, th, t);
  c.result = report::to_json(tr);
  c.rules = {kRuleLedger, kRuleStaircase, kRuleGeneralPosition};
  return tr.status == degen::LedgerStatus::Complete ? kVerified : kInconclusive;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"dims.h0-surface", h0_surface_cmd},
      {"dims.h0-curve", h0_curve_cmd},
      {"dims.vdim", vdim_cmd},
      {"dims.g-scan", g_scan_cmd},
      {"dims.convexity-scan", convexity_cmd},
      {"dims.small-pairs", small_pairs_cmd},
      {"check.inequalities", inequalities_cmd},
      {"classify", classify_cmd},
      {"enumerate-special", enumerate_cmd},
      {"oracle", oracle_cmd},
      {"oracle.delta", oracle_delta_cmd},
      {"degen.verify-theorem-b", verify_b_cmd},
      {"degen.ledger", ledger_cmd},
  };
  return h;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case kVerified: return "verified";
    case kViolated: return "violated";
    case kInconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace

const char* version() { return FATPOINTS_VERSION; }

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : handlers()) out.push_back(k);
  return out;
}

Report run(const std::string& command, const json& request, const Defaults& defaults) {
  const auto& h = handlers();
  auto it = h.find(command);
  if (it == h.end()) throw UnknownCommand("unknown command '" + command + "'");
  if (!request.is_object() && !request.is_null()) throw Error(ErrorCode::InvalidArgument, "request must be a JSON object");

  const auto start = std::chrono::steady_clock::now();
  Ctx c{request, defaults, json::object(), json::object(), {}};
  const Verdict v = it->second(c);
  Report r;
  r.verdict = v;
  r.json = {{"command", command},
            {"version", FATPOINTS_VERSION},
            {"config", c.config},
            {"rules", c.rules},
            {"result", c.result},
            {"verdict", verdict_name(v)},
            {"exit_code", static_cast<int>(v)}};
  if (defaults.timing) {
    r.json["duration_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

}  // namespace fatpoints::commands
