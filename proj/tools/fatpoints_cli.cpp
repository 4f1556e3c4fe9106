#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fatpoints/fatpoints.h"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 3;

enum class Output { Json, Text, Table, Csv };

struct Invocation {
  std::string command;
  json request = json::object();
  Output output = Output::Json;
};

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

int exit_for_status(fp_status st) {
  switch (st) {
    case FP_ERR_INVALID_ARGUMENT:
    case FP_ERR_PRECONDITION:
    case FP_ERR_UNKNOWN_COMMAND:
    case FP_ERR_BAD_REQUEST:
      return kExitUsage;
    case FP_ERR_RETRIES_EXHAUSTED:
    case FP_ERR_BUDGET_EXCEEDED:
    case FP_ERR_SINGULAR_CHART:
      return 2;
    default:
      return 1;
  }
}

std::optional<long long> env_int(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long long x = std::strtoll(v, &end, 10);
  if (*end) return std::nullopt;
  return x;
}

void print_csv(const json& result) {
  std::cout << "d,e,mults,vdim,series\n";
  const auto& rows = result.at("rows");
  const auto& names = result.at("entries");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::cout << result.at("d").get<int>() << ',' << rows[i].at("e").get<int>() << ",\""
              << rows[i].at("mults").get<std::string>() << "\"," << rows[i].at("vdim").get<long long>() << ','
              << names[i].get<std::string>() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear series with fat points on surfaces in P^3"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fp_version()));

  bool no_timing = false;
  std::optional<unsigned> prime, prime2;
  std::optional<int> threads;
  app.add_flag("--no-timing", no_timing, "Omit duration_ms so reports are byte-identical across runs");
  app.add_option("--default-prime", prime, "Default first prime (env FATPOINTS_PRIME)");
  app.add_option("--default-prime2", prime2, "Default second prime");
  app.add_option("--threads", threads, "Worker threads (env FATPOINTS_THREADS)")->check(CLI::PositiveNumber);

  Invocation inv;

  std::optional<int> d, e, s, t, k, amax, kmax, points, emax, slack, trials, retries, m, n, samples;
  std::optional<long long> seed, budget, expect_count, expect_dim;
  std::optional<unsigned> oprime, oprime2;
  std::optional<std::string> mults, expect, thresholds, queue;
  bool pad = false, no_plan_search = false;

  // dims
  auto* dims = app.add_subcommand("dims", "Dimension counts and the g-function scans");
  dims->require_subcommand(1);
  auto* h0s = dims->add_subcommand("h0-surface", "h0(O_S(e)) on a degree d surface");
  h0s->add_option("--d", d)->required();
  h0s->add_option("--e", e)->required();
  auto* h0c = dims->add_subcommand("h0-curve", "h0(O_C(k)) on the (s,t) complete intersection");
  h0c->add_option("--s", s)->required();
  h0c->add_option("--t", t)->required();
  h0c->add_option("--k", k)->required();
  auto* vd = dims->add_subcommand("vdim", "Virtual and expected dimension");
  vd->add_option("--d", d)->required();
  vd->add_option("--e", e)->required();
  vd->add_option("--mults", mults, "e.g. 4^2,3");
  auto* gs = dims->add_subcommand("g-scan", "Superadditivity failures of g");
  gs->add_option("--d", d)->required();
  gs->add_option("--amax", amax);
  auto* cs = dims->add_subcommand("convexity-scan", "Discrete convexity of g");
  cs->add_option("--d", d)->required();
  cs->add_option("--kmax", kmax);
  auto* sp = dims->add_subcommand("small-pairs", "Small-pair inequality check");
  sp->add_option("--d", d)->required();
  sp->add_option("--points", points);

  // classify
  bool as_json = false;
  auto* cl = app.add_subcommand("classify", "Decide speciality (d<=3 classifiers, d>=4 degeneration)");
  cl->add_option("--d", d)->required();
  cl->add_option("--e", e)->required();
  cl->add_option("--mults", mults);
  cl->add_option("--expect", expect)->check(CLI::IsMember({"special", "nonspecial"}));
  cl->add_flag("--json", as_json, "Emit the full JSON report");
  cl->add_flag("--no-plan-search", no_plan_search);

  // enumerate-special
  bool csv = false, table = false;
  auto* en = app.add_subcommand("enumerate-special", "Special series on quadrics and cubics");
  en->add_option("--d", d)->required()->check(CLI::IsMember({2, 3}));
  en->add_option("--emax", emax)->required();
  en->add_option("--slack", slack);
  en->add_option("--expect-count", expect_count);
  en->add_flag("--csv", csv);
  en->add_flag("--table", table);

  // oracle
  auto add_oracle_opts = [&](CLI::App* sc) {
    sc->add_option("--prime", oprime);
    sc->add_option("--prime2", oprime2);
    sc->add_option("--trials", trials);
    sc->add_option("--seed", seed);
    sc->add_option("--max-retries", retries);
    sc->add_option("--budget", budget, "Column budget");
  };
  auto* orc = app.add_subcommand("oracle", "Rank computation over prime fields");
  orc->add_option("--d", d)->required();
  orc->add_option("--e", e)->required();
  orc->add_option("--mults", mults);
  orc->add_option("--expect-dim", expect_dim);
  add_oracle_opts(orc);
  auto* od = app.add_subcommand("oracle-delta", "Conditions imposed by a delta_{m,n} point");
  od->add_option("--d", d)->required();
  od->add_option("--e", e)->required();
  od->add_option("--m", m)->required();
  od->add_option("--n", n)->required();
  add_oracle_opts(od);

  // degen
  bool text = false;
  auto* dg = app.add_subcommand("degen", "Degeneration to s+t and the splitting ledger");
  dg->require_subcommand(1);
  auto* vb = dg->add_subcommand("verify-theorem-b", "Nonspeciality proof for quadruple points");
  vb->add_option("--d", d)->required();
  vb->add_option("--e", e)->required();
  vb->add_option("--mults", mults);
  vb->add_flag("--pad", pad, "Add simple points until vdim <= 0");
  vb->add_flag("--text", text, "Print the proof instead of JSON");
  vb->add_flag("--no-plan-search", no_plan_search);
  auto* lg = dg->add_subcommand("ledger", "Run the splitting ledger");
  lg->add_option("--thresholds", thresholds)->required();
  lg->add_option("--queue", queue)->required();
  lg->add_option("--t", t);

  // check
  auto* ck = app.add_subcommand("check", "Batch property checks");
  ck->require_subcommand(1);
  auto* iq = ck->add_subcommand("inequalities", "Inequalities for g and v");
  iq->add_option("--d", d);
  iq->add_option("--amax", amax);
  iq->add_option("--kmax", kmax);
  iq->add_option("--points", points);
  iq->add_option("--samples", samples);
  iq->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  json& r = inv.request;
  put(r, "d", d);
  put(r, "e", e);
  put(r, "s", s);
  put(r, "t", t);
  put(r, "k", k);
  put(r, "mults", mults);
  put(r, "amax", amax);
  put(r, "kmax", kmax);
  put(r, "points", points);
  put(r, "samples", samples);
  put(r, "seed", seed);

  if (h0s->parsed()) inv.command = "dims.h0-surface";
  if (h0c->parsed()) inv.command = "dims.h0-curve";
  if (vd->parsed()) inv.command = "dims.vdim";
  if (gs->parsed()) inv.command = "dims.g-scan";
  if (cs->parsed()) inv.command = "dims.convexity-scan";
  if (sp->parsed()) inv.command = "dims.small-pairs";
  if (iq->parsed()) inv.command = "check.inequalities";
  if (cl->parsed()) {
    inv.command = "classify";
    put(r, "expect", expect);
    if (no_plan_search) r["plan_search"] = false;
    inv.output = as_json ? Output::Json : Output::Text;
  }
  if (en->parsed()) {
    inv.command = "enumerate-special";
    put(r, "emax", emax);
    put(r, "slack", slack);
    put(r, "expect_count", expect_count);
    if (threads) r["threads"] = *threads;
    if (csv) inv.output = Output::Csv;
    if (table) inv.output = Output::Table;
  }
  if (orc->parsed() || od->parsed()) {
    inv.command = orc->parsed() ? "oracle" : "oracle.delta";
    put(r, "m", m);
    put(r, "n", n);
    put(r, "prime", oprime);
    put(r, "prime2", oprime2);
    put(r, "trials", trials);
    put(r, "max_retries", retries);
    put(r, "budget", budget);
    put(r, "expect_dim", expect_dim);
  }
  if (vb->parsed()) {
    inv.command = "degen.verify-theorem-b";
    r["pad"] = pad;
    if (no_plan_search) r["plan_search"] = false;
    if (text) inv.output = Output::Text;
  }
  if (lg->parsed()) {
    inv.command = "degen.ledger";
    put(r, "thresholds", thresholds);
    put(r, "queue", queue);
  }

  fp_context* ctx = nullptr;
  if (fp_context_create(&ctx) != FP_OK) {
    std::cerr << "error: cannot create context\n";
    return 1;
  }
  auto fail = [&](fp_status st) {
    std::cerr << "error: " << fp_status_string(st) << ": " << fp_last_error(ctx) << '\n';
    fp_context_destroy(ctx);
    return exit_for_status(st);
  };

  if (!prime) {
    if (auto v = env_int("FATPOINTS_PRIME")) prime = static_cast<unsigned>(*v);
  }
  if (!threads) {
    if (auto v = env_int("FATPOINTS_THREADS")) threads = static_cast<int>(*v);
  }
  if (prime) {
    if (auto st = fp_context_set_prime(ctx, *prime); st != FP_OK) return fail(st);
  }
  if (prime2) {
    if (auto st = fp_context_set_prime2(ctx, *prime2); st != FP_OK) return fail(st);
  }
  if (threads) {
    if (auto st = fp_context_set_threads(ctx, *threads); st != FP_OK) return fail(st);
  }
  fp_context_set_timing(ctx, no_timing ? 0 : 1);

  fp_report* rep = nullptr;
  const std::string body = inv.request.dump();
  if (auto st = fp_run(ctx, inv.command.c_str(), body.c_str(), &rep); st != FP_OK) return fail(st);

  const json out = json::parse(fp_report_json(rep));
  const int code = static_cast<int>(fp_report_verdict(rep));
  fp_report_destroy(rep);
  fp_context_destroy(ctx);

  const json& res = out.at("result");
  switch (inv.output) {
    case Output::Json:
      std::cout << out.dump(2) << '\n';
      break;
    case Output::Table:
      std::cout << res.at("text").get<std::string>();
      break;
    case Output::Csv:
      print_csv(res);
      break;
    case Output::Text:
      if (res.contains("proof")) {
        std::cout << res.at("proof").get<std::string>();
      } else {
        std::cout << res.at("series").get<std::string>() << ": "
                  << (res.at("special").get<bool>() ? "special" : "nonspecial") << ", dim "
                  << res.at("dim").get<long long>() << " (" << out.at("verdict").get<std::string>() << ")\n";
      }
      break;
  }
  return code;
}
