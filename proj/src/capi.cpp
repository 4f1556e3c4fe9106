#include "fatpoints/fatpoints.h"

#include <new>
#include <string>

#include "commands.hpp"
#include "fatpoints/dims.hpp"
#include "fatpoints/oracle.hpp"

struct fp_context {
  fatpoints::commands::Defaults defaults;
  std::string last_error;
};

struct fp_report {
  std::string json;
  fp_verdict verdict = FP_VERIFIED;
};

namespace {

fp_status status_of(fatpoints::ErrorCode code) {
  using fatpoints::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return FP_ERR_INVALID_ARGUMENT;
    case ErrorCode::PreconditionViolated: return FP_ERR_PRECONDITION;
    case ErrorCode::RetriesExhausted: return FP_ERR_RETRIES_EXHAUSTED;
    case ErrorCode::BudgetExceeded: return FP_ERR_BUDGET_EXCEEDED;
    case ErrorCode::SingularChart: return FP_ERR_SINGULAR_CHART;
    case ErrorCode::Internal: return FP_ERR_INTERNAL;
  }
  return FP_ERR_INTERNAL;
}

template <class F>
fp_status guarded(fp_context* ctx, F&& f) {
  if (!ctx) return FP_ERR_INVALID_ARGUMENT;
  try {
    f();
    ctx->last_error.clear();
    return FP_OK;
  } catch (const fatpoints::Error& e) {
    ctx->last_error = e.what();
    return status_of(e.code());
  } catch (const fatpoints::commands::UnknownCommand& e) {
    ctx->last_error = e.what();
    return FP_ERR_UNKNOWN_COMMAND;
  } catch (const nlohmann::json::exception& e) {
    ctx->last_error = std::string("bad request: ") + e.what();
    return FP_ERR_BAD_REQUEST;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return FP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return FP_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* fp_version(void) { return fatpoints::commands::version(); }

const char* fp_status_string(fp_status status) {
  switch (status) {
    case FP_OK: return "ok";
    case FP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FP_ERR_PRECONDITION: return "precondition violated";
    case FP_ERR_RETRIES_EXHAUSTED: return "retries exhausted";
    case FP_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case FP_ERR_SINGULAR_CHART: return "singular chart";
    case FP_ERR_INTERNAL: return "internal error";
    case FP_ERR_UNKNOWN_COMMAND: return "unknown command";
    case FP_ERR_BAD_REQUEST: return "bad request";
  }
  return "unknown status";
}

fp_status fp_context_create(fp_context** out) {
  if (!out) return FP_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) fp_context();
  return *out ? FP_OK : FP_ERR_INTERNAL;
}

void fp_context_destroy(fp_context* ctx) { delete ctx; }

fp_status fp_context_set_prime(fp_context* ctx, uint32_t p) {
  return guarded(ctx, [&] {
    fatpoints::oracle::OracleConfig cfg;
    cfg.p = p;
    cfg.p2 = ctx->defaults.prime2;
    cfg.validate();
    ctx->defaults.prime = p;
  });
}

fp_status fp_context_set_prime2(fp_context* ctx, uint32_t p) {
  return guarded(ctx, [&] {
    fatpoints::oracle::OracleConfig cfg;
    cfg.p = ctx->defaults.prime;
    cfg.p2 = p;
    cfg.validate();
    ctx->defaults.prime2 = p;
  });
}

fp_status fp_context_set_seed(fp_context* ctx, uint64_t seed) {
  return guarded(ctx, [&] { ctx->defaults.seed = seed; });
}

fp_status fp_context_set_threads(fp_context* ctx, int threads) {
  return guarded(ctx, [&] {
    if (threads < 1) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "threads must be >= 1");
    ctx->defaults.threads = threads;
  });
}

fp_status fp_context_set_timing(fp_context* ctx, int enabled) {
  return guarded(ctx, [&] { ctx->defaults.timing = enabled != 0; });
}

const char* fp_last_error(const fp_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

fp_status fp_h0_surface(fp_context* ctx, int d, int e, int64_t* out) {
  return guarded(ctx, [&] {
    if (!out) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "null output");
    if (d < 1) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "d must be >= 1");
    *out = fatpoints::dims::h0_surface(d, e);
  });
}

fp_status fp_h0_curve(fp_context* ctx, int s, int t, int k, int64_t* out) {
  return guarded(ctx, [&] {
    if (!out) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "null output");
    if (s < 1 || t < 1) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "s, t must be >= 1");
    *out = fatpoints::dims::h0_curve(fatpoints::dims::CICurve{s, t}, k);
  });
}

fp_status fp_vdim(fp_context* ctx, int d, int e, const char* mults, int64_t* out) {
  return guarded(ctx, [&] {
    if (!out) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "null output");
    const auto spec = fatpoints::SurfaceSeriesSpec::make(d, e, fatpoints::parse_multiplicities(mults ? mults : ""));
    *out = fatpoints::dims::vdim(spec);
  });
}

fp_status fp_run(fp_context* ctx, const char* command, const char* request_json, fp_report** out) {
  return guarded(ctx, [&] {
    if (!command || !out) throw fatpoints::Error(fatpoints::ErrorCode::InvalidArgument, "null argument");
    *out = nullptr;
    const auto req = request_json && *request_json ? nlohmann::json::parse(request_json) : nlohmann::json::object();
    auto r = fatpoints::commands::run(command, req, ctx->defaults);
    auto* rep = new fp_report();
    rep->json = r.json.dump();
    rep->verdict = static_cast<fp_verdict>(r.verdict);
    *out = rep;
  });
}

const char* fp_report_json(const fp_report* report) { return report ? report->json.c_str() : ""; }

fp_verdict fp_report_verdict(const fp_report* report) {
  return report ? report->verdict : FP_INCONCLUSIVE;
}

void fp_report_destroy(fp_report* report) { delete report; }

}  // extern "C"
