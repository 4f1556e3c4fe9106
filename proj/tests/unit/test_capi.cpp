#include <cstring>
#include <string>

#include "doctest.h"
#include "fatpoints/fatpoints.h"
#include <json.hpp>

using nlohmann::json;

namespace {

struct Ctx {
  fp_context* p = nullptr;
  Ctx() { REQUIRE(fp_context_create(&p) == FP_OK); }
  ~Ctx() { fp_context_destroy(p); }
};

json run(fp_context* ctx, const char* cmd, const char* body, fp_verdict* verdict = nullptr) {
  fp_report* rep = nullptr;
  REQUIRE(fp_run(ctx, cmd, body, &rep) == FP_OK);
  REQUIRE(rep != nullptr);
  json out = json::parse(fp_report_json(rep));
  if (verdict) *verdict = fp_report_verdict(rep);
  fp_report_destroy(rep);
  return out;
}

}  // namespace

TEST_CASE("scalar entry points") {
  Ctx c;
  int64_t v = 0;
  CHECK(fp_h0_surface(c.p, 4, 5, &v) == FP_OK);
  CHECK(v == 52);
  CHECK(fp_h0_curve(c.p, 1, 4, 6, &v) == FP_OK);
  CHECK(v == 22);
  CHECK(fp_vdim(c.p, 4, 2, "4", &v) == FP_OK);
  CHECK(v == 0);
  CHECK(fp_vdim(c.p, 2, 6, "4^5", &v) == FP_OK);
  CHECK(v == 49 - 50);
  CHECK(std::strlen(fp_version()) > 0);
}

TEST_CASE("error codes") {
  Ctx c;
  int64_t v = 0;
  CHECK(fp_h0_surface(c.p, 0, 5, &v) == FP_ERR_INVALID_ARGUMENT);
  CHECK(std::string(fp_last_error(c.p)).size() > 0);
  CHECK(fp_h0_surface(c.p, 4, 5, nullptr) == FP_ERR_INVALID_ARGUMENT);
  CHECK(fp_vdim(c.p, 4, 2, "4^x", &v) == FP_ERR_INVALID_ARGUMENT);
  CHECK(fp_h0_surface(nullptr, 4, 5, &v) == FP_ERR_INVALID_ARGUMENT);
  CHECK(fp_context_set_prime(c.p, 32004) == FP_ERR_INVALID_ARGUMENT);
  CHECK(fp_context_set_threads(c.p, 0) == FP_ERR_INVALID_ARGUMENT);

  fp_report* rep = nullptr;
  CHECK(fp_run(c.p, "nope", "{}", &rep) == FP_ERR_UNKNOWN_COMMAND);
  CHECK(fp_run(c.p, "dims.vdim", "{not json", &rep) == FP_ERR_BAD_REQUEST);
  CHECK(fp_run(c.p, "dims.vdim", "{\"e\": 2}", &rep) == FP_ERR_INVALID_ARGUMENT);
  CHECK(fp_run(c.p, "degen.verify-theorem-b", "{\"d\":4,\"e\":6,\"mults\":\"4^3\"}", &rep) == FP_ERR_PRECONDITION);
  CHECK(fp_run(c.p, "oracle", "{\"d\":4,\"e\":8,\"mults\":\"4\",\"budget\":10}", &rep) == FP_ERR_BUDGET_EXCEEDED);
  CHECK(rep == nullptr);
  CHECK(std::string(fp_status_string(FP_ERR_PRECONDITION)) == "precondition violated");

  // Null handles are tolerated.
  CHECK(std::string(fp_report_json(nullptr)).empty());
  CHECK(fp_report_verdict(nullptr) == FP_INCONCLUSIVE);
  fp_report_destroy(nullptr);
  fp_context_destroy(nullptr);
}

TEST_CASE("report shape") {
  Ctx c;
  fp_verdict verdict = FP_INCONCLUSIVE;
  const auto r = run(c.p, "dims.vdim", "{\"d\":4,\"e\":2,\"mults\":\"4\"}", &verdict);
  CHECK(verdict == FP_VERIFIED);
  CHECK(r["command"] == "dims.vdim");
  CHECK(r["result"]["value"] == 0);
  CHECK(r["config"]["mults"] == "4");
  CHECK(r["exit_code"] == 0);
  CHECK(r["verdict"] == "verified");
  CHECK(r.contains("duration_ms"));
  CHECK(!r["rules"].empty());
  CHECK(r["version"] == fp_version());

  fp_context_set_timing(c.p, 0);
  CHECK(!run(c.p, "dims.vdim", "{\"d\":4,\"e\":2,\"mults\":\"4\"}").contains("duration_ms"));
}

TEST_CASE("verdicts follow the exit-code contract") {
  Ctx c;
  fp_verdict v = FP_VERIFIED;
  run(c.p, "classify", "{\"d\":2,\"e\":6,\"mults\":\"4^5\",\"expect\":\"special\"}", &v);
  CHECK(v == FP_VERIFIED);
  run(c.p, "classify", "{\"d\":1,\"e\":9,\"mults\":\"3,2,2\",\"expect\":\"special\"}", &v);
  CHECK(v == FP_VIOLATED);
  run(c.p, "classify", "{\"d\":1,\"e\":30,\"mults\":\"12^5\"}", &v);
  CHECK(v == FP_INCONCLUSIVE);
  const auto led = run(c.p, "degen.ledger", "{\"thresholds\":\"1,8,16\",\"queue\":\"4,4,4\"}", &v);
  CHECK(v == FP_INCONCLUSIVE);
  CHECK(led["result"]["status"] == "insufficient_multiplicity");
  CHECK(led["result"]["after_split"][1] == json::array({"delta(2,2)", "Fat(3)"}));
}

TEST_CASE("identical requests give identical payloads") {
  Ctx c;
  fp_context_set_timing(c.p, 0);
  const char* body = "{\"d\":4,\"e\":5,\"mults\":\"10\",\"seed\":7}";
  CHECK(run(c.p, "oracle", body).dump() == run(c.p, "oracle", body).dump());
  Ctx other;
  fp_context_set_timing(other.p, 0);
  CHECK(run(c.p, "oracle", body).dump() == run(other.p, "oracle", body).dump());
}

TEST_CASE("context defaults reach the oracle") {
  Ctx c;
  CHECK(fp_context_set_prime(c.p, 31991) == FP_OK);
  CHECK(fp_context_set_seed(c.p, 5) == FP_OK);
  const auto r = run(c.p, "oracle", "{\"d\":4,\"e\":3,\"mults\":\"4,4\"}");
  CHECK(r["config"]["prime"] == 31991);
  CHECK(r["config"]["seed"] == 5);
  CHECK(r["result"]["observed_dim"] == 0);
  CHECK(r["result"]["certified"] == "nonspecial-certified");
}
