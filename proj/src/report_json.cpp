#include "report_json.hpp"

namespace fatpoints::report {

namespace {

json scheme_list(const std::vector<degen::OnCurveScheme>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.to_string());
  return a;
}

}  // namespace

json to_json(const SurfaceSeriesSpec& s) {
  return {{"d", s.d}, {"e", s.e}, {"mults", format_multiplicities(s.mults)}, {"series", s.to_string()}};
}

json to_json(const PlanarSeriesSpec& s) {
  return {{"e", s.e}, {"mults", format_multiplicities(s.mults)}, {"series", s.to_string()}};
}

json to_json(const planar::ReductionTrace& t) {
  json steps = json::array();
  for (const auto& st : t.steps) {
    steps.push_back({{"kind", planar::to_string(st.kind)},
                     {"points", st.points},
                     {"amount", st.amount},
                     {"after", st.after.to_string()}});
  }
  return {{"initial", t.initial.to_string()},
          {"steps", steps},
          {"terminal", t.terminal.to_string()},
          {"max_multiplicity", t.max_multiplicity}};
}

json to_json(const planar::PlanarVerdict& v) {
  return {{"dim", v.dim},
          {"edim", v.edim},
          {"special", v.special},
          {"confidence", planar::to_string(v.confidence)},
          {"trace", to_json(v.trace)}};
}

json to_json(const lowdeg::SpecialSeriesTable& t) {
  json entries = json::array();
  json rows = json::array();
  for (const auto& s : t.entries) {
    entries.push_back(s.to_string());
    rows.push_back({{"e", s.e}, {"mults", format_multiplicities(s.mults)}, {"vdim", dims::vdim(s)}});
  }
  json cond = json::array();
  for (const auto& s : t.conditional_entries) cond.push_back(s.to_string());
  std::map<std::string, int> per_e;
  for (const auto& s : t.entries) per_e[std::to_string(s.e)]++;
  return {{"d", t.d},
          {"e_max", t.e_max},
          {"slack", t.slack},
          {"entries", entries},
          {"rows", rows},
          {"count", t.entries.size()},
          {"count_by_e", per_e},
          {"conditional_entries", cond},
          {"scanned", t.scanned}};
}

json to_json(const oracle::OracleVerdict& v) {
  json trials = json::array();
  for (const auto& tr : v.trials) trials.push_back({{"p", tr.p}, {"seed", tr.seed}, {"dim", tr.dim}});
  return {{"series", v.spec.to_string()},
          {"observed_dim", v.observed_dim},
          {"edim", v.edim},
          {"columns", v.columns},
          {"rows", v.rows},
          {"certified", oracle::to_string(v.certified)},
          {"trials", trials}};
}

json to_json(const oracle::DeltaCount& c) {
  return {{"d", c.d},
          {"e", c.e},
          {"m", c.m},
          {"n", c.n},
          {"h0", c.h0},
          {"drop", c.drop},
          {"fat_m_drop", c.fat_m_drop},
          {"fat_m1_drop", c.fat_m1_drop},
          {"hypothesis_met", c.hypothesis_met},
          {"dichotomy_holds", c.dichotomy_holds},
          {"formula_holds", c.formula_holds}};
}

json to_json(const degen::OnCurveScheme& s) { return s.to_string(); }

json to_json(const degen::LedgerTrace& t) {
  json events = json::array();
  for (const auto& ev : t.events) {
    json j = {{"threshold", ev.threshold_index + 1},
              {"source", ev.from_queue ? "queue" : "residual"},
              {"scheme", ev.scheme.to_string()},
              {"need_before", ev.need_before},
              {"contributed", ev.contributed},
              {"split", ev.split}};
    if (ev.from_queue) j["queue_index"] = ev.queue_index;
    if (ev.split) j["residual"] = ev.residual ? json(ev.residual->to_string()) : json(nullptr);
    events.push_back(j);
  }
  json after = json::array();
  for (const auto& st : t.after_split) after.push_back(scheme_list(st));
  return {{"thresholds", t.thresholds},
          {"queue", t.queue},
          {"events", events},
          {"after_split", after},
          {"residuals", scheme_list(t.on_curve)},
          {"pending", t.pending},
          {"splits", t.splits},
          {"status", degen::to_string(t.status)},
          {"t", t.t},
          {"general_position", t.general_position},
          {"limit_branch", degen::LedgerTrace::kLimitBranch}};
}

json to_json(const degen::DegenPlan& p) {
  return {{"e", p.e},
          {"s", p.s},
          {"t", p.t},
          {"mu", p.mu},
          {"gamma_S", p.gamma_S},
          {"gamma_T", p.gamma_T}};
}

json to_json(const degen::PlanHypotheses& h) {
  return {{"decided", h.decided},
          {"kernel", h.kernel.to_string()},
          {"kernel_empty", h.kernel_empty},
          {"glued", h.glued.to_string()},
          {"w", h.w},
          {"vdim_glued", h.vdim_glued},
          {"nonspecial_S", h.nonspecial_S},
          {"holds", h.holds()}};
}

json to_json(const degen::CaseTrace& t) {
  json j = {{"input", t.input.to_string()},
            {"padded", t.padded.to_string()},
            {"padding", t.padding},
            {"case", t.case_label},
            {"plan_search", t.fallback},
            {"thresholds", t.thresholds},
            {"log", t.log},
            {"conclusion", degen::to_string(t.conclusion)},
            {"dim", t.dim},
            {"failing_step", t.failing_step}};
  if (t.plan) j["plan"] = to_json(*t.plan);
  if (t.hypotheses) j["hypotheses"] = to_json(*t.hypotheses);
  if (t.identity) {
    j["vdim_identity"] = {{"original", t.identity->vdim_original},
                          {"twisted", t.identity->vdim_twisted},
                          {"holds", t.identity->holds}};
  }
  if (t.ledger) j["ledger"] = to_json(*t.ledger);
  if (t.residual) j["residual"] = {{"series", t.residual->to_string()}, {"vdim", t.residual->vdim()}};
  json subs = json::array();
  for (const auto& s : t.subresults) {
    subs.push_back({{"series", s.what},
                    {"method", s.method},
                    {"conclusion", degen::to_string(s.conclusion)},
                    {"dim", s.dim}});
  }
  j["subresults"] = subs;
  return j;
}

Multiplicities mults_from(const json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) return parse_multiplicities(v.get<std::string>());
  if (v.is_array()) {
    Multiplicities m;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw Error(ErrorCode::InvalidArgument, "mults array must hold integers");
      m.push_back(x.get<int>());
    }
    canonicalize(m);
    return m;
  }
  throw Error(ErrorCode::InvalidArgument, "mults must be a string or an array");
}

}  // namespace fatpoints::report
