#include "fatpoints/degen.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fatpoints/lowdeg.hpp"

namespace fatpoints::degen {

using namespace fatpoints::dims;

namespace {

std::int64_t h0_C(int s, int t, int k) { return h0_curve(CICurve{s, t}, k); }

std::int64_t total_multiplicity(const Multiplicities& m) {
  return std::accumulate(m.begin(), m.end(), std::int64_t{0});
}

int count_of(const Multiplicities& m, int v) {
  return static_cast<int>(std::count(m.begin(), m.end(), v));
}

Multiplicities sorted_desc(Multiplicities m) {
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

// a minus b as multisets; b must be contained in a.
Multiplicities remove_all(const Multiplicities& a, const Multiplicities& b) {
  Multiplicities out = a;
  for (int v : b) {
    auto it = std::find(out.begin(), out.end(), v);
    if (it == out.end()) throw Error(ErrorCode::Internal, "multiset difference");
    out.erase(it);
  }
  return out;
}

std::string join_thresholds(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

// ------------------------------------------------------------ twisted counts

std::int64_t h0_modified(int e, int s, int t, int mu) {
  if (s < 1 || t < 1 || mu < 0) throw Error(ErrorCode::InvalidArgument, "need s, t >= 1 and mu >= 0");
  std::int64_t total = h0_surface(t, e);
  for (int k = 1; k <= mu; ++k) total += h0_C(s, t, e - t * k);
  return total;
}

std::string DegenPlan::to_string() const {
  std::ostringstream os;
  os << "e=" << e << " s=" << s << " t=" << t << " mu=" << mu << " S:("
     << format_multiplicities(sorted_desc(gamma_S)) << ") T:("
     << format_multiplicities(sorted_desc(gamma_T)) << ")";
  return os.str();
}

std::int64_t vdim_T(const DegenPlan& plan, std::int64_t w) {
  const std::int64_t cap = h0_C(plan.s, plan.t, plan.e - plan.t * plan.mu);
  if (w < 0 || w > cap) {
    throw Error(ErrorCode::InvalidArgument,
                "w = " + std::to_string(w) + " outside [0, " + std::to_string(cap) + "]");
  }
  return h0_modified(plan.e, plan.s, plan.t, plan.mu) - scheme_degree(plan.gamma_T) - (cap - w);
}

DimensionDecider classifier_decider() {
  return [](const SurfaceSeriesSpec& spec) -> std::optional<std::int64_t> {
    if (spec.d > 3) return std::nullopt;
    const auto v = lowdeg::classify_lowdeg(spec);
    if (v.confidence != planar::Confidence::Unconditional) return std::nullopt;
    return v.dim;
  };
}

DimensionDecider oracle_decider(const oracle::OracleConfig& cfg) {
  return [cfg](const SurfaceSeriesSpec& spec) -> std::optional<std::int64_t> {
    if (spec.d <= 3) return classifier_decider()(spec);
    if (spec.e < 0) return 0;
    const auto v = oracle::oracle_verdict(spec, cfg);
    if (v.certified != oracle::Certification::NonspecialCertified) return std::nullopt;
    return v.edim;
  };
}

PlanHypotheses plan_hypotheses(const DegenPlan& plan, const DimensionDecider& decide) {
  PlanHypotheses h;
  h.kernel = SurfaceSeriesSpec::make(plan.s, plan.e - plan.t * (plan.mu + 1), plan.gamma_S);
  h.glued = SurfaceSeriesSpec::make(plan.s, plan.e - plan.t * plan.mu, plan.gamma_S);
  h.vdim_glued = plan.e - plan.t * plan.mu < 0 ? -scheme_degree(plan.gamma_S) : vdim(h.glued);
  const auto k = decide(h.kernel);
  const auto g = decide(h.glued);
  if (!k || !g) return h;
  h.decided = true;
  h.kernel_empty = *k == 0;
  h.w = *g;
  h.nonspecial_S = *g == edim(h.glued);
  return h;
}

IdentityCheck vdim_identity(const DegenPlan& plan, std::int64_t w) {
  Multiplicities all = plan.gamma_S;
  all.insert(all.end(), plan.gamma_T.begin(), plan.gamma_T.end());
  IdentityCheck c;
  c.vdim_original = vdim(SurfaceSeriesSpec::make(plan.d(), plan.e, all));
  c.vdim_twisted = vdim_T(plan, w);
  c.holds = c.vdim_original == c.vdim_twisted;
  return c;
}

// ------------------------------------------------------------ on-curve schemes

OnCurveScheme OnCurveScheme::fat(int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "fat point needs m >= 1");
  return {Kind::Fat, m, 0};
}

OnCurveScheme OnCurveScheme::delta(int m, int n) {
  if (m < 1 || n < 0 || n > m) {
    throw Error(ErrorCode::InvalidArgument,
                "delta_{" + std::to_string(m) + "," + std::to_string(n) + "} needs 0 <= n <= m, m >= 1");
  }
  if (n == 0) return fat(m);
  return {Kind::DeltaAligned, m, n};
}

std::int64_t OnCurveScheme::degree() const {
  return kind == Kind::Fat ? fat_degree(m) : delta_degree(m, n);
}

std::string OnCurveScheme::to_string() const {
  if (kind == Kind::Fat) return "Fat(" + std::to_string(m) + ")";
  return "delta(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

int staircase_restrict(const OnCurveScheme& sch) {
  return sch.kind == OnCurveScheme::Kind::Fat ? sch.m : sch.m + 1;
}

std::optional<OnCurveScheme> staircase_colon(const OnCurveScheme& sch) {
  if (sch.m == 1) return std::nullopt;
  if (sch.kind == OnCurveScheme::Kind::Fat) return OnCurveScheme::fat(sch.m - 1);
  return OnCurveScheme::delta(sch.m - 1, sch.n - 1);
}

StaircaseIdeal::StaircaseIdeal(std::vector<std::pair<int, int>> generators) {
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (const auto& g : generators) {
    if (g.first < 0 || g.second < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
    bool redundant = false;
    for (const auto& h : generators) {
      if (h != g && h.first <= g.first && h.second <= g.second) {
        redundant = true;
        break;
      }
    }
    if (!redundant) gens_.push_back(g);
  }
  // ascending in y, hence descending in x
  std::sort(gens_.begin(), gens_.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
}

StaircaseIdeal StaircaseIdeal::of(const OnCurveScheme& sch) {
  std::vector<std::pair<int, int>> g;
  for (int j = 0; j <= sch.m; ++j) {
    const bool raised = sch.kind == OnCurveScheme::Kind::DeltaAligned && j < sch.n;
    g.emplace_back(sch.m - j + (raised ? 1 : 0), j);
  }
  return StaircaseIdeal(std::move(g));
}

bool StaircaseIdeal::contains(int a, int b) const {
  return std::any_of(gens_.begin(), gens_.end(),
                     [&](const auto& g) { return g.first <= a && g.second <= b; });
}

std::int64_t StaircaseIdeal::colength() const {
  bool pure_x = false, pure_y = false;
  for (const auto& g : gens_) {
    pure_x = pure_x || g.second == 0;
    pure_y = pure_y || g.first == 0;
  }
  if (!pure_x || !pure_y) throw Error(ErrorCode::PreconditionViolated, "ideal is not zero-dimensional");
  std::int64_t n = 0;
  for (int b = 0; !contains(0, b); ++b) {
    for (int a = 0; !contains(a, b); ++a) ++n;
  }
  return n;
}

StaircaseIdeal StaircaseIdeal::plus_y() const {
  auto g = gens_;
  g.emplace_back(0, 1);
  return StaircaseIdeal(std::move(g));
}

StaircaseIdeal StaircaseIdeal::colon_y() const {
  std::vector<std::pair<int, int>> g;
  for (const auto& [a, b] : gens_) g.emplace_back(a, std::max(b - 1, 0));
  return StaircaseIdeal(std::move(g));
}

std::optional<OnCurveScheme> StaircaseIdeal::identify(int max_m) const {
  if (is_unit()) return std::nullopt;
  const std::int64_t len = colength();
  for (int m = 1; m <= max_m; ++m) {
    const std::int64_t base = fat_degree(m);
    if (len < base) break;
    if (len > base + m) continue;
    const auto cand = OnCurveScheme::delta(m, static_cast<int>(len - base));
    if (StaircaseIdeal::of(cand) == *this) return cand;
  }
  throw Error(ErrorCode::Internal, "ideal is neither a fat point nor an aligned delta point");
}

int staircase_restrict_explicit(const OnCurveScheme& sch) {
  return static_cast<int>(StaircaseIdeal::of(sch).plus_y().colength());
}

std::optional<OnCurveScheme> staircase_colon_explicit(const OnCurveScheme& sch) {
  return StaircaseIdeal::of(sch).colon_y().identify(sch.m + 1);
}

// ------------------------------------------------------------ splitting ledger

const char* to_string(LedgerStatus s) {
  switch (s) {
    case LedgerStatus::Complete: return "complete";
    case LedgerStatus::InsufficientMultiplicity: return "insufficient_multiplicity";
    case LedgerStatus::ResidualTipsSplit: return "residual_tips_split";
  }
  return "?";
}

bool general_position_ok(int alpha, int beta, int t) {
  if (alpha < 0 || beta < 0 || t < 1) throw Error(ErrorCode::InvalidArgument, "counts must be >= 0, t >= 1");
  return alpha + 2 * static_cast<std::int64_t>(beta) <= h0_surface(t, 2) - 1;
}

LedgerTrace run_ledger(const Multiplicities& queue, const std::vector<std::int64_t>& thresholds, int t) {
  for (auto th : thresholds) {
    if (th < 0) throw Error(ErrorCode::InvalidArgument, "thresholds must be nonnegative");
  }
  for (int m : queue) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "queue multiplicities must be >= 1");
  }
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be >= 1");

  LedgerTrace tr;
  tr.thresholds = thresholds;
  tr.queue = queue;
  tr.t = t;
  std::vector<OnCurveScheme> on;
  std::size_t qi = 0;

  auto finish = [&](LedgerStatus st) {
    tr.status = st;
    tr.on_curve = on;
    tr.pending.assign(queue.begin() + static_cast<std::ptrdiff_t>(qi), queue.end());
    int alpha = 0, beta = 0;
    for (const auto& s : on) (s.kind == OnCurveScheme::Kind::Fat ? alpha : beta)++;
    tr.general_position = general_position_ok(alpha, beta, t);
    return tr;
  };

  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    std::int64_t need = thresholds[k];
    std::optional<OnCurveScheme> tip_residual;
    if (need > 0) {
      for (const auto& s : on) {
        LedgerEvent ev;
        ev.threshold_index = k;
        ev.from_queue = false;
        ev.scheme = s;
        ev.need_before = need;
        ev.contributed = staircase_restrict(s);
        tr.events.push_back(ev);
        if (ev.contributed >= need) return finish(LedgerStatus::ResidualTipsSplit);
        need -= ev.contributed;
      }
      while (need > 0) {
        if (qi == queue.size()) return finish(LedgerStatus::InsufficientMultiplicity);
        const int m = queue[qi];
        LedgerEvent ev;
        ev.threshold_index = k;
        ev.queue_index = qi;
        ev.scheme = OnCurveScheme::fat(m);
        ev.need_before = need;
        ++qi;
        if (m < need) {
          ev.contributed = m;
          need -= m;
          on.push_back(ev.scheme);
        } else {
          const int v = static_cast<int>(need);
          ev.contributed = v;
          ev.split = true;
          if (m > 1) ev.residual = OnCurveScheme::delta(m - 1, m - v);
          tip_residual = ev.residual;
          need = 0;
        }
        tr.events.push_back(ev);
      }
    }
    std::vector<OnCurveScheme> next;
    for (const auto& s : on) {
      if (auto r = staircase_colon(s)) next.push_back(*r);
    }
    if (tip_residual) next.push_back(*tip_residual);
    on = std::move(next);
    tr.after_split.push_back(on);
    ++tr.splits;
  }
  return finish(LedgerStatus::Complete);
}

std::vector<std::int64_t> plan_thresholds(const DegenPlan& plan, std::int64_t w) {
  std::vector<std::int64_t> th{w};
  for (int k = 2; k <= plan.mu; ++k) th.push_back(h0_C(plan.s, plan.t, plan.e - plan.t * (plan.mu - k + 1)));
  return th;
}

// ------------------------------------------------------------ verifier

const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::Nonspecial: return "nonspecial";
    case Conclusion::Special: return "special";
    case Conclusion::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::int64_t ResidualSeries::vdim() const {
  std::int64_t v = h0_surface(t, e) - scheme_degree(fat);
  for (const auto& s : deltas) v -= s.degree();
  return v;
}

std::string ResidualSeries::to_string() const {
  std::string s = "L_" + std::to_string(e) + "^" + std::to_string(t) + "(" +
                  format_multiplicities(sorted_desc(fat));
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    s += (i == 0 && fat.empty()) ? "" : ",";
    s += deltas[i].to_string();
  }
  return s + ")";
}

std::string render_proof(const CaseTrace& trace) {
  std::ostringstream os;
  os << trace.input.to_string() << "\n";
  for (std::size_t i = 0; i < trace.log.size(); ++i) os << "  " << (i + 1) << ". " << trace.log[i] << "\n";
  os << "  conclusion: " << to_string(trace.conclusion);
  if (trace.conclusion != Conclusion::Inconclusive) os << " (dim " << trace.dim << ")";
  if (!trace.failing_step.empty()) os << "; failed at: " << trace.failing_step;
  os << "\n";
  return os.str();
}

CaseTrace TheoremBVerifier::verify(int d, int e, const Multiplicities& mults) {
  if (d < 4) throw Error(ErrorCode::InvalidArgument, "the case analysis needs d >= 4");
  Multiplicities m = mults;
  canonicalize(m);
  for (int v : m) {
    if (v < 1 || v > 4) throw Error(ErrorCode::InvalidArgument, "multiplicities must lie in 1..4");
  }
  const auto key = std::make_tuple(d, e, m);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto trace = verify_uncached(d, e, m);
  memo_.emplace(key, trace);
  return trace;
}

SubResult TheoremBVerifier::fat_nonspecial(int t, int e, const Multiplicities& fat) {
  SubResult r;
  auto spec = SurfaceSeriesSpec::make(t, e, fat);
  r.what = spec.to_string();
  if (e < 0) {
    r.method = "negative degree";
    r.conclusion = Conclusion::Nonspecial;
    return r;
  }
  if (t <= 3) {
    const auto v = lowdeg::classify_lowdeg(spec);
    r.method = t == 1 ? "planar reduction" : (t == 2 ? "quadric classifier" : "cubic classifier");
    r.dim = v.dim;
    if (v.confidence != planar::Confidence::Unconditional) {
      r.conclusion = Conclusion::Inconclusive;
      r.method += " (conditional)";
    } else {
      r.conclusion = v.special ? Conclusion::Special : Conclusion::Nonspecial;
    }
    return r;
  }
  const auto child = verify(t, e, fat);
  r.method = "case analysis on degree " + std::to_string(t);
  r.conclusion = child.conclusion;
  r.dim = child.dim;
  return r;
}

SubResult TheoremBVerifier::residual_nonspecial(const ResidualSeries& rs) {
  Multiplicities fat = rs.fat;
  canonicalize(fat);
  auto deltas = rs.deltas;
  std::sort(deltas.begin(), deltas.end());
  if (deltas.empty()) return fat_nonspecial(rs.t, rs.e, fat);

  const auto key = std::make_tuple(rs.t, rs.e, fat, deltas);
  if (auto it = residual_memo_.find(key); it != residual_memo_.end()) return it->second;

  SubResult r;
  r.what = ResidualSeries{rs.t, rs.e, fat, deltas}.to_string();
  if (rs.e < 0) {
    r.method = "negative degree";
    r.conclusion = Conclusion::Nonspecial;
    residual_memo_.emplace(key, r);
    return r;
  }
  const auto d0 = deltas.front();
  std::vector<OnCurveScheme> rest(deltas.begin() + 1, deltas.end());
  auto with = [&](std::optional<int> extra) {
    ResidualSeries x{rs.t, rs.e, fat, rest};
    if (extra) x.fat.push_back(*extra);
    return residual_nonspecial(x);
  };
  const auto base = with(std::nullopt);
  const auto lower = with(d0.m);
  const auto upper = with(d0.m + 1);
  r.method = "replace " + d0.to_string() + " by " + std::to_string(d0.m) + " and " +
             std::to_string(d0.m + 1) + ": " + to_string(base.conclusion) + "/" +
             to_string(lower.conclusion) + "/" + to_string(upper.conclusion);
  if (base.conclusion == Conclusion::Nonspecial && lower.conclusion == Conclusion::Nonspecial &&
      upper.conclusion == Conclusion::Nonspecial) {
    r.conclusion = Conclusion::Nonspecial;
    r.dim = std::max<std::int64_t>(ResidualSeries{rs.t, rs.e, fat, deltas}.vdim(), 0);
  }
  residual_memo_.emplace(key, r);
  return r;
}

bool TheoremBVerifier::run_plan(CaseTrace& trace, const DegenPlan& plan, const Multiplicities& queue,
                                const Checks& checks) {
  auto fail = [&](const std::string& step) {
    trace.failing_step = step;
    trace.log.push_back("FAILED: " + step);
    return false;
  };
  trace.plan = plan;
  trace.ledger.reset();
  trace.residual.reset();
  trace.identity.reset();
  trace.thresholds.clear();
  trace.log.push_back("degenerate to S (degree " + std::to_string(plan.s) + ") + T (degree " +
                      std::to_string(plan.t) + "), twist " + std::to_string(plan.mu) + "; S gets (" +
                      format_multiplicities(sorted_desc(plan.gamma_S)) + "), T gets (" +
                      format_multiplicities(sorted_desc(plan.gamma_T)) + ")");

  const auto hyp = plan_hypotheses(plan, classifier_decider());
  trace.hypotheses = hyp;
  if (!hyp.decided) return fail("hypotheses on S undecided");
  trace.log.push_back("kernel " + hyp.kernel.to_string() + (hyp.kernel_empty ? " is empty" : " is NOT empty"));
  trace.log.push_back("glued series " + hyp.glued.to_string() + ": dim " + std::to_string(hyp.w) +
                      ", vdim " + std::to_string(hyp.vdim_glued) +
                      (hyp.nonspecial_S ? ", nonspecial" : ", special"));
  if (!hyp.holds()) return fail("hypotheses on S");

  const auto id = vdim_identity(plan, hyp.w);
  trace.identity = id;
  trace.log.push_back("vdim " + std::to_string(id.vdim_original) + " = vdim on T " +
                      std::to_string(id.vdim_twisted));
  if (!id.holds) return fail("vdim identity");
  if (id.vdim_twisted > 0) return fail("positive vdim on T");

  if (checks) {
    for (const auto& [text, ok] : checks(hyp.w)) {
      trace.log.push_back("check " + text + (ok ? ": ok" : ": FAILS"));
      if (!ok) return fail(text);
    }
  }

  trace.thresholds = plan_thresholds(plan, hyp.w);
  trace.log.push_back("thresholds " + join_thresholds(trace.thresholds) + "; queue (" +
                      format_multiplicities(queue) + ")");
  auto ledger = run_ledger(queue, trace.thresholds, plan.t);
  for (const auto& ev : ledger.events) {
    std::string line = "  [" + std::to_string(ev.threshold_index + 1) + "] " +
                       (ev.from_queue ? "specialize " : "residual ") + ev.scheme.to_string() +
                       " contributes " + std::to_string(ev.contributed) + " of " +
                       std::to_string(ev.need_before);
    if (ev.split) line += ", C splits, leaves " + (ev.residual ? ev.residual->to_string() : std::string("nothing"));
    trace.log.push_back(line);
  }
  trace.ledger = ledger;
  if (ledger.status != LedgerStatus::Complete) return fail(std::string("ledger ") + to_string(ledger.status));
  int alpha = 0, beta = 0;
  for (const auto& s : ledger.on_curve) (s.kind == OnCurveScheme::Kind::Fat ? alpha : beta)++;
  trace.log.push_back("residuals on C: " + std::to_string(alpha) + " fat, " + std::to_string(beta) +
                      " delta; alpha+2beta = " + std::to_string(alpha + 2 * beta) + " vs " +
                      std::to_string(h0_surface(plan.t, 2) - 1));
  if (!ledger.general_position) return fail("general position of residuals");

  ResidualSeries res;
  res.t = plan.t;
  res.e = plan.mu == 0 ? plan.e - plan.s : plan.e;
  res.fat = ledger.pending;
  for (const auto& s : ledger.on_curve) {
    if (s.kind == OnCurveScheme::Kind::Fat) res.fat.push_back(s.m);
    else res.deltas.push_back(s);
  }
  canonicalize(res.fat);
  trace.residual = res;
  trace.log.push_back("residual series " + res.to_string() + ", vdim " + std::to_string(res.vdim()));
  if (res.vdim() != id.vdim_twisted) return fail("vdim not preserved by the splits");

  const auto sub = residual_nonspecial(res);
  trace.subresults.push_back(sub);
  trace.log.push_back(sub.what + ": " + to_string(sub.conclusion) + " by " + sub.method);
  if (sub.conclusion != Conclusion::Nonspecial) return fail("residual series not shown nonspecial");
  trace.log.push_back("residual series is empty, so the series on the special fiber is empty");
  trace.failing_step.clear();
  return true;
}

namespace {

// Sub-multisets of `all` (canonical) as count vectors over its distinct values.
std::vector<Multiplicities> sub_multisets(const Multiplicities& all, std::size_t cap,
                                          const std::function<bool(const Multiplicities&)>& keep) {
  std::vector<int> values;
  std::vector<int> counts;
  for (int v : all) {
    if (values.empty() || values.back() != v) {
      values.push_back(v);
      counts.push_back(0);
    }
    ++counts.back();
  }
  std::vector<Multiplicities> out;
  std::vector<int> take(values.size(), 0);
  // larger multiplicities vary slowest, most-taken first
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (out.size() >= cap) return;
    if (i == values.size()) {
      Multiplicities m;
      for (std::size_t k = 0; k < values.size(); ++k) m.insert(m.end(), take[k], values[k]);
      if (keep(m)) out.push_back(m);
      return;
    }
    for (int c = counts[i]; c >= 0; --c) {
      take[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

constexpr std::size_t kSubsetCap = 400;

}  // namespace

bool TheoremBVerifier::gluing_plans(CaseTrace& trace, int s, std::int64_t lo, std::int64_t hi,
                                    const std::function<bool(const Multiplicities&)>& accept_S,
                                    const Checks& checks) {
  const int d = trace.padded.d, e = trace.padded.e, t = d - s;
  const auto& all = trace.padded.mults;
  const std::int64_t h0S = h0_surface(s, e);
  auto in_range = [&](const Multiplicities& g) {
    const std::int64_t w = h0S - scheme_degree(g);
    return w >= lo && w <= hi && accept_S(g);
  };

  std::vector<Multiplicities> candidates;
  {
    Multiplicities greedy;
    std::int64_t w = h0S;
    for (int v : all) {
      if (w <= hi) break;
      Multiplicities trial = greedy;
      trial.push_back(v);
      if (w - fat_degree(v) >= lo && accept_S(trial)) {
        greedy = trial;
        w -= fat_degree(v);
      }
    }
    if (in_range(greedy)) candidates.push_back(greedy);
  }
  for (auto& g : sub_multisets(all, kSubsetCap, in_range)) {
    if (candidates.empty() || g != candidates.front()) candidates.push_back(g);
  }
  if (candidates.empty()) {
    trace.failing_step = "no choice of points on S with w in [" + std::to_string(lo) + "," +
                         std::to_string(hi) + "]";
    trace.log.push_back("FAILED: " + trace.failing_step);
    return false;
  }
  const auto log_mark = trace.log.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    trace.log.resize(log_mark);
    trace.subresults.clear();
    if (i > 0) trace.log.push_back("choice " + std::to_string(i + 1) + " of points on S");
    DegenPlan plan{e, s, t, 0, candidates[i], remove_all(all, candidates[i])};
    plan.gamma_T = sorted_desc(plan.gamma_T);
    if (run_plan(trace, plan, plan.gamma_T, checks)) return true;
  }
  return false;
}

bool TheoremBVerifier::try_literal(CaseTrace& trace) {
  const int d = trace.padded.d, e = trace.padded.e;
  const auto& all = trace.padded.mults;
  using CheckList = std::vector<std::pair<std::string, bool>>;

  if (d == 4 && e == 3 && count_of(all, 4) >= 2) {
    trace.case_label = "quartic, e=3, two quadruple points: two quadrics, twist 1";
    return run_plan(trace, DegenPlan{e, 2, 2, 1, {}, all}, all, nullptr);
  }
  if (d == 4 && e == 3) {
    const bool lone = count_of(all, 4) == 1;
    trace.case_label = lone ? "quartic, e=3, one quadruple point: two quadrics, w=6"
                            : "quartic, e=3, no quadruple point: two quadrics, w=4";
    const std::int64_t w_target = lone ? 6 : 4;
    auto accept = [lone](const Multiplicities& g) {
      if (lone) return g == Multiplicities{4};
      return std::find(g.begin(), g.end(), 4) == g.end();
    };
    auto checks = [&](std::int64_t w) {
      const auto rest = lone ? remove_all(all, {4}) : all;
      const std::int64_t degT = scheme_degree(all) - (h0_surface(2, 3) - w);
      CheckList c{{"deg Gamma' = " + std::to_string(degT) + " >= " + std::to_string(w + 4), degT >= w + 4}};
      if (lone) {
        const auto mult = total_multiplicity(rest);
        c.emplace_back("total multiplicity on T " + std::to_string(mult) + " >= 6", mult >= 6);
      }
      return c;
    };
    return gluing_plans(trace, 2, w_target, w_target, accept, checks);
  }
  if (d == 4 && (e == 4 || e == 5)) {
    trace.case_label = "quartic, e=" + std::to_string(e) + ": two quadrics, twist 2";
    auto checks = [&](std::int64_t w) {
      const std::int64_t need = w + h0_C(2, 2, e - 2);
      const auto mult = total_multiplicity(all);
      return CheckList{{"total multiplicity " + std::to_string(mult) + " >= " + std::to_string(need), mult >= need}};
    };
    return run_plan(trace, DegenPlan{e, 2, 2, 2, {}, all}, all, checks);
  }
  if (d == 4 && e == 6) {
    const std::int64_t deg = scheme_degree(all);
    const std::pair<int, int> strategies[] = {{4, 3}, {3, 3}, {2, 4}, {1, 11}};
    const char* names[] = {"three quadruple points", "three triple points", "four double points",
                           "eleven simple points"};
    int pick = -1;
    for (int i = 0; i < 4 && pick < 0; ++i) {
      if (count_of(all, strategies[i].first) >= strategies[i].second) pick = i;
    }
    // without any of the four, deg <= 2*10 + 2*6 + 3*3 + 10*1 = 51
    CheckList pre{{"deg Gamma = " + std::to_string(deg) + " >= 74", deg >= 74},
                  {"one of the four point configurations is present (else deg <= 51)", pick >= 0}};
    trace.case_label = "quartic, e=6: two quadrics, twist 3";
    if (pick < 0) {
      for (const auto& [text, ok] : pre) trace.log.push_back("check " + text + (ok ? ": ok" : ": FAILS"));
      trace.failing_step = "no specialization strategy applies";
      return false;
    }
    trace.case_label += std::string(", ") + names[pick];
    Multiplicities queue(static_cast<std::size_t>(strategies[pick].second), strategies[pick].first);
    const auto rest = sorted_desc(remove_all(all, queue));
    queue.insert(queue.end(), rest.begin(), rest.end());
    return run_plan(trace, DegenPlan{e, 2, 2, 3, {}, all}, queue, [pre](std::int64_t) { return pre; });
  }
  if (d == 4 && e >= 7) {
    const bool seven = e == 7;
    const std::int64_t lo = seven ? 5 : 4, hi = seven ? 14 : 13, bound = seven ? 41 : 53;
    trace.case_label = std::string("quartic, e") + (seven ? "=7" : ">=8") + ": two quadrics, w in [" +
                       std::to_string(lo) + "," + std::to_string(hi) + "]";
    auto checks = [&, bound](std::int64_t w) {
      const std::int64_t degT = scheme_degree(all) - (h0_surface(2, e) - w);
      const std::int64_t floor_ = w + h0_surface(2, e - 2);
      return CheckList{{"deg Gamma' = " + std::to_string(degT) + " >= w + h0(O_T(" + std::to_string(e - 2) +
                            ")) = " + std::to_string(floor_) + " >= " + std::to_string(bound),
                        degT >= floor_ && floor_ >= bound}};
    };
    return gluing_plans(trace, 2, lo, hi, [](const Multiplicities&) { return true; }, checks);
  }
  // d >= 5, e >= d - 1
  if ((e == 4 && d == 5) || (e == 5 && d == 5) || (e == 5 && d == 6)) {
    trace.case_label = "d=" + std::to_string(d) + ", e=" + std::to_string(e) +
                       ": quadric + degree " + std::to_string(d - 2) + " surface, twist 1";
    auto checks = [&](std::int64_t w) {
      const std::int64_t c = h0_C(2, d - 2, e - d + 2);
      const auto mult = total_multiplicity(all);
      return CheckList{{"h0(O_C(" + std::to_string(e - d + 2) + ")) = " + std::to_string(c) + " <= 9", c <= 9},
                       {"total multiplicity " + std::to_string(mult) + " >= " + std::to_string(w), mult >= w}};
    };
    return run_plan(trace, DegenPlan{e, 2, d - 2, 1, {}, all}, all, checks);
  }
  trace.case_label = "d=" + std::to_string(d) + ", e>=6: quadric + degree " + std::to_string(d - 2) +
                     " surface, w in [7,16]";
  auto checks = [&](std::int64_t w) {
    const std::int64_t degT = scheme_degree(all) - (h0_surface(2, e) - w);
    const std::int64_t floor_ = w + h0_surface(d - 2, e - 2);
    return CheckList{{"deg Gamma' = " + std::to_string(degT) + " >= w + h0(O_T(" + std::to_string(e - 2) +
                          ")) = " + std::to_string(floor_) + " >= 41",
                      degT >= floor_ && floor_ >= 41}};
  };
  return gluing_plans(trace, 2, 7, 16, [](const Multiplicities&) { return true; }, checks);
}

bool TheoremBVerifier::try_search(CaseTrace& trace) {
  const int d = trace.padded.d, e = trace.padded.e;
  const auto& all = trace.padded.mults;
  trace.case_label += " / plan search";
  const auto log_mark = trace.log.size();
  for (int s = 1; s <= std::min(3, d - 1); ++s) {
    for (int mu = 0; mu <= 3; ++mu) {
      const int t = d - s;
      const auto subsets = sub_multisets(all, kSubsetCap / 4, [&](const Multiplicities& g) {
        return h0_surface(s, e - t * mu) - scheme_degree(g) >= 0;
      });
      for (const auto& g : subsets) {
        trace.log.resize(log_mark);
        trace.subresults.clear();
        trace.log.push_back("plan search: s=" + std::to_string(s) + ", twist " + std::to_string(mu));
        DegenPlan plan{e, s, t, mu, g, sorted_desc(remove_all(all, g))};
        if (run_plan(trace, plan, plan.gamma_T, nullptr)) return true;
      }
    }
  }
  trace.failing_step = "plan search exhausted";
  return false;
}

CaseTrace TheoremBVerifier::verify_uncached(int d, int e, const Multiplicities& mults) {
  CaseTrace trace;
  trace.input = SurfaceSeriesSpec::make(d, e, mults);
  if (e < 0) {
    trace.padded = trace.input;
    trace.case_label = "negative degree";
    trace.log.push_back("O_S(e) has no sections for e < 0");
    trace.conclusion = Conclusion::Nonspecial;
    return trace;
  }
  const std::int64_t v = vdim(trace.input);
  trace.padding = static_cast<int>(std::max<std::int64_t>(v, 0));
  Multiplicities padded = mults;
  padded.insert(padded.end(), static_cast<std::size_t>(trace.padding), 1);
  trace.padded = SurfaceSeriesSpec::make(d, e, padded);
  trace.log.push_back("vdim " + std::to_string(v) +
                      (trace.padding > 0 ? "; add " + std::to_string(trace.padding) +
                                               " simple points, it suffices to show " +
                                               trace.padded.to_string() + " is empty"
                                         : "; show the series has dimension max(vdim, 0)"));

  if (e < d - 1) {
    const int t = d - 1;
    trace.case_label = "e < d-1: plane + degree " + std::to_string(t) + " surface, restriction to C is an isomorphism";
    DegenPlan plan{e, 1, t, 0, {}, padded};
    trace.plan = plan;
    const auto hyp = plan_hypotheses(plan, classifier_decider());
    trace.hypotheses = hyp;
    const std::int64_t hc = h0_C(1, t, e);
    trace.log.push_back("all points on T; h0(O_S(" + std::to_string(e) + ")) = " + std::to_string(hyp.w) +
                        " = h0(O_C(" + std::to_string(e) + ")) = " + std::to_string(hc));
    if (!hyp.holds() || hyp.w != hc) {
      trace.failing_step = "restriction to C is not an isomorphism";
      return trace;
    }
    const auto sub = fat_nonspecial(t, e, padded);
    trace.subresults.push_back(sub);
    trace.log.push_back("the series is isomorphic to " + sub.what + ": " + to_string(sub.conclusion) +
                        " (dim " + std::to_string(sub.dim) + ") by " + sub.method);
    if (sub.conclusion == Conclusion::Nonspecial) {
      trace.conclusion = Conclusion::Nonspecial;
      trace.dim = edim(trace.input);
    } else if (sub.conclusion == Conclusion::Special && trace.padding == 0) {
      trace.conclusion = Conclusion::Special;
      trace.dim = sub.dim;
    } else {
      trace.failing_step = "series on T is " + std::string(to_string(sub.conclusion));
    }
    return trace;
  }

  if (try_literal(trace) || (plan_search_ && try_search(trace))) {
    trace.conclusion = Conclusion::Nonspecial;
    trace.dim = edim(trace.input);
    trace.fallback = trace.case_label.find("plan search") != std::string::npos;
  }
  return trace;
}

CaseTrace verify_theorem_B(int d, int e, const Multiplicities& mults) {
  TheoremBVerifier v;
  return v.verify(d, e, mults);
}

}  // namespace fatpoints::degen
