#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fatpoints/dims.hpp"
#include "fatpoints/oracle.hpp"
#include "fatpoints/series.hpp"

namespace fatpoints::degen {

// ------------------------------------------------------------ twisted counts

/// h^0(O_T(e)) + sum_{k=1..mu} h^0(O_C(e - t k)).
std::int64_t h0_modified(int e, int s, int t, int mu);

/// A two-surface degeneration S u T of a degree s + t surface.
struct DegenPlan {
  int e = 0;
  int s = 1;
  int t = 1;
  int mu = 0;
  Multiplicities gamma_S;
  Multiplicities gamma_T;

  int d() const { return s + t; }
  std::string to_string() const;
};

/// h0_modified - deg(gamma_T) - (h^0(O_C(e - t mu)) - w). Requires
/// 0 <= w <= h^0(O_C(e - t mu)).
std::int64_t vdim_T(const DegenPlan& plan, std::int64_t w);

/// Certified dimension of a fat-point series, or nullopt when undecided.
using DimensionDecider = std::function<std::optional<std::int64_t>(const SurfaceSeriesSpec&)>;

/// Planar/quadric/cubic classifier for d <= 3 (unconditional verdicts only).
DimensionDecider classifier_decider();

/// Classifiers for d <= 3, oracle_verdict otherwise (certified nonspecial only).
DimensionDecider oracle_decider(const oracle::OracleConfig& cfg);

struct PlanHypotheses {
  bool decided = false;
  bool kernel_empty = false;
  bool nonspecial_S = false;
  std::int64_t w = 0;          // dimension of the glued series
  std::int64_t vdim_glued = 0;
  SurfaceSeriesSpec kernel;    // L_{e - t(mu+1)}^s(gamma_S)
  SurfaceSeriesSpec glued;     // L_{e - t mu}^s(gamma_S)
  bool holds() const { return decided && kernel_empty && nonspecial_S && vdim_glued >= 0; }
};

PlanHypotheses plan_hypotheses(const DegenPlan& plan, const DimensionDecider& decide);

struct IdentityCheck {
  std::int64_t vdim_original = 0;
  std::int64_t vdim_twisted = 0;
  bool holds = false;
};

/// vdim L_e^d(gamma_S, gamma_T) against vdim_T(plan, w).
IdentityCheck vdim_identity(const DegenPlan& plan, std::int64_t w);

// ------------------------------------------------------------ on-curve schemes

/// A fat point or a delta_{m,n} point whose distinguished direction is C.
struct OnCurveScheme {
  enum class Kind { Fat, DeltaAligned };
  Kind kind = Kind::Fat;
  int m = 1;
  int n = 0;

  static OnCurveScheme fat(int m);
  /// n = 0 gives Fat(m).
  static OnCurveScheme delta(int m, int n);

  std::int64_t degree() const;
  std::string to_string() const;
  friend bool operator==(const OnCurveScheme&, const OnCurveScheme&) = default;
  friend auto operator<=>(const OnCurveScheme&, const OnCurveScheme&) = default;
};

/// Length of the scheme cut by C (closed form).
int staircase_restrict(const OnCurveScheme& sch);
/// Residual after removing C once (closed form); nullopt for the empty scheme.
std::optional<OnCurveScheme> staircase_colon(const OnCurveScheme& sch);

/// Monomial ideal in k[x, y] by minimal generators x^a y^b, C being y = 0.
class StaircaseIdeal {
 public:
  static StaircaseIdeal of(const OnCurveScheme& sch);
  explicit StaircaseIdeal(std::vector<std::pair<int, int>> generators);

  const std::vector<std::pair<int, int>>& generators() const { return gens_; }
  bool contains(int a, int b) const;
  bool is_unit() const { return contains(0, 0); }
  /// Number of standard monomials; requires a zero-dimensional ideal.
  std::int64_t colength() const;
  /// I + (y).
  StaircaseIdeal plus_y() const;
  /// I : y.
  StaircaseIdeal colon_y() const;
  /// Recognizes Fat(m) or DeltaAligned(m, n) for m <= max_m; nullopt for the
  /// unit ideal. Throws if the ideal has neither shape.
  std::optional<OnCurveScheme> identify(int max_m = 64) const;
  friend bool operator==(const StaircaseIdeal&, const StaircaseIdeal&) = default;

 private:
  std::vector<std::pair<int, int>> gens_;
};

/// The same two rules computed through explicit ideal arithmetic.
int staircase_restrict_explicit(const OnCurveScheme& sch);
std::optional<OnCurveScheme> staircase_colon_explicit(const OnCurveScheme& sch);

// ------------------------------------------------------------ splitting ledger

enum class LedgerStatus { Complete, InsufficientMultiplicity, ResidualTipsSplit };
const char* to_string(LedgerStatus s);

struct LedgerEvent {
  std::size_t threshold_index = 0;
  bool from_queue = true;        // false: a residual already on C
  std::size_t queue_index = 0;   // position in the queue when from_queue
  OnCurveScheme scheme;
  std::int64_t contributed = 0;
  std::int64_t need_before = 0;  // conditions still required before this event
  bool split = false;
  std::optional<OnCurveScheme> residual;  // left by the tipping item
};

struct LedgerTrace {
  std::vector<std::int64_t> thresholds;
  Multiplicities queue;
  std::vector<LedgerEvent> events;
  /// Schemes on C after each split.
  std::vector<std::vector<OnCurveScheme>> after_split;
  std::vector<OnCurveScheme> on_curve;  // final residuals on C
  Multiplicities pending;               // queue items never specialized
  int splits = 0;
  LedgerStatus status = LedgerStatus::Complete;
  int t = 2;
  bool general_position = true;
  /// Which alternative of the limit theorem is used at each split.
  static constexpr const char* kLimitBranch = "tipping point leaves delta_{m-1,m-v}";
};

/// Specializes queue items onto C one at a time until every threshold is met.
/// A zero threshold splits C immediately.
LedgerTrace run_ledger(const Multiplicities& queue, const std::vector<std::int64_t>& thresholds,
                       int t = 2);

/// alpha + 2 beta <= h^0(O_T(2)) - 1.
bool general_position_ok(int alpha, int beta, int t);

/// Thresholds for a plan with gluing dimension w: w first, then
/// h^0(O_C(e - t(mu - k + 1))) for k = 2..mu.
std::vector<std::int64_t> plan_thresholds(const DegenPlan& plan, std::int64_t w);

// ------------------------------------------------------------ verifier

enum class Conclusion { Nonspecial, Special, Inconclusive };
const char* to_string(Conclusion c);

/// A series L_e^t(F, Delta) with fat points F and delta points Delta in general position.
struct ResidualSeries {
  int t = 1;
  int e = 0;
  Multiplicities fat;
  std::vector<OnCurveScheme> deltas;

  std::int64_t vdim() const;
  std::string to_string() const;
};

struct SubResult {
  std::string what;      // series checked
  std::string method;    // classifier / recursion / delta replacement
  Conclusion conclusion = Conclusion::Inconclusive;
  std::int64_t dim = 0;
};

struct CaseTrace {
  SurfaceSeriesSpec input;
  SurfaceSeriesSpec padded;
  int padding = 0;
  std::string case_label;
  bool fallback = false;
  std::optional<DegenPlan> plan;
  std::optional<PlanHypotheses> hypotheses;
  std::optional<IdentityCheck> identity;
  std::vector<std::int64_t> thresholds;
  std::optional<LedgerTrace> ledger;
  std::optional<ResidualSeries> residual;
  std::vector<SubResult> subresults;
  std::vector<std::string> log;
  Conclusion conclusion = Conclusion::Inconclusive;
  std::int64_t dim = 0;  // dimension of the input series when decided
  std::string failing_step;
};

/// Renders the trace as a step-by-step proof log.
std::string render_proof(const CaseTrace& trace);

/// Case analysis for L_e^d(Gamma), d >= 4, multiplicities in 1..4. Results
/// are memoized, so use one verifier per thread.
class TheoremBVerifier {
 public:
  TheoremBVerifier() = default;

  CaseTrace verify(int d, int e, const Multiplicities& mults);
  /// Whether L_e^t(F, Delta) is nonspecial, via the delta replacement and
  /// the classifiers or recursion.
  SubResult residual_nonspecial(const ResidualSeries& r);

  /// When false only the literal strategy is tried.
  void set_plan_search(bool on) { plan_search_ = on; }

 private:
  using Checks = std::function<std::vector<std::pair<std::string, bool>>(std::int64_t w)>;

  CaseTrace verify_uncached(int d, int e, const Multiplicities& mults);
  bool run_plan(CaseTrace& trace, const DegenPlan& plan, const Multiplicities& queue,
                const Checks& checks);
  /// mu = 0 plans whose S-part gives w in [lo, hi]; greedy choice first.
  bool gluing_plans(CaseTrace& trace, int s, std::int64_t lo, std::int64_t hi,
                    const std::function<bool(const Multiplicities&)>& accept_S,
                    const Checks& checks);
  bool try_literal(CaseTrace& trace);
  bool try_search(CaseTrace& trace);
  SubResult fat_nonspecial(int t, int e, const Multiplicities& fat);

  bool plan_search_ = true;
  std::map<std::tuple<int, int, Multiplicities>, CaseTrace> memo_;
  std::map<std::tuple<int, int, Multiplicities, std::vector<OnCurveScheme>>, SubResult> residual_memo_;
};

CaseTrace verify_theorem_B(int d, int e, const Multiplicities& mults);

}  // namespace fatpoints::degen
