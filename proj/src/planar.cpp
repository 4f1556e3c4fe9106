#include "fatpoints/planar.hpp"

#include <algorithm>

#include "fatpoints/dims.hpp"

namespace fatpoints::planar {

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::LineSplit: return "line_split";
    case StepKind::Cremona: return "cremona";
    case StepKind::DropNonpositive: return "drop_nonpositive";
  }
  return "unknown";
}

const char* to_string(Confidence c) {
  return c == Confidence::Unconditional ? "unconditional" : "shgh-conditional";
}

std::int64_t vdim(const PlanarSeriesSpec& spec) {
  return dims::h0_surface(1, spec.e) - dims::scheme_degree(spec.mults);
}

std::int64_t edim(const PlanarSeriesSpec& spec) { return std::max<std::int64_t>(vdim(spec), 0); }

namespace {

int mult_at(const Multiplicities& m, std::size_t i) { return i < m.size() ? m[i] : 0; }

struct Point {
  int label;
  int mult;
};

struct State {
  int e = 0;
  std::vector<Point> points;

  void sort() {
    std::stable_sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
      return a.mult != b.mult ? a.mult > b.mult : a.label < b.label;
    });
  }
  int top(std::size_t i) const { return i < points.size() ? points[i].mult : 0; }
  int label(std::size_t i) const { return i < points.size() ? points[i].label : -1; }

  PlanarSeriesSpec spec() const {
    Multiplicities m;
    for (const auto& p : points)
      if (p.mult > 0) m.push_back(p.mult);
    canonicalize(m);
    return {e, std::move(m)};
  }

  Point* find(int lbl) {
    for (auto& p : points)
      if (p.label == lbl) return &p;
    return nullptr;
  }
};

State initial_state(const PlanarSeriesSpec& spec) {
  State s;
  s.e = spec.e;
  for (std::size_t i = 0; i < spec.mults.size(); ++i)
    s.points.push_back({static_cast<int>(i), spec.mults[i]});
  s.sort();
  return s;
}

void apply(State& s, const ReductionStep& step) {
  switch (step.kind) {
    case StepKind::LineSplit:
    case StepKind::Cremona:
      s.e -= step.amount;
      for (int lbl : step.points) {
        if (lbl < 0) continue;
        Point* p = s.find(lbl);
        if (p == nullptr) throw Error(ErrorCode::Internal, "trace names a missing point");
        p->mult -= step.amount;
      }
      break;
    case StepKind::DropNonpositive:
      for (int lbl : step.points) {
        auto it = std::find_if(s.points.begin(), s.points.end(),
                               [&](const Point& p) { return p.label == lbl; });
        if (it == s.points.end() || it->mult > 0)
          throw Error(ErrorCode::Internal, "trace drops a positive point");
        s.points.erase(it);
      }
      break;
  }
  s.sort();
}

void drop_nonpositive(State& s, ReductionTrace& trace) {
  ReductionStep step{StepKind::DropNonpositive, {}, 0, {}};
  for (const auto& p : s.points)
    if (p.mult <= 0) step.points.push_back(p.label);
  if (step.points.empty()) return;
  apply(s, step);
  step.after = s.spec();
  trace.steps.push_back(std::move(step));
}

}  // namespace

bool is_standard(const PlanarSeriesSpec& spec) {
  if (spec.e < 0) return false;
  return mult_at(spec.mults, 0) + mult_at(spec.mults, 1) + mult_at(spec.mults, 2) <= spec.e;
}

PlanarSeriesSpec split_line(const PlanarSeriesSpec& spec) {
  const int m1 = mult_at(spec.mults, 0);
  const int m2 = mult_at(spec.mults, 1);
  if (m1 + m2 < spec.e + 1)
    throw Error(ErrorCode::PreconditionViolated,
                "line split needs m1 + m2 >= e + 1 in " + spec.to_string());
  Multiplicities m = spec.mults;
  for (std::size_t i = 0; i < 2 && i < m.size(); ++i) --m[i];
  std::erase_if(m, [](int x) { return x <= 0; });
  canonicalize(m);
  return {spec.e - 1, std::move(m)};
}

PlanarSeriesSpec cremona(const PlanarSeriesSpec& spec) {
  const int m1 = mult_at(spec.mults, 0);
  const int m2 = mult_at(spec.mults, 1);
  const int m3 = mult_at(spec.mults, 2);
  if (m1 + m2 > spec.e || m1 + m2 + m3 <= spec.e)
    throw Error(ErrorCode::PreconditionViolated,
                "Cremona step needs m1 + m2 <= e < m1 + m2 + m3 in " + spec.to_string());
  const int a = m1 + m2 + m3 - spec.e;
  Multiplicities m = spec.mults;
  for (std::size_t i = 0; i < 3; ++i) m[i] -= a;
  std::erase_if(m, [](int x) { return x <= 0; });
  canonicalize(m);
  return {spec.e - a, std::move(m)};
}

ReductionTrace reduce(const PlanarSeriesSpec& input) {
  ReductionTrace trace;
  trace.initial = PlanarSeriesSpec::make(input.e, input.mults);
  trace.max_multiplicity = mult_at(trace.initial.mults, 0);
  State s = initial_state(trace.initial);

  while (true) {
    drop_nonpositive(s, trace);
    if (s.e < 0) break;
    if (s.top(0) + s.top(1) >= s.e + 1) {
      ReductionStep step{StepKind::LineSplit, {s.label(0), s.label(1)}, 1, {}};
      apply(s, step);
      step.after = s.spec();
      trace.steps.push_back(std::move(step));
      continue;
    }
    const int a = s.top(0) + s.top(1) + s.top(2) - s.e;
    if (a <= 0) break;  // standard
    ReductionStep step{StepKind::Cremona, {s.label(0), s.label(1), s.label(2)}, a, {}};
    apply(s, step);
    step.after = s.spec();
    trace.steps.push_back(std::move(step));
  }
  trace.terminal = s.spec();
  return trace;
}

PlanarSeriesSpec replay(const ReductionTrace& trace) {
  State s = initial_state(trace.initial);
  for (const auto& step : trace.steps) apply(s, step);
  return s.spec();
}

PlanarVerdict classify_planar(const PlanarSeriesSpec& spec) {
  PlanarVerdict verdict;
  verdict.trace = reduce(spec);
  verdict.edim = edim(verdict.trace.initial);
  const auto& terminal = verdict.trace.terminal;
  verdict.dim = terminal.e < 0 ? 0 : edim(terminal);
  verdict.special = verdict.dim != verdict.edim;
  verdict.confidence = verdict.trace.max_multiplicity <= kUnconditionalMultiplicityBound
                           ? Confidence::Unconditional
                           : Confidence::ShghConditional;
  return verdict;
}

}  // namespace fatpoints::planar
