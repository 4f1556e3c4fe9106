#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fatpoints/series.hpp"

namespace fatpoints::planar {

enum class StepKind { LineSplit, Cremona, DropNonpositive };

const char* to_string(StepKind kind);

/// One move of the reduction. Points are named by their label, i.e. their
/// position in the initial canonical multiset; -1 marks a zero-padding slot.
struct ReductionStep {
  StepKind kind = StepKind::LineSplit;
  std::vector<int> points;
  /// Degree drop: 1 for a line split, a = m1 + m2 + m3 - e for a Cremona step.
  int amount = 0;
  PlanarSeriesSpec after;
};

struct ReductionTrace {
  PlanarSeriesSpec initial;
  std::vector<ReductionStep> steps;
  PlanarSeriesSpec terminal;
  int max_multiplicity = 0;
};

enum class Confidence { Unconditional, ShghConditional };

const char* to_string(Confidence c);

/// Multiplicities up to this bound are covered by the known cases of the
/// planar speciality conjecture.
inline constexpr int kUnconditionalMultiplicityBound = 11;

struct PlanarVerdict {
  std::int64_t dim = 0;
  std::int64_t edim = 0;
  bool special = false;
  Confidence confidence = Confidence::Unconditional;
  ReductionTrace trace;
};

std::int64_t vdim(const PlanarSeriesSpec& spec);
std::int64_t edim(const PlanarSeriesSpec& spec);

/// m1 + m2 + m3 <= e, padding with zeros; never standard for e < 0.
bool is_standard(const PlanarSeriesSpec& spec);

/// Removes the line through the two heaviest points. Requires m1 + m2 >= e + 1.
PlanarSeriesSpec split_line(const PlanarSeriesSpec& spec);

/// Quadratic transformation centered at the three heaviest points.
/// Requires m1 + m2 <= e < m1 + m2 + m3.
PlanarSeriesSpec cremona(const PlanarSeriesSpec& spec);

ReductionTrace reduce(const PlanarSeriesSpec& spec);

/// Re-applies the recorded steps to trace.initial.
PlanarSeriesSpec replay(const ReductionTrace& trace);

PlanarVerdict classify_planar(const PlanarSeriesSpec& spec);

}  // namespace fatpoints::planar
