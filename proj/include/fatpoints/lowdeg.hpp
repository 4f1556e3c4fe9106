#pragma once

#include <string>
#include <vector>

#include "fatpoints/planar.hpp"
#include "fatpoints/series.hpp"

namespace fatpoints::lowdeg {

/// L_e^2(Gamma) -> L_{2e}^1(e, e, Gamma), via projection from a general point of the quadric.
PlanarSeriesSpec quadric_to_planar(const SurfaceSeriesSpec& spec);

/// L_e^3(Gamma) -> L_{3e}^1(e^6, Gamma), via the cubic as a blown-up plane.
PlanarSeriesSpec cubic_to_planar(const SurfaceSeriesSpec& spec);

/// Classification of a series on a general plane, quadric or cubic. The
/// verdict's edim refers to the surface series, which equals the planar one.
planar::PlanarVerdict classify_lowdeg(const SurfaceSeriesSpec& spec);

struct SpecialSeriesTable {
  int d = 2;
  int e_max = 0;
  int slack = 0;
  /// Special series sorted by e, then lexicographically by multiset.
  std::vector<SurfaceSeriesSpec> entries;
  /// Special verdicts that depended on the planar conjecture; expected empty.
  std::vector<SurfaceSeriesSpec> conditional_entries;
  long long scanned = 0;
};

/// Scans L_e^d(4^a, 3^b, 2^c) for 1 <= e <= e_max with deg <= h^0 + slack.
SpecialSeriesTable enumerate_special(int d, int e_max, int slack, int threads = 1);

/// Human-readable rendering with one row per degree e.
std::string render_table(const SpecialSeriesTable& table);

}  // namespace fatpoints::lowdeg
