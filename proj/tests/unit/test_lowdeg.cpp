#include "doctest.h"
#include "fatpoints/dims.hpp"
#include "fatpoints/lowdeg.hpp"

using namespace fatpoints;
using namespace fatpoints::lowdeg;

namespace {

SurfaceSeriesSpec S(int d, int e, Multiplicities m) {
  return SurfaceSeriesSpec::make(d, e, std::move(m));
}

// The known list for quadrics, without the double-curve series below.
std::vector<SurfaceSeriesSpec> known_quadric_list() {
  std::vector<SurfaceSeriesSpec> out;
  for (const char* text : {"2^3", "4"}) out.push_back(S(2, 2, parse_multiplicities(text)));
  for (const char* text : {"3^2,2", "3^3", "4,2^2"})
    out.push_back(S(2, 3, parse_multiplicities(text)));
  for (const char* text : {"4,2^5", "4,3^2", "4,3^2,2", "4^2,2", "4^2,2^2", "4^2,3", "4^3"})
    out.push_back(S(2, 4, parse_multiplicities(text)));
  for (const char* text : {"4^3", "4^3,2", "4^3,2^2", "4^3,3"})
    out.push_back(S(2, 5, parse_multiplicities(text)));
  out.push_back(S(2, 6, parse_multiplicities("4^5")));
  return out;
}

// D = (6,6) - 4(E1+..+E4) - 2(F1+F2+F3) on P1 x P1 equals 2C for the
// (-1)-curve C = (3,3) - 2(E1+..+E4) - (F1+F2+F3), so the series is special.
std::vector<SurfaceSeriesSpec> quadric_list() {
  auto out = known_quadric_list();
  out.insert(out.end() - 1, S(2, 6, parse_multiplicities("4^4,2^3")));
  return out;
}

}  // namespace

TEST_CASE("quadric and cubic images") {
  CHECK(quadric_to_planar(S(2, 3, {4, 3})) == PlanarSeriesSpec::make(6, {4, 3, 3, 3}));
  CHECK(quadric_to_planar(S(2, 4, {4, 4, 4})) == PlanarSeriesSpec::make(8, {4, 4, 4, 4, 4}));
  CHECK(quadric_to_planar(S(2, 0, {})) == PlanarSeriesSpec::make(0, {}));
  CHECK(cubic_to_planar(S(3, 2, {4})) == PlanarSeriesSpec::make(6, {4, 2, 2, 2, 2, 2, 2}));
  CHECK(cubic_to_planar(S(3, 1, {2})) == PlanarSeriesSpec::make(3, {2, 1, 1, 1, 1, 1, 1}));
  CHECK(cubic_to_planar(S(3, 0, {})) == PlanarSeriesSpec::make(0, {}));
  CHECK_THROWS_AS(quadric_to_planar(S(3, 1, {})), Error);
  CHECK_THROWS_AS(cubic_to_planar(S(2, 1, {})), Error);
}

TEST_CASE("images preserve virtual dimension") {
  for (int e = 0; e <= 10; ++e)
    for (const Multiplicities m : {Multiplicities{}, Multiplicities{4, 3}, Multiplicities{2, 2, 1}}) {
      CHECK(planar::vdim(quadric_to_planar(S(2, e, m))) == dims::vdim(S(2, e, m)));
      CHECK(planar::vdim(cubic_to_planar(S(3, e, m))) == dims::vdim(S(3, e, m)));
    }
}

TEST_CASE("low-degree classification") {
  CHECK(classify_lowdeg(S(2, 6, {4, 4, 4, 4, 4})).special);
  const auto c = classify_lowdeg(S(3, 2, {4}));
  CHECK(c.special);
  CHECK(c.dim == 1);
  CHECK_FALSE(classify_lowdeg(S(2, 7, {4, 4, 4})).special);
  CHECK(classify_lowdeg(S(2, 3, {4, 3})).dim == 0);
  CHECK(classify_lowdeg(S(2, -1, {2})).dim == 0);
  CHECK_THROWS_AS(classify_lowdeg(S(4, 2, {4})), Error);
}

TEST_CASE("double-curve quadric series") {
  // C^2 = 2*3*3 - 4*4 - 3 and -K.C = 2*(3+3) - 2*4 - 3.
  CHECK(2 * 3 * 3 - 4 * 4 - 3 == -1);
  CHECK(2 * (3 + 3) - 2 * 4 - 3 == 1);
  const auto s = S(2, 6, parse_multiplicities("4^4,2^3"));
  CHECK(dims::vdim(s) == 0);
  const auto v = classify_lowdeg(s);
  CHECK(v.dim == 1);
  CHECK(v.trace.terminal == PlanarSeriesSpec::make(0, {}));
}

TEST_CASE("special quadric series") {
  const auto table = enumerate_special(2, 8, 20);
  CHECK(table.entries == quadric_list());
  CHECK(table.conditional_entries.empty());
  for (const auto& s : table.entries) {
    const auto v = classify_lowdeg(s);
    CHECK(v.dim >= 1);
    CHECK(v.edim < v.dim);
  }
}

TEST_CASE("special cubic series") {
  const auto table = enumerate_special(3, 8, 20);
  REQUIRE(table.entries.size() == 1);
  CHECK(table.entries[0] == S(3, 2, {4}));
}

TEST_CASE("enumeration saturates in slack") {
  CHECK(enumerate_special(2, 8, 30, 2).entries == quadric_list());
  CHECK(enumerate_special(3, 8, 30).entries.size() == 1);
  CHECK(enumerate_special(2, 1, 20).entries.empty());
}
