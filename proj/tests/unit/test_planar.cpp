#include <random>

#include "doctest.h"
#include "fatpoints/dims.hpp"
#include "fatpoints/planar.hpp"

using namespace fatpoints;
using namespace fatpoints::planar;

namespace {

PlanarSeriesSpec P(int e, Multiplicities m) { return PlanarSeriesSpec::make(e, std::move(m)); }

}  // namespace

TEST_CASE("standardness") {
  CHECK(is_standard(P(6, {2, 2, 2})));
  CHECK_FALSE(is_standard(P(8, {4, 4, 4, 4, 4})));
  CHECK(is_standard(P(3, {})));
  CHECK_FALSE(is_standard(P(-1, {})));
  CHECK(is_standard(P(5, {3, 2})));
}

TEST_CASE("line split") {
  CHECK(split_line(P(2, {2, 2})) == P(1, {1, 1}));
  CHECK(split_line(P(0, {1})) == P(-1, {}));
  CHECK(split_line(P(6, {4, 3, 3, 3})) == P(5, {3, 3, 3, 2}));
  CHECK_THROWS_AS(split_line(P(6, {3, 3})), Error);
}

TEST_CASE("Cremona step") {
  CHECK(cremona(P(8, {4, 4, 4, 4, 4})) == P(4, {4, 4}));
  CHECK(cremona(P(12, {6, 6, 4, 4, 4, 4, 4})) == P(8, {4, 4, 4, 4, 2, 2}));
  CHECK_THROWS_AS(cremona(P(6, {2, 2, 2})), Error);
  CHECK_THROWS_AS(cremona(P(6, {4, 3, 3})), Error);
}

TEST_CASE("reduction traces") {
  const auto empty = classify_planar(P(6, {4, 3, 3, 3}));
  CHECK(empty.trace.terminal.e < 0);
  CHECK(empty.dim == 0);

  const auto five = classify_planar(P(8, {4, 4, 4, 4, 4}));
  CHECK(five.trace.terminal == P(0, {}));
  CHECK(five.dim == 1);
  CHECK(five.edim == 0);
  CHECK(five.special);
  REQUIRE(!five.trace.steps.empty());
  CHECK(five.trace.steps.front().kind == StepKind::Cremona);
  CHECK(five.trace.steps.front().amount == 4);
  CHECK(five.trace.steps.front().points == std::vector<int>{0, 1, 2});

  const auto std_trace = reduce(P(9, {3, 2, 2}));
  CHECK(std_trace.steps.empty());
  CHECK(std_trace.terminal == P(9, {3, 2, 2}));
}

TEST_CASE("classification examples") {
  const auto dl = classify_planar(P(2, {2, 2}));
  CHECK(dl.dim == 1);
  CHECK(dl.special);
  const auto cubic = classify_planar(P(9, {3, 2, 2}));
  CHECK_FALSE(cubic.special);
  CHECK(cubic.dim == 55 - 12);
  for (int e = 0; e <= 10; ++e) {
    const auto v = classify_planar(P(e, {}));
    CHECK(v.dim == (e + 2) * (e + 1) / 2);
    CHECK_FALSE(v.special);
  }
  CHECK(classify_planar(P(-2, {1})).dim == 0);
  CHECK(classify_planar(P(20, {12})).confidence == Confidence::ShghConditional);
  CHECK(classify_planar(P(20, {11, 11})).confidence == Confidence::Unconditional);
}

TEST_CASE("trace properties over random series") {
  std::mt19937_64 gen(20240601);
  std::uniform_int_distribution<int> e_dist(-1, 14);
  std::uniform_int_distribution<int> r_dist(0, 9);
  std::uniform_int_distribution<int> m_dist(1, 7);
  for (int it = 0; it < 3000; ++it) {
    Multiplicities m(static_cast<std::size_t>(r_dist(gen)));
    for (auto& x : m) x = m_dist(gen);
    const auto spec = P(e_dist(gen), m);
    const auto trace = reduce(spec);
    CHECK(replay(trace) == trace.terminal);
    CHECK((trace.terminal.e < 0 || is_standard(trace.terminal)));

    PlanarSeriesSpec cur = trace.initial;
    int prev_max = trace.max_multiplicity;
    for (const auto& step : trace.steps) {
      if (step.kind == StepKind::Cremona) {
        CHECK(step.amount >= 1);
        CHECK(vdim(step.after) == vdim(cur));
        CHECK(cremona(cur) == step.after);
      } else if (step.kind == StepKind::LineSplit) {
        const int m1 = cur.mults.size() > 0 ? cur.mults[0] : 0;
        const int m2 = cur.mults.size() > 1 ? cur.mults[1] : 0;
        CHECK(m1 + m2 >= cur.e + 1);
        CHECK(vdim(step.after) - vdim(cur) == (m1 + m2) - (cur.e + 1));
        CHECK(split_line(cur) == step.after);
      }
      const int now_max = step.after.mults.empty() ? 0 : step.after.mults.front();
      CHECK(now_max <= prev_max);
      prev_max = now_max;
      cur = step.after;
    }
    const auto verdict = classify_planar(spec);
    CHECK(verdict.special == (verdict.dim != verdict.edim));
    CHECK(verdict.dim >= verdict.edim);
  }
}
