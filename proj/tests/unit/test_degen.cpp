#include "doctest.h"

#include <random>

#include "fatpoints/degen.hpp"
#include "fatpoints/dims.hpp"

using namespace fatpoints;
using namespace fatpoints::degen;
using namespace fatpoints::dims;

namespace {

// dim of k[x0..x3]_e / (x0^d)_e, counted monomial by monomial
std::int64_t h0_by_monomials(int d, int e) {
  if (e < 0) return 0;
  std::int64_t n = 0;
  for (int a = 0; a <= e; ++a)
    for (int b = 0; a + b <= e; ++b)
      for (int c = 0; a + b + c <= e; ++c)
        if (a < d) ++n;
  return n;
}

OnCurveScheme F(int m) { return OnCurveScheme::fat(m); }
OnCurveScheme D(int m, int n) { return OnCurveScheme::delta(m, n); }

}  // namespace

TEST_CASE("twisted h0 values") {
  CHECK(h0_modified(6, 2, 2, 3) == 74);
  CHECK(h0_modified(3, 2, 2, 1) == 20);
  CHECK(h0_curve(CICurve{2, 2}, 0) == 1);
  CHECK(h0_curve(CICurve{2, 2}, 2) == 8);
  CHECK(h0_curve(CICurve{2, 2}, 4) == 16);
  for (int s = 1; s <= 4; ++s)
    for (int t = 1; t <= 4; ++t)
      for (int e = -2; e <= 9; ++e) CHECK(h0_modified(e, s, t, 0) == h0_surface(t, e));
  CHECK_THROWS_AS(h0_modified(3, 0, 2, 0), Error);
}

TEST_CASE("twisted h0 against a monomial count of the whole fiber") {
  // h0_modified - h0(O_C(e - t mu)) + h0(O_S(e - t mu)) = h0(O(e)) on a degree s+t surface
  for (int s = 1; s <= 5; ++s)
    for (int t = 1; t <= 5; ++t)
      for (int mu = 0; mu <= 3; ++mu)
        for (int e = 0; e <= 12; ++e) {
          const int k = e - t * mu;
          const auto lhs = h0_modified(e, s, t, mu) - h0_curve(CICurve{s, t}, k) + h0_by_monomials(s, k);
          CHECK(lhs == h0_by_monomials(s + t, e));
        }
}

TEST_CASE("vdim on T") {
  DegenPlan two{3, 2, 2, 1, {}, {4, 4}};
  CHECK(vdim_T(two, 4) == 0);
  DegenPlan six{6, 2, 2, 3, {}, {4, 4, 4}};
  CHECK(vdim_T(six, 1) == 74 - 30);
  DegenPlan plain{5, 2, 3, 0, {}, {3, 2}};
  const auto cap = h0_curve(CICurve{2, 3}, 5);
  CHECK(vdim_T(plain, cap) == h0_surface(3, 5) - 9);
  CHECK_THROWS_AS(vdim_T(plain, cap + 1), Error);
  CHECK_THROWS_AS(vdim_T(plain, -1), Error);
}

TEST_CASE("plan hypotheses") {
  const auto cls = classifier_decider();
  auto two = plan_hypotheses(DegenPlan{3, 2, 2, 1, {}, {4, 4}}, cls);
  CHECK(two.holds());
  CHECK(two.kernel.e == -1);
  CHECK(two.w == 4);

  auto ten = plan_hypotheses(DegenPlan{5, 1, 4, 1, {}, {10}}, cls);
  CHECK(ten.holds());
  CHECK(ten.w == 3);

  auto over = plan_hypotheses(DegenPlan{1, 2, 2, 0, {4}, {}}, cls);
  CHECK(over.decided);
  CHECK(over.kernel_empty);
  CHECK(over.w == 0);
  CHECK(over.vdim_glued < 0);
  CHECK_FALSE(over.holds());

  // L_2^2(2^3) has a nonempty kernel L_0 only when mu puts it there; here S carries L_6^2(4^4,2^3)
  auto special = plan_hypotheses(DegenPlan{6, 2, 2, 0, {4, 4, 4, 4, 2, 2, 2}, {}}, cls);
  CHECK(special.decided);
  CHECK_FALSE(special.nonspecial_S);

  auto quartic = plan_hypotheses(DegenPlan{3, 4, 1, 0, {2}, {}}, cls);
  CHECK_FALSE(quartic.decided);
}

TEST_CASE("vdim identity") {
  auto two = vdim_identity(DegenPlan{3, 2, 2, 1, {}, {4, 4}}, 4);
  CHECK(two.holds);
  CHECK(two.vdim_original == 0);

  // mu = 0 with nothing on S: the kernel is empty iff e < t, and then w = h0(O_S(e)) = h0(O_C(e))
  for (int s = 1; s <= 4; ++s)
    for (int t = 1; t <= 4; ++t)
      for (int e = 0; e <= 10; ++e) {
        CHECK(h0_surface(s + t, e) == h0_surface(t, e) + h0_surface(s, e) - h0_curve(CICurve{s, t}, e));
        if (e >= t) continue;
        CHECK(h0_surface(s, e) == h0_curve(CICurve{s, t}, e));
        DegenPlan p{e, s, t, 0, {}, {3, 2}};
        CHECK(vdim_identity(p, h0_curve(CICurve{s, t}, e)).holds);
      }

  std::mt19937_64 gen(7);
  const auto cls = classifier_decider();
  int checked = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    const int s = 1 + static_cast<int>(gen() % 3);
    const int t = 1 + static_cast<int>(gen() % (8 - s));
    const int mu = static_cast<int>(gen() % 4);
    const int e = static_cast<int>(gen() % 11);
    DegenPlan p{e, s, t, mu, {}, {}};
    const int ns = static_cast<int>(gen() % 4), nt = static_cast<int>(gen() % 5);
    for (int i = 0; i < ns; ++i) p.gamma_S.push_back(1 + static_cast<int>(gen() % 4));
    for (int i = 0; i < nt; ++i) p.gamma_T.push_back(1 + static_cast<int>(gen() % 4));
    const auto h = plan_hypotheses(p, cls);
    if (!h.holds()) continue;
    ++checked;
    CHECK(vdim_identity(p, h.w).holds);
  }
  CHECK(checked > 500);
}

TEST_CASE("staircase rules, closed form against ideal arithmetic") {
  for (int m = 1; m <= 12; ++m) {
    for (int n = 0; n <= m; ++n) {
      const auto sch = D(m, n);
      CAPTURE(sch.to_string());
      const auto I = StaircaseIdeal::of(sch);
      CHECK(I.colength() == sch.degree());
      CHECK(I.identify() == sch);
      CHECK(staircase_restrict(sch) == staircase_restrict_explicit(sch));
      CHECK(staircase_colon(sch) == staircase_colon_explicit(sch));
      const auto r = staircase_colon(sch);
      CHECK(sch.degree() == (r ? r->degree() : 0) + staircase_restrict(sch));
    }
  }
  CHECK(staircase_restrict(D(3, 3)) == 4);
  CHECK(staircase_colon(D(3, 3)) == D(2, 2));
  CHECK_FALSE(staircase_colon(F(1)).has_value());
  CHECK_FALSE(staircase_colon(D(1, 1)).has_value());
  CHECK(staircase_colon(F(4)) == F(3));
  CHECK(staircase_colon(D(3, 1)) == F(2));

  StaircaseIdeal q({{4, 0}, {2, 1}, {1, 2}, {0, 3}});
  CHECK(q == StaircaseIdeal::of(D(3, 1)));
  CHECK(q.colon_y() == StaircaseIdeal({{2, 0}, {1, 1}, {0, 2}}));
  CHECK(StaircaseIdeal({{2, 0}, {3, 0}, {0, 1}, {1, 1}}).generators().size() == 2);
  CHECK_THROWS_AS(StaircaseIdeal({{1, 1}}).colength(), Error);
  CHECK_THROWS_AS(D(2, 3), Error);
}

TEST_CASE("ledger examples") {
  auto a = run_ledger({4}, {4});
  CHECK(a.status == LedgerStatus::Complete);
  CHECK(a.splits == 1);
  CHECK(a.on_curve == std::vector<OnCurveScheme>{F(3)});

  auto b = run_ledger({10}, {3});
  CHECK(b.status == LedgerStatus::Complete);
  REQUIRE(b.events.size() == 1);
  CHECK(b.events[0].contributed == 3);
  CHECK(b.on_curve == std::vector<OnCurveScheme>{D(9, 7)});

  auto c = run_ledger({4, 4, 4}, {1, 8});
  CHECK(c.status == LedgerStatus::Complete);
  CHECK(c.after_split[0] == std::vector<OnCurveScheme>{D(3, 3)});
  CHECK(c.on_curve == std::vector<OnCurveScheme>{D(2, 2), F(3)});
  CHECK(c.pending == Multiplicities{4});
  REQUIRE(c.events.size() == 3);
  CHECK_FALSE(c.events[1].from_queue);
  CHECK(c.events[1].contributed == 4);
  CHECK(c.events[2].contributed == 4);
  CHECK(c.events[2].split);

  auto full = run_ledger({4, 4, 4}, {1, 8, 16});
  CHECK(full.after_split.size() == 2);
  CHECK(full.after_split[1] == std::vector<OnCurveScheme>{D(2, 2), F(3)});
  CHECK(full.status == LedgerStatus::InsufficientMultiplicity);

  CHECK(run_ledger({2, 2}, {10}).status == LedgerStatus::InsufficientMultiplicity);
  CHECK(run_ledger({4, 4}, {1, 2}).status == LedgerStatus::ResidualTipsSplit);
  CHECK_THROWS_AS(run_ledger({0}, {1}), Error);
  CHECK_THROWS_AS(run_ledger({1}, {-1}), Error);

  auto z = run_ledger({3}, {0, 2});
  CHECK(z.splits == 2);
  CHECK(z.on_curve == std::vector<OnCurveScheme>{D(2, 1)});
}

TEST_CASE("ledger conservation on random queues") {
  std::mt19937_64 gen(11);
  for (int iter = 0; iter < 2000; ++iter) {
    Multiplicities q;
    const int n = 1 + static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) q.push_back(1 + static_cast<int>(gen() % 5));
    std::vector<std::int64_t> th;
    const int k = 1 + static_cast<int>(gen() % 3);
    for (int i = 0; i < k; ++i) th.push_back(1 + static_cast<int>(gen() % 12));
    const auto tr = run_ledger(q, th, 2 + static_cast<int>(gen() % 2));
    if (tr.status != LedgerStatus::Complete) continue;
    std::vector<std::int64_t> sums(th.size(), 0);
    for (const auto& ev : tr.events) sums[ev.threshold_index] += ev.contributed;
    CHECK(sums == th);
    std::int64_t consumed = 0, residual = 0, total = 0;
    for (std::size_t i = 0; i < q.size() - tr.pending.size(); ++i) consumed += fat_degree(q[i]);
    for (const auto& s : tr.on_curve) residual += s.degree();
    for (auto x : th) total += x;
    CHECK(consumed == total + residual);
  }
}

TEST_CASE("general position") {
  CHECK_FALSE(general_position_ok(7, 1, 2));
  CHECK(general_position_ok(6, 1, 2));
  CHECK(general_position_ok(7, 1, 3));
  CHECK(general_position_ok(7, 1, 4));
  CHECK(general_position_ok(0, 0, 1));
  CHECK_THROWS_AS(general_position_ok(-1, 0, 2), Error);
}

TEST_CASE("thresholds from plans") {
  CHECK(plan_thresholds(DegenPlan{6, 2, 2, 3, {}, {}}, 1) == std::vector<std::int64_t>{1, 8, 16});
  CHECK(plan_thresholds(DegenPlan{3, 2, 2, 1, {}, {}}, 4) == std::vector<std::int64_t>{4});
  CHECK(plan_thresholds(DegenPlan{5, 2, 2, 2, {}, {}}, 4) == std::vector<std::int64_t>{4, 12});
}

TEST_CASE("case analysis: two quadruple points on a quartic") {
  const auto tr = verify_theorem_B(4, 3, {4, 4});
  CHECK(tr.conclusion == Conclusion::Nonspecial);
  CHECK(tr.dim == 0);
  CHECK(tr.padding == 0);
  CHECK(tr.thresholds == std::vector<std::int64_t>{4});
  REQUIRE(tr.residual.has_value());
  CHECK(tr.residual->to_string() == "L_3^2(4,3)");
  CHECK(tr.residual->vdim() == 0);
  CHECK_FALSE(tr.fallback);
}

TEST_CASE("case analysis: three quadruple points, e = 6") {
  const auto tr = verify_theorem_B(4, 6, {4, 4, 4});
  CHECK(tr.padding == 44);
  CHECK(tr.conclusion == Conclusion::Nonspecial);
  CHECK(tr.dim == 44);
  CHECK(tr.thresholds == std::vector<std::int64_t>{1, 8, 16});
  REQUIRE(tr.ledger.has_value());
  REQUIRE(tr.ledger->after_split.size() == 3);
  CHECK(tr.ledger->after_split[1] == std::vector<OnCurveScheme>{D(2, 2), F(3)});
  CHECK(tr.case_label.find("three quadruple") != std::string::npos);
  CHECK(render_proof(tr).find("conclusion: nonspecial") != std::string::npos);
}

TEST_CASE("case analysis: the tangent-plane series") {
  for (int d = 4; d <= 7; ++d) {
    const auto tr = verify_theorem_B(d, 2, {4});
    CHECK(tr.conclusion == Conclusion::Special);
    CHECK(tr.dim == 1);
  }
  const auto five = verify_theorem_B(5, 2, {4});
  REQUIRE_FALSE(five.subresults.empty());
  CHECK(five.subresults[0].what == "L_2^4(4)");
  CHECK(verify_theorem_B(4, 2, {4, 1}).conclusion == Conclusion::Nonspecial);
  CHECK(verify_theorem_B(4, -1, {4}).conclusion == Conclusion::Nonspecial);
  CHECK_THROWS_AS(verify_theorem_B(3, 2, {4}), Error);
  CHECK_THROWS_AS(verify_theorem_B(4, 2, {5}), Error);
}

TEST_CASE("case analysis: small sweep on quartics and quintics") {
  TheoremBVerifier v;
  int special = 0;
  for (int d = 4; d <= 5; ++d)
    for (int e = 0; e <= 7; ++e)
      for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 5; ++b)
          for (int c = 0; a + b + c <= 5; ++c) {
            Multiplicities m(a, 4);
            m.insert(m.end(), b, 3);
            m.insert(m.end(), c, 2);
            const auto tr = v.verify(d, e, m);
            CAPTURE(tr.input.to_string());
            CAPTURE(tr.failing_step);
            CHECK(tr.conclusion != Conclusion::Inconclusive);
            if (tr.conclusion == Conclusion::Special) {
              ++special;
              CHECK(e == 2);
              CHECK(m == Multiplicities{4});
            }
          }
  CHECK(special == 2);
}
