#include <random>
#include <set>

#include "doctest.h"
#include "fatpoints/dims.hpp"
#include "fatpoints/lowdeg.hpp"
#include "fatpoints/oracle.hpp"
#include "fatpoints/planar.hpp"

using namespace fatpoints;
using namespace fatpoints::oracle;

namespace {

constexpr std::uint32_t kP = 32003;

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

// f(P + xA + yB + phi N) computed term by term with plain series products.
BivariateSeries compose_directly(const SurfaceInstance& S, const Chart& ch, const BivariateSeries& phi) {
  const PrimeField F(S.p);
  const int order = phi.order();
  std::array<BivariateSeries, 4> X;
  for (int v = 0; v < 4; ++v) {
    BivariateSeries s(order);
    s.ref(0, 0) = ch.P[v];
    if (order >= 1) {
      s.ref(1, 0) = ch.A[v];
      s.ref(0, 1) = ch.B[v];
    }
    s.add_scaled(F, phi, ch.N[v]);
    X[v] = s;
  }
  BivariateSeries total(order);
  for (std::size_t i = 0; i < S.mons.size(); ++i) {
    BivariateSeries term(order);
    term.ref(0, 0) = S.coeffs[i];
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < S.mons[i][v]; ++k) term = term.mul(F, X[v]);
    total.add_scaled(F, term, 1);
  }
  return total;
}

}  // namespace

TEST_CASE("primality and field arithmetic") {
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
  for (std::uint64_t p : {32003ULL, 31991ULL, 31013ULL, 2147483647ULL, 2147483629ULL, 1000000007ULL})
    CHECK(is_prime(p));
  CHECK_FALSE(is_prime(2147483649ULL));
  const PrimeField F(kP);
  for (Fe a = 1; a < 200; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
  CHECK(F.from_int(-1) == kP - 1);
  CHECK_THROWS_AS(PrimeField(32004), Error);
}

TEST_CASE("uniform draws and seeds are reproducible") {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(uniform_below(a, 1000) == uniform_below(b, 1000));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("monomial counts") {
  for (int k = 0; k <= 12; ++k)
    CHECK(static_cast<std::int64_t>(monomials(k).size()) == dims::choose3(k + 3));
  CHECK(monomials(-1).empty());
}

TEST_CASE("roots agree with exhaustive search") {
  const std::uint32_t p = 101;
  const PrimeField F(p);
  std::mt19937_64 gen(99);
  for (int it = 0; it < 300; ++it) {
    UniPoly f(static_cast<std::size_t>(1 + uniform_below(gen, 8)));
    for (auto& c : f) c = static_cast<Fe>(uniform_below(gen, p));
    if (std::all_of(f.begin(), f.end(), [](Fe c) { return c == 0; })) continue;
    std::vector<Fe> brute;
    for (Fe x = 0; x < p; ++x) {
      Fe v = 0;
      for (std::size_t i = f.size(); i-- > 0;) v = F.add(F.mul(v, x), f[i]);
      if (v == 0) brute.push_back(x);
    }
    CHECK(roots(F, f, gen) == brute);
  }
  // x(x-1)(x-2)...(x-9) splits completely.
  UniPoly g{1};
  for (Fe r = 0; r < 10; ++r) {
    UniPoly next(g.size() + 1, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      next[i + 1] = F.add(next[i + 1], g[i]);
      next[i] = F.sub(next[i], F.mul(r, g[i]));
    }
    g = next;
  }
  CHECK(roots(F, g, gen).size() == 10);
}

TEST_CASE("random surfaces are seeded") {
  std::mt19937_64 a(17), b(17), c(18);
  const auto s1 = random_surface(4, kP, a);
  const auto s2 = random_surface(4, kP, b);
  const auto s3 = random_surface(4, kP, c);
  CHECK(s1.coeffs == s2.coeffs);
  CHECK(s1.coeffs != s3.coeffs);
  CHECK(s1.coeffs.size() == 35);
  std::mt19937_64 g(1);
  CHECK(random_surface(1, kP, g).coeffs.size() == 4);
}

TEST_CASE("sampled points are smooth points of the surface") {
  std::mt19937_64 gen(3);
  for (int d = 1; d <= 6; ++d) {
    const auto S = random_surface(d, kP, gen);
    std::vector<ProjPoint> used;
    for (int i = 0; i < 8; ++i) {
      const auto sp = sample_surface_point(S, gen, 64, used);
      CHECK(S.eval(sp.point) == 0);
      const auto g = S.gradient(sp.point);
      CHECK(std::any_of(g.begin(), g.end(), [](Fe c) { return c != 0; }));
      for (const auto& q : used) CHECK_FALSE(same_projective_point(PrimeField(kP), q, sp.point));
      used.push_back(sp.point);
    }
  }
}

TEST_CASE("point sampling calibration on quadrics") {
  // A random line meets a quadric in a rational point with probability
  // close to 1/2, so k lines succeed with probability about 1 - 2^-k.
  int within5 = 0, within7 = 0, lines = 0;
  const int runs = 2000;
  for (int r = 0; r < runs; ++r) {
    std::mt19937_64 gen(derive_seed(2024, static_cast<std::uint64_t>(r)));
    const auto S = random_surface(2, kP, gen);
    const auto sp = sample_surface_point(S, gen, 64);
    lines += sp.attempts;
    within5 += sp.attempts <= 5;
    within7 += sp.attempts <= 7;
  }
  const double per_line = static_cast<double>(runs) / lines;
  CHECK(per_line > 0.45);
  CHECK(per_line < 0.55);
  CHECK(within5 >= 0.95 * runs);
  CHECK(within7 >= 0.99 * runs);
}

TEST_CASE("retries exhausted is reported") {
  // X0^2 + X1^2 + X2^2 + X3^2 has points, but one line may miss; with a
  // single attempt some seed must fail within a few tries.
  const auto S = surface_from_coefficients(2, kP, {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1},
                                                   {{0, 0, 2, 0}, 1}, {{0, 0, 0, 2}, 1}});
  bool failed = false;
  for (int s = 0; s < 40 && !failed; ++s) {
    std::mt19937_64 gen(static_cast<std::uint64_t>(s));
    try {
      sample_surface_point(S, gen, 1);
    } catch (const Error& e) {
      failed = e.code() == ErrorCode::RetriesExhausted;
    }
  }
  CHECK(failed);
}

TEST_CASE("jets on model surfaces") {
  const auto plane = surface_from_coefficients(1, kP, {{{0, 0, 0, 1}, 1}});
  const auto phi0 = jet_parametrize(plane, ProjPoint{1, 0, 0, 0}, 5);
  CHECK(phi0.is_zero());

  // X0 X3 - X1 X2: at (1,0,0,0) the local equation is z - xy.
  const auto quad = surface_from_coefficients(2, kP, {{{1, 0, 0, 1}, 1}, {{0, 1, 1, 0}, -1}});
  const auto phi = jet_parametrize(quad, ProjPoint{1, 0, 0, 0}, 6);
  for (int n = 0; n <= 6; ++n)
    for (int j = 0; j <= n; ++j) CHECK(phi.at(n - j, j) == ((n - j == 1 && j == 1) ? 1u : 0u));
}

TEST_CASE("jets of random surfaces satisfy the equation") {
  std::mt19937_64 gen(11);
  for (int d = 2; d <= 6; ++d)
    for (int order : {1, 4, 9}) {
      const auto S = random_surface(d, kP, gen);
      const auto P = sample_surface_point(S, gen, 64).point;
      const auto ch = make_chart(S, P);
      const auto phi = jet_parametrize(S, ch, order);
      CHECK(phi.at(0, 0) == 0);
      CHECK(compose_directly(S, ch, phi).is_zero());
      CHECK(substitute(PrimeField(kP), local_equation(S, ch), phi).is_zero());
    }
}

TEST_CASE("condition row counts and evaluation row") {
  std::mt19937_64 gen(21);
  const auto S = random_surface(4, kP, gen);
  const auto P = sample_surface_point(S, gen, 64).point;
  const auto dir = random_tangent_direction(S, P, gen);
  CHECK(condition_rows(S, 5, ImposedScheme::fat(P, 1)).size() == 1);
  CHECK(condition_rows(S, 5, ImposedScheme::fat(P, 4)).size() == 10);
  CHECK(condition_rows(S, 5, ImposedScheme::delta(P, 9, 7, dir)).size() == 52);

  // Fat(1) is evaluation at P (up to the chart scaling, which is 1 here).
  const auto row = condition_rows(S, 3, ImposedScheme::fat(P, 1)).front();
  const PrimeField F(kP);
  const auto mons = monomials(3);
  for (std::size_t c = 0; c < mons.size(); ++c) {
    Fe v = 1;
    for (int k = 0; k < 4; ++k) v = F.mul(v, F.pow(P[k], static_cast<std::uint64_t>(mons[c][k])));
    CHECK(row[c] == v);
  }

  ProjPoint bad = P;  // P itself is not a tangent direction
  CHECK_THROWS_AS(condition_rows(S, 5, ImposedScheme::delta(P, 3, 1, bad)), Error);
  CHECK_THROWS_AS(ImposedScheme::delta(P, 3, 4, dir), Error);
}

TEST_CASE("multiples of the surface form satisfy every condition") {
  std::mt19937_64 gen(31);
  const PrimeField F(kP);
  for (int d = 1; d <= 4; ++d) {
    const auto S = random_surface(d, kP, gen);
    const auto P = sample_surface_point(S, gen, 64).point;
    const auto dir = random_tangent_direction(S, P, gen);
    const int e = d + 3;
    const auto cols = monomials(e);
    const auto rows = condition_rows(S, e, ImposedScheme::delta(P, 5, 3, dir));
    for (const auto& g : monomials(e - d)) {
      // Coefficient vector of f * X^g.
      Row v(cols.size(), 0);
      for (std::size_t i = 0; i < S.mons.size(); ++i) {
        Exponent sum{S.mons[i][0] + g[0], S.mons[i][1] + g[1], S.mons[i][2] + g[2], S.mons[i][3] + g[3]};
        const auto pos = std::find(cols.begin(), cols.end(), sum) - cols.begin();
        v[static_cast<std::size_t>(pos)] = F.add(v[static_cast<std::size_t>(pos)], S.coeffs[i]);
      }
      for (const auto& r : rows) {
        Fe s = 0;
        for (std::size_t c = 0; c < cols.size(); ++c) s = F.add(s, F.mul(r[c], v[c]));
        CHECK(s == 0);
      }
    }
  }
}

TEST_CASE("echelon rank matches products of known rank") {
  const PrimeField F(kP);
  std::mt19937_64 gen(41);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 5 + uniform_below(gen, 20), m = 5 + uniform_below(gen, 20),
                      k = uniform_below(gen, 12);
    std::vector<Row> L(n, Row(k)), R(k, Row(m));
    for (auto& r : L) for (auto& x : r) x = static_cast<Fe>(uniform_below(gen, kP));
    for (auto& r : R) for (auto& x : r) x = static_cast<Fe>(uniform_below(gen, kP));
    std::vector<Row> M(n, Row(m, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t t = 0; t < k; ++t) M[i][j] = F.add(M[i][j], F.mul(L[i][t], R[t][j]));
    CHECK(rank(F, M, m) == std::min({n, m, k}));
  }
  EchelonBasis b(F, 3);
  CHECK(b.insert({1, 2, 3}));
  const auto mark = b.checkpoint();
  CHECK(b.insert({0, 1, 1}));
  CHECK_FALSE(b.insert({1, 3, 4}));
  b.rollback(mark);
  CHECK(b.rank() == 1);
  CHECK(b.insert({1, 3, 4}));
}

TEST_CASE("dimension counts on quartics and quintics") {
  std::mt19937_64 gen(2718);
  const auto S = random_surface(4, kP, gen);
  std::vector<ProjPoint> pts;
  for (int i = 0; i < 2; ++i) pts.push_back(sample_surface_point(S, gen, 64, pts).point);
  CHECK(series_dim(S, 2, {ImposedScheme::fat(pts[0], 4)}) == 1);
  CHECK(series_dim(S, 5, {ImposedScheme::fat(pts[0], 10)}) == 1);
  CHECK(series_dim(S, 3, {ImposedScheme::fat(pts[0], 4), ImposedScheme::fat(pts[1], 4)}) == 0);
  CHECK(series_dim(S, 5, {ImposedScheme::fat(pts[0], 9)}) == 7);
  CHECK_THROWS_AS(series_dim(S, 3, {ImposedScheme::fat(pts[0], 2), ImposedScheme::fat(pts[0], 1)}),
                  Error);
}

TEST_CASE("adding a scheme never raises the dimension") {
  std::mt19937_64 gen(55);
  for (int d = 1; d <= 4; ++d) {
    const auto S = random_surface(d, kP, gen);
    std::vector<ImposedScheme> schemes;
    std::vector<ProjPoint> used;
    std::int64_t prev = series_dim(S, 6, {});
    CHECK(prev == dims::h0_surface(d, 6));
    for (int m : {4, 3, 3, 2, 2, 1}) {
      const auto P = sample_surface_point(S, gen, 64, used).point;
      used.push_back(P);
      schemes.push_back(ImposedScheme::fat(P, m));
      const auto now = series_dim(S, 6, schemes);
      CHECK(now <= prev);
      CHECK(prev - now <= dims::fat_degree(m));
      prev = now;
    }
  }
}

TEST_CASE("planar dimensions agree with the Cremona classifier") {
  std::mt19937_64 gen(77);
  for (int it = 0; it < 120; ++it) {
    const int e = static_cast<int>(uniform_below(gen, 9));
    Multiplicities m(uniform_below(gen, 7));
    for (auto& x : m) x = 1 + static_cast<int>(uniform_below(gen, 4));
    const auto spec = SurfaceSeriesSpec::make(1, e, m);
    const auto want = planar::classify_planar({e, spec.mults}).dim;
    std::int64_t got = instance_dim(spec, 2147483647u, derive_seed(9, static_cast<std::uint64_t>(it)), 64);
    CHECK(got == want);
  }
}

TEST_CASE("oracle verdicts") {
  OracleConfig cfg;
  cfg.trials = 3;
  const auto tangent = oracle_verdict(SurfaceSeriesSpec::make(4, 2, {4}), cfg);
  CHECK(tangent.certified == Certification::SpecialAtInstances);
  CHECK(tangent.observed_dim == 1);
  const auto two = oracle_verdict(SurfaceSeriesSpec::make(4, 3, {4, 4}), cfg);
  CHECK(two.certified == Certification::NonspecialCertified);
  CHECK(two.observed_dim == 0);
  const auto conics = oracle_verdict(SurfaceSeriesSpec::make(1, 4, {2, 2, 2}), cfg);
  CHECK(conics.certified == Certification::NonspecialCertified);
  CHECK(conics.observed_dim == 6);
  CHECK(conics.trials.size() == 6);

  OracleConfig tight = cfg;
  tight.column_budget = 10;
  CHECK_THROWS_AS(oracle_verdict(SurfaceSeriesSpec::make(4, 3, {4}), tight), Error);
  OracleConfig same = cfg;
  same.p2 = same.p;
  CHECK_THROWS_AS(oracle_verdict(SurfaceSeriesSpec::make(4, 3, {4}), same), Error);
}

TEST_CASE("delta point condition counts") {
  OracleConfig cfg;
  cfg.trials = 2;
  const auto big = delta_condition_count(4, 5, 9, 7, cfg);
  CHECK(big.drop == 51);
  CHECK(big.fat_m_drop == 45);
  CHECK(big.fat_m1_drop == 51);
  CHECK(big.hypothesis_met);
  CHECK(big.dichotomy_holds);
  CHECK(big.formula_holds);
  CHECK(delta_condition_count(4, 5, 9, 0, cfg).drop == 45);
  // Conics: a double point (1, x, y) plus the x^2 coefficient.
  CHECK(delta_condition_count(1, 2, 2, 1, cfg).drop == 4);
}

TEST_CASE("sweeper agrees with direct evaluation") {
  const OracleSweeper sw(2, 4, 2147483647u, 5, 4, 6);
  CHECK(sw.columns() == 35);
  std::int64_t visited = 0;
  sw.for_each({4, 3, 2}, 30, [&](const Multiplicities& m, std::int64_t dim) {
    ++visited;
    CHECK(dim == sw.dim(m));
    CHECK(dim == lowdeg::classify_lowdeg(SurfaceSeriesSpec::make(2, 4, m)).dim);
  });
  CHECK(visited > 20);
}
