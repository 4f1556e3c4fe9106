#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fatpoints/series.hpp"

namespace fatpoints::oracle {

using Fe = std::uint32_t;

/// Arithmetic modulo an odd prime p < 2^31.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  Fe add(Fe a, Fe b) const {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Fe>(s >= p_ ? s - p_ : s);
  }
  Fe sub(Fe a, Fe b) const { return a >= b ? a - b : static_cast<Fe>(std::uint64_t{a} + p_ - b); }
  Fe neg(Fe a) const { return a == 0 ? 0 : p_ - a; }
  Fe mul(Fe a, Fe b) const { return static_cast<Fe>(std::uint64_t{a} * b % p_); }
  Fe pow(Fe a, std::uint64_t k) const;
  Fe inv(Fe a) const;
  Fe from_int(std::int64_t v) const;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Uniform draw from [0, bound) by rejection, so sequences depend only on
/// the mt19937_64 stream and not on the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound);

/// Deterministic seed derivation (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

using Exponent = std::array<int, 4>;

/// Degree-k monomials in four variables, in a fixed order.
std::vector<Exponent> monomials(int k);

using ProjPoint = std::array<Fe, 4>;

/// Univariate polynomial, coefficient i of x^i; trailing zeros trimmed.
using UniPoly = std::vector<Fe>;

/// Distinct roots in F_p of a nonzero polynomial, ascending.
std::vector<Fe> roots(const PrimeField& F, UniPoly f, std::mt19937_64& gen);

struct SurfaceInstance {
  int d = 1;
  std::uint32_t p = 0;
  std::vector<Exponent> mons;
  std::vector<Fe> coeffs;

  Fe eval(const ProjPoint& x) const;
  std::array<Fe, 4> gradient(const ProjPoint& x) const;
  std::string to_string() const;
};

/// Uniform coefficients over all degree-d monomials; the zero form is rejected.
SurfaceInstance random_surface(int d, std::uint32_t p, std::mt19937_64& gen);
SurfaceInstance surface_from_coefficients(int d, std::uint32_t p,
                                          const std::vector<std::pair<Exponent, std::int64_t>>& terms);

struct SampledPoint {
  ProjPoint point{};
  int attempts = 0;  // lines tried, including the successful one
};

/// Random line through the ambient space, restricted to S; a rational root
/// with nonzero gradient not already in `avoid` is returned.
SampledPoint sample_surface_point(const SurfaceInstance& S, std::mt19937_64& gen, int max_retries,
                                  const std::vector<ProjPoint>& avoid = {});

bool same_projective_point(const PrimeField& F, const ProjPoint& a, const ProjPoint& b);

/// Truncated power series in x, y up to total degree `order`.
class BivariateSeries {
 public:
  BivariateSeries() = default;
  explicit BivariateSeries(int order) : order_(order), c_(size_for(order), 0) {}

  int order() const { return order_; }
  static std::size_t size_for(int order) {
    return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
  }
  static std::size_t index(int i, int j) {
    const int n = i + j;
    return static_cast<std::size_t>(n * (n + 1) / 2 + j);
  }
  Fe at(int i, int j) const { return i + j <= order_ ? c_[index(i, j)] : 0; }
  Fe& ref(int i, int j) { return c_[index(i, j)]; }
  const std::vector<Fe>& coeffs() const { return c_; }
  bool is_zero() const;

  BivariateSeries mul(const PrimeField& F, const BivariateSeries& o) const;
  void add_scaled(const PrimeField& F, const BivariateSeries& o, Fe s);

 private:
  int order_ = 0;
  std::vector<Fe> c_;
};

/// Local frame X = P + xA + yB + zN with grad f(P) . N != 0.
struct Chart {
  ProjPoint P{}, A{}, B{}, N{};
};

/// Builds a chart at a smooth point. With a direction, A is that tangent
/// vector, so the curve y = 0 on S is tangent to it.
Chart make_chart(const SurfaceInstance& S, const ProjPoint& P,
                 const std::optional<ProjPoint>& direction = std::nullopt);

/// F(x,y,z) = f(P + xA + yB + zN) as a dense trivariate polynomial.
struct LocalEquation {
  int d = 0;
  // Coefficient of x^i y^j z^k at index (i, j, k) with i + j + k <= d.
  std::vector<std::vector<std::vector<Fe>>> c;
  Fe at(int i, int j, int k) const;
};

LocalEquation local_equation(const SurfaceInstance& S, const Chart& chart);

/// phi with F(x, y, phi(x, y)) = 0 modulo terms of total degree > order.
BivariateSeries jet_parametrize(const SurfaceInstance& S, const Chart& chart, int order);
BivariateSeries jet_parametrize(const SurfaceInstance& S, const ProjPoint& P, int order);

/// F(x, y, phi) truncated at `order`; zero when phi is a correct jet.
BivariateSeries substitute(const PrimeField& F, const LocalEquation& eq, const BivariateSeries& phi);

/// A random nonzero tangent direction at P, independent of P.
ProjPoint random_tangent_direction(const SurfaceInstance& S, const ProjPoint& P,
                                   std::mt19937_64& gen);

struct ImposedScheme {
  enum class Kind { Fat, Delta };
  Kind kind = Kind::Fat;
  int m = 1;
  int n = 0;
  ProjPoint point{};
  std::optional<ProjPoint> direction;

  static ImposedScheme fat(const ProjPoint& p, int m);
  static ImposedScheme delta(const ProjPoint& p, int m, int n, const ProjPoint& direction);
  std::int64_t degree() const;
};

using Row = std::vector<Fe>;

/// Rows over the degree-e monomial columns (order of monomials(e)). Fat(m):
/// Taylor coefficients of x^i y^j, i + j <= m - 1, ordered by i + j; Delta
/// appends the coefficients of x^(m-j) y^j for j < n.
std::vector<Row> condition_rows(const SurfaceInstance& S, int e, const ImposedScheme& scheme);

/// Incremental row echelon form, each stored row normalized at its pivot.
class EchelonBasis {
 public:
  EchelonBasis(const PrimeField& F, std::size_t cols);

  /// Returns true if the row was independent of the rows inserted so far.
  bool insert(Row row);
  std::size_t rank() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t nullity() const { return cols_ - rows_.size(); }

  /// Rows are never modified after insertion, so undo is a truncation.
  std::size_t checkpoint() const { return rows_.size(); }
  void rollback(std::size_t mark);

 private:
  PrimeField F_;
  std::size_t cols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;          // pivot column of rows_[i]
  std::vector<std::int64_t> pivot_row_;      // column -> row index or -1
};

std::size_t rank(const PrimeField& F, const std::vector<Row>& rows, std::size_t cols);

/// nullity(condition matrix) - C3(e - d + 3).
std::int64_t series_dim(const SurfaceInstance& S, int e, const std::vector<ImposedScheme>& schemes);

struct OracleConfig {
  std::uint32_t p = 32003;
  std::uint32_t p2 = 31013;
  std::uint64_t seed = 1;
  int trials = 3;
  int max_retries = 64;
  std::int64_t column_budget = 2000;
  int threads = 1;

  void validate() const;
};

enum class Certification { NonspecialCertified, SpecialAtInstances, Inconclusive };
const char* to_string(Certification c);

struct TrialResult {
  std::uint32_t p = 0;
  std::uint64_t seed = 0;
  std::int64_t dim = 0;
};

struct OracleVerdict {
  SurfaceSeriesSpec spec;
  std::int64_t observed_dim = 0;
  std::int64_t edim = 0;
  std::int64_t columns = 0;
  std::int64_t rows = 0;
  Certification certified = Certification::Inconclusive;
  std::vector<TrialResult> trials;
};

/// Runs cfg.trials instances on each of cfg.p and cfg.p2.
OracleVerdict oracle_verdict(const SurfaceSeriesSpec& spec, const OracleConfig& cfg);

/// Dimension of one instance: random surface and general points from `seed`.
std::int64_t instance_dim(const SurfaceSeriesSpec& spec, std::uint32_t p, std::uint64_t seed,
                          int max_retries);

struct DeltaCount {
  int d = 0, e = 0, m = 0, n = 0;
  std::int64_t h0 = 0;
  std::int64_t drop = 0;         // conditions imposed by a general delta_{m,n}
  std::int64_t fat_m_drop = 0;   // by a general m-uple point
  std::int64_t fat_m1_drop = 0;  // by a general (m+1)-uple point
  bool hypothesis_met = false;   // the m-uple point imposes min(C(m+1,2), h0)
  bool dichotomy_holds = false;  // drop = min(deg, h0) or drop = fat_m1_drop
  bool formula_holds = false;    // drop = C(m+1,2) + min(n, fat_m1_drop - C(m+1,2))
};

/// Drops are maximized over cfg.trials instances on each prime.
DeltaCount delta_condition_count(int d, int e, int m, int n, const OracleConfig& cfg);

/// Cached evaluation of many fat-point series on one random surface of
/// degree d in one degree e: points come from a shared pool and carry
/// precomputed Fat(max_mult) rows, so Fat(m) uses a row prefix.
class OracleSweeper {
 public:
  OracleSweeper(int d, int e, std::uint32_t p, std::uint64_t seed, int max_mult, int max_points,
                int max_retries = 64);

  int d() const { return d_; }
  int e() const { return e_; }
  std::size_t columns() const { return cols_; }

  /// Dimension for a canonical multiset with at most max_points entries.
  std::int64_t dim(const Multiplicities& mults) const;

  using Visitor = std::function<void(const Multiplicities&, std::int64_t)>;

  /// Calls visit(mults, dim) for every non-increasing sequence over the
  /// alphabet (descending) with at most max_points entries whose scheme
  /// degree is at most max_degree, the empty sequence included. caps[i],
  /// when given and nonnegative, bounds how often alphabet[i] occurs.
  void for_each(const std::vector<int>& alphabet, std::int64_t max_degree,
                const Visitor& visit, const std::vector<int>& caps = {}) const;

 private:
  void dfs(const std::vector<int>& alphabet, const std::vector<int>& caps, std::size_t first,
           std::int64_t budget,
           Multiplicities& current, EchelonBasis& basis, const Visitor& visit) const;

  int d_, e_, max_mult_, max_points_;
  PrimeField F_;
  std::size_t cols_;
  std::int64_t floor_;
  std::vector<std::vector<Row>> pool_rows_;
};

}  // namespace fatpoints::oracle
