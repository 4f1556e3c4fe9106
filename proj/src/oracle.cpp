#include "fatpoints/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "fatpoints/dims.hpp"
#include "parallel.hpp"

namespace fatpoints::oracle {

// ---------------------------------------------------------------- field

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p < 3 || p >= (1U << 31) || !is_prime(p))
    throw Error(ErrorCode::InvalidArgument, "modulus must be an odd prime below 2^31");
}

Fe PrimeField::pow(Fe a, std::uint64_t k) const {
  Fe r = 1 % p_;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

Fe PrimeField::inv(Fe a) const {
  if (a == 0) throw Error(ErrorCode::Internal, "inverse of zero");
  return pow(a, p_ - 2);
}

Fe PrimeField::from_int(std::int64_t v) const {
  const std::int64_t r = v % static_cast<std::int64_t>(p_);
  return static_cast<Fe>(r < 0 ? r + p_ : r);
}

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t k, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (k) {
    if (k & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    k >>= 1;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = gen();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

// ---------------------------------------------------------------- monomials

std::vector<Exponent> monomials(int k) {
  std::vector<Exponent> out;
  if (k < 0) return out;
  for (int a = k; a >= 0; --a)
    for (int b = k - a; b >= 0; --b)
      for (int c = k - a - b; c >= 0; --c) out.push_back({a, b, c, k - a - b - c});
  return out;
}

namespace {

// Lookup from an exponent of degree k to its position in monomials(k).
class MonomialIndex {
 public:
  explicit MonomialIndex(int k) : k_(k), mons_(monomials(k)) {
    const auto side = static_cast<std::size_t>(k + 1);
    table_.assign(side * side * side, -1);
    for (std::size_t i = 0; i < mons_.size(); ++i) table_[key(mons_[i])] = static_cast<int>(i);
  }
  const std::vector<Exponent>& mons() const { return mons_; }
  std::size_t operator()(const Exponent& e) const { return static_cast<std::size_t>(table_[key(e)]); }

 private:
  std::size_t key(const Exponent& e) const {
    const auto side = static_cast<std::size_t>(k_ + 1);
    return (static_cast<std::size_t>(e[1]) * side + static_cast<std::size_t>(e[2])) * side +
           static_cast<std::size_t>(e[3]);
  }
  int k_;
  std::vector<Exponent> mons_;
  std::vector<int> table_;
};

// Predecessor of a monomial of positive degree: divide by its first variable.
std::pair<int, Exponent> split_first(const Exponent& e) {
  for (int v = 0; v < 4; ++v)
    if (e[v] > 0) {
      Exponent r = e;
      --r[v];
      return {v, r};
    }
  throw Error(ErrorCode::Internal, "constant monomial has no predecessor");
}

// Images of all monomials of degree 0..k under X_v -> value[v], where values
// live in a ring with multiplication `mul`. images[j][i] is the image of
// monomials(j)[i].
template <class T, class Mul>
std::vector<std::vector<T>> monomial_images(int k, const std::array<T, 4>& value, const T& one,
                                            Mul&& mul) {
  std::vector<std::vector<T>> images;
  images.push_back({one});
  MonomialIndex prev(0);
  for (int j = 1; j <= k; ++j) {
    MonomialIndex cur(j);
    std::vector<T> level;
    level.reserve(cur.mons().size());
    for (const auto& e : cur.mons()) {
      const auto [v, r] = split_first(e);
      level.push_back(mul(value[static_cast<std::size_t>(v)], images[j - 1][prev(r)]));
    }
    images.push_back(std::move(level));
    prev = std::move(cur);
  }
  return images;
}

}  // namespace

// ---------------------------------------------------------------- univariate

namespace {

void trim(UniPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const UniPoly& f) { return static_cast<int>(f.size()) - 1; }

UniPoly poly_mod(const PrimeField& F, UniPoly a, const UniPoly& m) {
  trim(a);
  const int dm = degree(m);
  const Fe lead_inv = F.inv(m.back());
  while (degree(a) >= dm) {
    const int shift = degree(a) - dm;
    const Fe q = F.mul(a.back(), lead_inv);
    for (int i = 0; i <= dm; ++i) {
      auto& slot = a[static_cast<std::size_t>(i + shift)];
      slot = F.sub(slot, F.mul(q, m[static_cast<std::size_t>(i)]));
    }
    trim(a);
  }
  return a;
}

UniPoly poly_div(const PrimeField& F, UniPoly a, const UniPoly& m) {
  trim(a);
  const int dm = degree(m);
  if (degree(a) < dm) return {};
  UniPoly q(static_cast<std::size_t>(degree(a) - dm + 1), 0);
  const Fe lead_inv = F.inv(m.back());
  while (degree(a) >= dm) {
    const int shift = degree(a) - dm;
    const Fe c = F.mul(a.back(), lead_inv);
    q[static_cast<std::size_t>(shift)] = c;
    for (int i = 0; i <= dm; ++i) {
      auto& slot = a[static_cast<std::size_t>(i + shift)];
      slot = F.sub(slot, F.mul(c, m[static_cast<std::size_t>(i)]));
    }
    trim(a);
  }
  return q;
}

UniPoly poly_mulmod(const PrimeField& F, const UniPoly& a, const UniPoly& b, const UniPoly& m) {
  if (a.empty() || b.empty()) return {};
  UniPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return poly_mod(F, std::move(r), m);
}

UniPoly poly_powmod(const PrimeField& F, UniPoly base, std::uint64_t k, const UniPoly& m) {
  UniPoly r{1};
  base = poly_mod(F, std::move(base), m);
  while (k) {
    if (k & 1) r = poly_mulmod(F, r, base, m);
    base = poly_mulmod(F, base, base, m);
    k >>= 1;
  }
  return poly_mod(F, std::move(r), m);
}

UniPoly make_monic(const PrimeField& F, UniPoly f) {
  trim(f);
  if (f.empty()) return f;
  const Fe inv = F.inv(f.back());
  for (auto& c : f) c = F.mul(c, inv);
  return f;
}

UniPoly poly_gcd(const PrimeField& F, UniPoly a, UniPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UniPoly r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, std::move(a));
}

// Splits a monic squarefree product of distinct linear factors.
void equal_degree_split(const PrimeField& F, const UniPoly& g, std::mt19937_64& gen,
                        std::vector<Fe>& out) {
  const int dg = degree(g);
  if (dg <= 0) return;
  if (dg == 1) {
    out.push_back(F.neg(g[0]));
    return;
  }
  while (true) {
    const Fe delta = static_cast<Fe>(uniform_below(gen, F.p()));
    UniPoly h = poly_powmod(F, UniPoly{delta, 1}, (F.p() - 1) / 2, g);
    if (h.empty()) h.push_back(0);
    h[0] = F.sub(h[0], 1);
    UniPoly k = poly_gcd(F, g, h);
    if (degree(k) > 0 && degree(k) < dg) {
      equal_degree_split(F, k, gen, out);
      equal_degree_split(F, poly_div(F, g, k), gen, out);
      return;
    }
  }
}

}  // namespace

std::vector<Fe> roots(const PrimeField& F, UniPoly f, std::mt19937_64& gen) {
  f = make_monic(F, std::move(f));
  if (f.empty()) throw Error(ErrorCode::InvalidArgument, "zero polynomial has every root");
  if (degree(f) == 0) return {};
  UniPoly xp = poly_powmod(F, UniPoly{0, 1}, F.p(), f);
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = F.sub(xp[1], 1);
  const UniPoly g = poly_gcd(F, f, xp);
  std::vector<Fe> out;
  equal_degree_split(F, g, gen, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- surfaces

Fe SurfaceInstance::eval(const ProjPoint& x) const {
  const PrimeField F(p);
  Fe total = 0;
  for (std::size_t i = 0; i < mons.size(); ++i) {
    if (coeffs[i] == 0) continue;
    Fe term = coeffs[i];
    for (int v = 0; v < 4; ++v) term = F.mul(term, F.pow(x[v], static_cast<std::uint64_t>(mons[i][v])));
    total = F.add(total, term);
  }
  return total;
}

std::array<Fe, 4> SurfaceInstance::gradient(const ProjPoint& x) const {
  const PrimeField F(p);
  std::array<Fe, 4> g{0, 0, 0, 0};
  for (std::size_t i = 0; i < mons.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (int w = 0; w < 4; ++w) {
      if (mons[i][w] == 0) continue;
      Fe term = F.mul(coeffs[i], F.from_int(mons[i][w]));
      for (int v = 0; v < 4; ++v) {
        const int k = v == w ? mons[i][v] - 1 : mons[i][v];
        term = F.mul(term, F.pow(x[v], static_cast<std::uint64_t>(k)));
      }
      g[w] = F.add(g[w], term);
    }
  }
  return g;
}

std::string SurfaceInstance::to_string() const {
  std::ostringstream out;
  out << "surface of degree " << d << " over F_" << p << ":";
  bool first = true;
  for (std::size_t i = 0; i < mons.size(); ++i) {
    if (coeffs[i] == 0) continue;
    out << (first ? " " : " + ") << coeffs[i];
    for (int v = 0; v < 4; ++v)
      if (mons[i][v] > 0) out << "*X" << v << (mons[i][v] > 1 ? "^" + std::to_string(mons[i][v]) : "");
    first = false;
  }
  if (first) out << " 0";
  return out.str();
}

SurfaceInstance random_surface(int d, std::uint32_t p, std::mt19937_64& gen) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "surface degree must be >= 1");
  SurfaceInstance S;
  S.d = d;
  S.p = p;
  S.mons = monomials(d);
  S.coeffs.resize(S.mons.size());
  do {
    for (auto& c : S.coeffs) c = static_cast<Fe>(uniform_below(gen, p));
  } while (std::all_of(S.coeffs.begin(), S.coeffs.end(), [](Fe c) { return c == 0; }));
  return S;
}

SurfaceInstance surface_from_coefficients(
    int d, std::uint32_t p, const std::vector<std::pair<Exponent, std::int64_t>>& terms) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "surface degree must be >= 1");
  const PrimeField F(p);
  SurfaceInstance S;
  S.d = d;
  S.p = p;
  S.mons = monomials(d);
  S.coeffs.assign(S.mons.size(), 0);
  const MonomialIndex index(d);
  for (const auto& [e, c] : terms) {
    if (e[0] + e[1] + e[2] + e[3] != d || *std::min_element(e.begin(), e.end()) < 0)
      throw Error(ErrorCode::InvalidArgument, "term is not a degree-d monomial");
    auto& slot = S.coeffs[index(e)];
    slot = F.add(slot, F.from_int(c));
  }
  if (std::all_of(S.coeffs.begin(), S.coeffs.end(), [](Fe c) { return c == 0; }))
    throw Error(ErrorCode::InvalidArgument, "zero form");
  return S;
}

bool same_projective_point(const PrimeField& F, const ProjPoint& a, const ProjPoint& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (F.mul(a[i], b[j]) != F.mul(a[j], b[i])) return false;
  return true;
}

namespace {

bool is_zero_vector(const ProjPoint& v) {
  return std::all_of(v.begin(), v.end(), [](Fe c) { return c == 0; });
}

ProjPoint random_vector(const PrimeField& F, std::mt19937_64& gen) {
  ProjPoint v;
  do {
    for (auto& c : v) c = static_cast<Fe>(uniform_below(gen, F.p()));
  } while (is_zero_vector(v));
  return v;
}

Fe dot(const PrimeField& F, const std::array<Fe, 4>& a, const ProjPoint& b) {
  Fe s = 0;
  for (int i = 0; i < 4; ++i) s = F.add(s, F.mul(a[i], b[i]));
  return s;
}

std::size_t vector_rank(const PrimeField& F, const std::vector<ProjPoint>& vs) {
  std::vector<Row> rows;
  for (const auto& v : vs) rows.emplace_back(v.begin(), v.end());
  return rank(F, rows, 4);
}

}  // namespace

SampledPoint sample_surface_point(const SurfaceInstance& S, std::mt19937_64& gen, int max_retries,
                                  const std::vector<ProjPoint>& avoid) {
  if (max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 1");
  const PrimeField F(S.p);
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    const ProjPoint P0 = random_vector(F, gen);
    ProjPoint P1 = random_vector(F, gen);
    if (same_projective_point(F, P0, P1)) continue;
    // Restriction t -> f(P0 + t P1) as a univariate polynomial.
    std::array<UniPoly, 4> line;
    for (int v = 0; v < 4; ++v) line[v] = UniPoly{P0[v], P1[v]};
    auto mul = [&](const UniPoly& a, const UniPoly& b) {
      UniPoly r(a.size() + b.size() - 1, 0);
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
      return r;
    };
    const auto images = monomial_images<UniPoly>(S.d, line, UniPoly{1}, mul);
    UniPoly restricted(static_cast<std::size_t>(S.d + 1), 0);
    for (std::size_t i = 0; i < S.coeffs.size(); ++i) {
      if (S.coeffs[i] == 0) continue;
      const auto& img = images[static_cast<std::size_t>(S.d)][i];
      for (std::size_t k = 0; k < img.size(); ++k)
        restricted[k] = F.add(restricted[k], F.mul(S.coeffs[i], img[k]));
    }
    trim(restricted);
    if (restricted.empty()) continue;  // line lies on S
    auto rs = roots(F, restricted, gen);
    // Random order among the rational roots.
    for (std::size_t i = rs.size(); i > 1; --i)
      std::swap(rs[i - 1], rs[static_cast<std::size_t>(uniform_below(gen, i))]);
    for (Fe t : rs) {
      ProjPoint X;
      for (int v = 0; v < 4; ++v) X[v] = F.add(P0[v], F.mul(t, P1[v]));
      if (is_zero_vector(X)) continue;
      const auto g = S.gradient(X);
      if (std::all_of(g.begin(), g.end(), [](Fe c) { return c == 0; })) continue;
      if (std::any_of(avoid.begin(), avoid.end(),
                      [&](const ProjPoint& q) { return same_projective_point(F, q, X); }))
        continue;
      return {X, attempt};
    }
  }
  throw Error(ErrorCode::RetriesExhausted,
              "no smooth rational point found after " + std::to_string(max_retries) + " lines");
}

// ---------------------------------------------------------------- series

bool BivariateSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](Fe c) { return c == 0; });
}

BivariateSeries BivariateSeries::mul(const PrimeField& F, const BivariateSeries& o) const {
  const int order = std::min(order_, o.order_);
  BivariateSeries r(order);
  for (int n1 = 0; n1 <= order; ++n1)
    for (int j1 = 0; j1 <= n1; ++j1) {
      const Fe a = c_[index(n1 - j1, j1)];
      if (a == 0) continue;
      for (int n2 = 0; n1 + n2 <= order; ++n2)
        for (int j2 = 0; j2 <= n2; ++j2) {
          const Fe b = o.c_[index(n2 - j2, j2)];
          if (b == 0) continue;
          Fe& slot = r.c_[index(n1 + n2 - j1 - j2, j1 + j2)];
          slot = F.add(slot, F.mul(a, b));
        }
    }
  return r;
}

void BivariateSeries::add_scaled(const PrimeField& F, const BivariateSeries& o, Fe s) {
  const std::size_t n = std::min(c_.size(), o.c_.size());
  for (std::size_t i = 0; i < n; ++i) c_[i] = F.add(c_[i], F.mul(s, o.c_[i]));
}

// ---------------------------------------------------------------- charts

Chart make_chart(const SurfaceInstance& S, const ProjPoint& P,
                 const std::optional<ProjPoint>& direction) {
  const PrimeField F(S.p);
  if (S.eval(P) != 0) throw Error(ErrorCode::PreconditionViolated, "point is not on the surface");
  const auto g = S.gradient(P);
  int k = -1;
  for (int v = 0; v < 4 && k < 0; ++v)
    if (g[v] != 0) k = v;
  if (k < 0) throw Error(ErrorCode::SingularChart, "gradient vanishes at the point");

  Chart chart;
  chart.P = P;
  chart.N = ProjPoint{0, 0, 0, 0};
  chart.N[k] = 1;
  std::vector<ProjPoint> basis{P, chart.N};
  if (direction) {
    if (dot(F, g, *direction) != 0)
      throw Error(ErrorCode::PreconditionViolated, "direction is not tangent to the surface");
    basis.push_back(*direction);
    if (vector_rank(F, basis) != 3)
      throw Error(ErrorCode::PreconditionViolated, "direction is zero or proportional to the point");
    chart.A = *direction;
  }
  for (int v = 0; v < 4 && basis.size() < 4; ++v) {
    ProjPoint u{0, 0, 0, 0};
    u[v] = 1;
    basis.push_back(u);
    if (vector_rank(F, basis) == basis.size()) {
      if (basis.size() == 3)
        chart.A = u;
      else
        chart.B = u;
    } else {
      basis.pop_back();
    }
  }
  if (basis.size() != 4) throw Error(ErrorCode::Internal, "chart completion failed");
  return chart;
}

Fe LocalEquation::at(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i + j + k > d) return 0;
  return c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
}

LocalEquation local_equation(const SurfaceInstance& S, const Chart& chart) {
  const PrimeField F(S.p);
  const int d = S.d;
  // Each ambient coordinate X_v = P_v w + A_v x + B_v y + N_v z as a linear
  // form in (w, x, y, z); w is set to 1 at the end.
  using Hom = std::vector<Fe>;  // indexed by monomials of its degree
  std::vector<MonomialIndex> idx;
  for (int j = 0; j <= d; ++j) idx.emplace_back(j);
  std::array<Hom, 4> forms;
  for (int v = 0; v < 4; ++v)
    forms[v] = Hom{chart.P[v], chart.A[v], chart.B[v], chart.N[v]};  // monomials(1) order: w,x,y,z
  auto mul = [&](const Hom& linear, const Hom& h) {
    // h has degree j - 1, result degree j; infer j from size.
    int j = 0;
    while (idx[static_cast<std::size_t>(j)].mons().size() != h.size()) ++j;
    const auto& src = idx[static_cast<std::size_t>(j)];
    const auto& dst = idx[static_cast<std::size_t>(j + 1)];
    Hom r(dst.mons().size(), 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] == 0) continue;
      for (int v = 0; v < 4; ++v) {
        if (linear[static_cast<std::size_t>(v)] == 0) continue;
        Exponent e = src.mons()[i];
        ++e[v];
        Fe& slot = r[dst(e)];
        slot = F.add(slot, F.mul(linear[static_cast<std::size_t>(v)], h[i]));
      }
    }
    return r;
  };
  const auto images = monomial_images<Hom>(d, forms, Hom{1}, mul);
  Hom g(idx[static_cast<std::size_t>(d)].mons().size(), 0);
  for (std::size_t i = 0; i < S.coeffs.size(); ++i) {
    if (S.coeffs[i] == 0) continue;
    const auto& img = images[static_cast<std::size_t>(d)][i];
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = F.add(g[k], F.mul(S.coeffs[i], img[k]));
  }
  LocalEquation eq;
  eq.d = d;
  eq.c.assign(static_cast<std::size_t>(d + 1),
              std::vector<std::vector<Fe>>(static_cast<std::size_t>(d + 1),
                                           std::vector<Fe>(static_cast<std::size_t>(d + 1), 0)));
  const auto& mons = idx[static_cast<std::size_t>(d)].mons();
  for (std::size_t k = 0; k < mons.size(); ++k)
    eq.c[static_cast<std::size_t>(mons[k][1])][static_cast<std::size_t>(mons[k][2])]
        [static_cast<std::size_t>(mons[k][3])] = g[k];
  return eq;
}

BivariateSeries substitute(const PrimeField& F, const LocalEquation& eq, const BivariateSeries& phi) {
  const int order = phi.order();
  auto slice = [&](int k) {
    BivariateSeries s(order);
    for (int n = 0; n <= order; ++n)
      for (int j = 0; j <= n; ++j) s.ref(n - j, j) = eq.at(n - j, j, k);
    return s;
  };
  BivariateSeries acc = slice(eq.d);
  for (int k = eq.d - 1; k >= 0; --k) {
    acc = acc.mul(F, phi);
    acc.add_scaled(F, slice(k), 1);
  }
  return acc;
}

BivariateSeries jet_parametrize(const SurfaceInstance& S, const Chart& chart, int order) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
  const PrimeField F(S.p);
  const LocalEquation eq = local_equation(S, chart);
  if (eq.at(0, 0, 0) != 0) throw Error(ErrorCode::PreconditionViolated, "chart origin is off the surface");
  const Fe c = eq.at(0, 0, 1);
  if (c == 0) throw Error(ErrorCode::SingularChart, "chart normal is tangent");
  const Fe minus_inv = F.neg(F.inv(c));
  BivariateSeries phi(order);
  for (int it = 0; it < order; ++it) phi.add_scaled(F, substitute(F, eq, phi), minus_inv);
  return phi;
}

BivariateSeries jet_parametrize(const SurfaceInstance& S, const ProjPoint& P, int order) {
  return jet_parametrize(S, make_chart(S, P), order);
}

ProjPoint random_tangent_direction(const SurfaceInstance& S, const ProjPoint& P,
                                   std::mt19937_64& gen) {
  const PrimeField F(S.p);
  const auto g = S.gradient(P);
  int k = -1;
  for (int v = 0; v < 4 && k < 0; ++v)
    if (g[v] != 0) k = v;
  if (k < 0) throw Error(ErrorCode::SingularChart, "gradient vanishes at the point");
  const Fe ginv = F.inv(g[k]);
  while (true) {
    ProjPoint v = random_vector(F, gen);
    Fe s = 0;
    for (int i = 0; i < 4; ++i)
      if (i != k) s = F.add(s, F.mul(g[i], v[i]));
    v[k] = F.neg(F.mul(s, ginv));
    if (vector_rank(F, {P, v}) == 2) return v;
  }
}

// ---------------------------------------------------------------- conditions

ImposedScheme ImposedScheme::fat(const ProjPoint& p, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 1");
  ImposedScheme s;
  s.kind = Kind::Fat;
  s.m = m;
  s.point = p;
  return s;
}

ImposedScheme ImposedScheme::delta(const ProjPoint& p, int m, int n, const ProjPoint& direction) {
  if (m < 1 || n < 0 || n > m)
    throw Error(ErrorCode::InvalidArgument, "delta point needs m >= 1 and 0 <= n <= m");
  ImposedScheme s;
  s.kind = Kind::Delta;
  s.m = m;
  s.n = n;
  s.point = p;
  s.direction = direction;
  return s;
}

std::int64_t ImposedScheme::degree() const {
  return kind == Kind::Fat ? dims::fat_degree(m) : dims::delta_degree(m, n);
}

namespace {

// Taylor coefficients up to `order` of every degree-e monomial restricted to
// the germ of S at the chart origin.
std::vector<BivariateSeries> column_germs(const SurfaceInstance& S, int e, const Chart& chart,
                                          int order) {
  const PrimeField F(S.p);
  const BivariateSeries phi = jet_parametrize(S, chart, order);
  std::array<BivariateSeries, 4> coord;
  for (int v = 0; v < 4; ++v) {
    BivariateSeries s(order);
    s.add_scaled(F, phi, chart.N[v]);
    s.ref(0, 0) = F.add(s.at(0, 0), chart.P[v]);
    if (order >= 1) {
      s.ref(1, 0) = F.add(s.at(1, 0), chart.A[v]);
      s.ref(0, 1) = F.add(s.at(0, 1), chart.B[v]);
    }
    coord[v] = std::move(s);
  }
  BivariateSeries one(order);
  one.ref(0, 0) = 1;
  auto images = monomial_images<BivariateSeries>(
      e, coord, one, [&](const BivariateSeries& a, const BivariateSeries& b) { return a.mul(F, b); });
  return std::move(images[static_cast<std::size_t>(e)]);
}

}  // namespace

std::vector<Row> condition_rows(const SurfaceInstance& S, int e, const ImposedScheme& scheme) {
  if (scheme.m < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 1");
  if (scheme.kind == ImposedScheme::Kind::Delta && (scheme.n < 0 || scheme.n > scheme.m))
    throw Error(ErrorCode::InvalidArgument, "delta point needs 0 <= n <= m");
  if (e < 0) return {};
  const bool is_delta = scheme.kind == ImposedScheme::Kind::Delta && scheme.n > 0;
  if (scheme.kind == ImposedScheme::Kind::Delta && !scheme.direction)
    throw Error(ErrorCode::InvalidArgument, "delta point needs a direction");
  const Chart chart =
      make_chart(S, scheme.point,
                 scheme.kind == ImposedScheme::Kind::Delta ? scheme.direction : std::nullopt);
  const int order = is_delta ? scheme.m : scheme.m - 1;
  const auto germs = column_germs(S, e, chart, order);

  std::vector<Row> rows;
  auto push = [&](int i, int j) {
    Row r(germs.size());
    for (std::size_t c = 0; c < germs.size(); ++c) r[c] = germs[c].at(i, j);
    rows.push_back(std::move(r));
  };
  for (int n = 0; n < scheme.m; ++n)
    for (int j = 0; j <= n; ++j) push(n - j, j);
  if (is_delta)
    for (int j = 0; j < scheme.n; ++j) push(scheme.m - j, j);
  return rows;
}

// ---------------------------------------------------------------- elimination

EchelonBasis::EchelonBasis(const PrimeField& F, std::size_t cols)
    : F_(F), cols_(cols), pivot_row_(cols, -1) {}

bool EchelonBasis::insert(Row row) {
  if (row.size() != cols_) throw Error(ErrorCode::Internal, "row width mismatch");
  const std::uint64_t p = F_.p();
  for (std::size_t c = 0; c < cols_; ++c) {
    if (row[c] == 0) continue;
    const std::int64_t r = pivot_row_[c];
    if (r < 0) {
      const Fe inv = F_.inv(row[c]);
      for (std::size_t j = c; j < cols_; ++j) row[j] = F_.mul(row[j], inv);
      pivot_row_[c] = static_cast<std::int64_t>(rows_.size());
      pivots_.push_back(c);
      rows_.push_back(std::move(row));
      return true;
    }
    const Row& b = rows_[static_cast<std::size_t>(r)];
    const std::uint64_t f = p - row[c];
    row[c] = 0;
    for (std::size_t j = c + 1; j < cols_; ++j)
      if (b[j] != 0) row[j] = static_cast<Fe>((row[j] + f * b[j]) % p);
  }
  return false;
}

void EchelonBasis::rollback(std::size_t mark) {
  while (rows_.size() > mark) {
    pivot_row_[pivots_.back()] = -1;
    pivots_.pop_back();
    rows_.pop_back();
  }
}

std::size_t rank(const PrimeField& F, const std::vector<Row>& rows, std::size_t cols) {
  EchelonBasis basis(F, cols);
  for (const auto& r : rows) basis.insert(r);
  return basis.rank();
}

std::int64_t series_dim(const SurfaceInstance& S, int e, const std::vector<ImposedScheme>& schemes) {
  if (e < 0) return 0;
  const PrimeField F(S.p);
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t j = i + 1; j < schemes.size(); ++j)
      if (same_projective_point(F, schemes[i].point, schemes[j].point))
        throw Error(ErrorCode::InvalidArgument, "schemes must have distinct support points");
  const std::size_t cols = monomials(e).size();
  EchelonBasis basis(F, cols);
  for (const auto& s : schemes)
    for (auto& r : condition_rows(S, e, s)) basis.insert(std::move(r));
  const auto dim = static_cast<std::int64_t>(basis.nullity()) - dims::choose3(e - S.d + 3);
  if (dim < 0) throw Error(ErrorCode::Internal, "kernel smaller than the surface multiples");
  return dim;
}

// ---------------------------------------------------------------- verdicts

void OracleConfig::validate() const {
  if (p < 101 || !is_prime(p)) throw Error(ErrorCode::InvalidArgument, "prime must be >= 101 and prime");
  if (p2 < 101 || !is_prime(p2)) throw Error(ErrorCode::InvalidArgument, "second prime must be >= 101 and prime");
  if (p == p2) throw Error(ErrorCode::InvalidArgument, "the two primes must differ");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 1");
  if (column_budget < 1) throw Error(ErrorCode::InvalidArgument, "column budget must be >= 1");
}

const char* to_string(Certification c) {
  switch (c) {
    case Certification::NonspecialCertified: return "nonspecial-certified";
    case Certification::SpecialAtInstances: return "special-at-instances";
    case Certification::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::int64_t instance_dim(const SurfaceSeriesSpec& spec, std::uint32_t p, std::uint64_t seed,
                          int max_retries) {
  if (spec.e < 0) return 0;
  std::mt19937_64 gen(seed);
  const SurfaceInstance S = random_surface(spec.d, p, gen);
  std::vector<ProjPoint> used;
  std::vector<ImposedScheme> schemes;
  for (int m : spec.mults) {
    const auto sp = sample_surface_point(S, gen, max_retries, used);
    used.push_back(sp.point);
    schemes.push_back(ImposedScheme::fat(sp.point, m));
  }
  return series_dim(S, spec.e, schemes);
}

namespace {

void check_budget(int e, const OracleConfig& cfg) {
  const auto cols = static_cast<std::int64_t>(monomials(e).size());
  if (cols > cfg.column_budget)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(cols) + " columns exceed the budget of " +
                                               std::to_string(cfg.column_budget));
}

}  // namespace

OracleVerdict oracle_verdict(const SurfaceSeriesSpec& input, const OracleConfig& cfg) {
  cfg.validate();
  const auto spec = SurfaceSeriesSpec::make(input.d, input.e, input.mults);
  check_budget(spec.e, cfg);
  OracleVerdict v;
  v.spec = spec;
  v.edim = dims::edim(spec);
  v.columns = static_cast<std::int64_t>(monomials(spec.e).size());
  v.rows = dims::scheme_degree(spec.mults);

  const std::array<std::uint32_t, 2> primes{cfg.p, cfg.p2};
  const auto n = static_cast<std::size_t>(2 * cfg.trials);
  v.trials = parallel_map<TrialResult>(n, cfg.threads, [&](std::size_t i) {
    const std::uint32_t p = primes[i / static_cast<std::size_t>(cfg.trials)];
    const std::uint64_t seed = derive_seed(cfg.seed, i % static_cast<std::size_t>(cfg.trials), p);
    return TrialResult{p, seed, instance_dim(spec, p, seed, cfg.max_retries)};
  });

  v.observed_dim = v.trials.front().dim;
  bool every_prime_reaches_edim = true;
  bool all_exceed = true;
  for (std::uint32_t p : primes) {
    std::int64_t best = -1;
    for (const auto& t : v.trials)
      if (t.p == p) best = best < 0 ? t.dim : std::min(best, t.dim);
    every_prime_reaches_edim = every_prime_reaches_edim && best == v.edim;
  }
  for (const auto& t : v.trials) {
    v.observed_dim = std::min(v.observed_dim, t.dim);
    all_exceed = all_exceed && t.dim > v.edim;
  }
  if (every_prime_reaches_edim)
    v.certified = Certification::NonspecialCertified;
  else if (all_exceed)
    v.certified = Certification::SpecialAtInstances;
  return v;
}

DeltaCount delta_condition_count(int d, int e, int m, int n, const OracleConfig& cfg) {
  cfg.validate();
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "surface degree must be >= 1");
  if (m < 1 || n < 0 || n > m) throw Error(ErrorCode::InvalidArgument, "need m >= 1 and 0 <= n <= m");
  check_budget(e, cfg);
  DeltaCount out{d, e, m, n};
  out.h0 = dims::h0_surface(d, e);

  struct Drops {
    std::int64_t delta = 0, fat_m = 0, fat_m1 = 0;
  };
  const std::array<std::uint32_t, 2> primes{cfg.p, cfg.p2};
  const auto count = static_cast<std::size_t>(2 * cfg.trials);
  const auto drops = parallel_map<Drops>(count, cfg.threads, [&](std::size_t i) {
    const std::uint32_t p = primes[i / static_cast<std::size_t>(cfg.trials)];
    std::mt19937_64 gen(derive_seed(cfg.seed, i % static_cast<std::size_t>(cfg.trials), p));
    const SurfaceInstance S = random_surface(d, p, gen);
    const ProjPoint P = sample_surface_point(S, gen, cfg.max_retries).point;
    const ProjPoint dir = random_tangent_direction(S, P, gen);
    Drops r;
    r.delta = out.h0 - series_dim(S, e, {ImposedScheme::delta(P, m, n, dir)});
    r.fat_m = out.h0 - series_dim(S, e, {ImposedScheme::fat(P, m)});
    r.fat_m1 = out.h0 - series_dim(S, e, {ImposedScheme::fat(P, m + 1)});
    return r;
  });
  for (const auto& r : drops) {
    out.drop = std::max(out.drop, r.delta);
    out.fat_m_drop = std::max(out.fat_m_drop, r.fat_m);
    out.fat_m1_drop = std::max(out.fat_m1_drop, r.fat_m1);
  }
  const std::int64_t fm = dims::fat_degree(m);
  out.hypothesis_met = out.fat_m_drop == std::min(fm, out.h0);
  out.dichotomy_holds = out.drop == std::min(dims::delta_degree(m, n), out.h0) ||
                        out.drop == out.fat_m1_drop;
  out.formula_holds = out.drop == fm + std::min<std::int64_t>(n, out.fat_m1_drop - fm);
  return out;
}

// ---------------------------------------------------------------- sweeper

OracleSweeper::OracleSweeper(int d, int e, std::uint32_t p, std::uint64_t seed, int max_mult,
                             int max_points, int max_retries)
    : d_(d), e_(e), max_mult_(max_mult), max_points_(max_points), F_(p),
      cols_(monomials(e).size()), floor_(dims::choose3(e - d + 3)) {
  if (max_mult < 1 || max_points < 0)
    throw Error(ErrorCode::InvalidArgument, "sweeper needs max_mult >= 1 and max_points >= 0");
  if (e < 0) return;
  std::mt19937_64 gen(seed);
  const SurfaceInstance S = random_surface(d, p, gen);
  std::vector<ProjPoint> used;
  for (int i = 0; i < max_points; ++i) {
    const auto sp = sample_surface_point(S, gen, max_retries, used);
    used.push_back(sp.point);
    pool_rows_.push_back(condition_rows(S, e, ImposedScheme::fat(sp.point, max_mult)));
  }
}

std::int64_t OracleSweeper::dim(const Multiplicities& mults) const {
  if (static_cast<int>(mults.size()) > max_points_)
    throw Error(ErrorCode::BudgetExceeded, "more points than the sweeper pool holds");
  if (e_ < 0) return 0;
  EchelonBasis basis(F_, cols_);
  for (std::size_t k = 0; k < mults.size(); ++k) {
    if (mults[k] < 1 || mults[k] > max_mult_)
      throw Error(ErrorCode::InvalidArgument, "multiplicity outside the sweeper range");
    const auto rows = static_cast<std::size_t>(dims::fat_degree(mults[k]));
    for (std::size_t r = 0; r < rows; ++r) basis.insert(pool_rows_[k][r]);
  }
  return static_cast<std::int64_t>(basis.nullity()) - floor_;
}

void OracleSweeper::for_each(const std::vector<int>& alphabet, std::int64_t max_degree,
                             const Visitor& visit, const std::vector<int>& caps) const {
  if (!caps.empty() && caps.size() != alphabet.size())
    throw Error(ErrorCode::InvalidArgument, "caps must match the alphabet");
  for (int m : alphabet)
    if (m < 1 || m > max_mult_) throw Error(ErrorCode::InvalidArgument, "alphabet outside the sweeper range");
  if (!std::is_sorted(alphabet.rbegin(), alphabet.rend()))
    throw Error(ErrorCode::InvalidArgument, "alphabet must be descending");
  Multiplicities current;
  EchelonBasis basis(F_, cols_);
  dfs(alphabet, caps, 0, max_degree, current, basis, visit);
}

void OracleSweeper::dfs(const std::vector<int>& alphabet, const std::vector<int>& caps,
                        std::size_t first, std::int64_t budget,
                        Multiplicities& current, EchelonBasis& basis, const Visitor& visit) const {
  const std::int64_t here =
      e_ < 0 ? 0 : static_cast<std::int64_t>(basis.nullity()) - floor_;
  visit(current, here);
  if (static_cast<int>(current.size()) >= max_points_) return;
  const std::size_t k = current.size();
  for (std::size_t a = first; a < alphabet.size(); ++a) {
    const int m = alphabet[a];
    const std::int64_t deg = dims::fat_degree(m);
    if (deg > budget) continue;
    if (!caps.empty() && caps[a] >= 0 &&
        std::count(current.begin(), current.end(), m) >= caps[a])
      continue;
    const std::size_t mark = basis.checkpoint();
    // Once the series is empty further points cannot change anything.
    if (here > 0 && e_ >= 0)
      for (std::size_t r = 0; r < static_cast<std::size_t>(deg); ++r) basis.insert(pool_rows_[k][r]);
    current.push_back(m);
    dfs(alphabet, caps, a, budget - deg, current, basis, visit);
    current.pop_back();
    basis.rollback(mark);
  }
}

}  // namespace fatpoints::oracle
