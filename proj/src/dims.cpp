#include "fatpoints/dims.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fatpoints::dims {

std::int64_t choose3(std::int64_t n) {
  if (n < 3) return 0;
  return n * (n - 1) * (n - 2) / 6;
}

std::int64_t h0_surface(int d, int e) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "surface degree must be >= 1");
  if (e < 0) return 0;
  return choose3(e + 3) - choose3(e - d + 3);
}

std::int64_t h0_curve(CICurve c, int k) {
  if (c.s < 1 || c.t < 1)
    throw Error(ErrorCode::InvalidArgument, "curve degrees must be >= 1");
  if (k < 0) return 0;
  return choose3(k + 3) - choose3(k - c.s + 3) - choose3(k - c.t + 3) +
         choose3(k - c.s - c.t + 3);
}

std::int64_t fat_degree(int m) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 0");
  return static_cast<std::int64_t>(m) * (m + 1) / 2;
}

std::int64_t delta_degree(int m, int n) {
  if (n < 0 || n > m)
    throw Error(ErrorCode::InvalidArgument, "delta_{m,n} requires 0 <= n <= m");
  return fat_degree(m) + n;
}

std::int64_t scheme_degree(const Multiplicities& mults) {
  std::int64_t total = 0;
  for (int m : mults) total += fat_degree(m);
  return total;
}

std::int64_t vdim(const SurfaceSeriesSpec& spec) {
  return h0_surface(spec.d, spec.e) - scheme_degree(spec.mults);
}

std::int64_t edim(const SurfaceSeriesSpec& spec) { return std::max<std::int64_t>(vdim(spec), 0); }

double v_projective(int d, const RDivisorClass& cls) {
  double total = static_cast<double>(h0_surface(d, cls.a) - 1);
  for (double b : cls.b) total -= b * (b + 1.0) / 2.0;
  return total;
}

std::int64_t v_projective_exact(int d, int a, const std::vector<int>& b) {
  std::int64_t total = h0_surface(d, a) - 1;
  for (int bi : b) total -= fat_degree(bi);
  return total;
}

std::int64_t f_value(int d, int a) { return h0_surface(d, a) - 1; }

double g_value(int d, int a) {
  const double f = static_cast<double>(f_value(d, a));
  return (-1.0 + std::sqrt(1.0 + 8.0 * f)) / 2.0;
}

SuperadditivityScan scan_superadditivity(int d, int bound) {
  if (bound < 2) throw Error(ErrorCode::InvalidArgument, "scan bound must be >= 2");
  SuperadditivityScan scan;
  scan.d = d;
  scan.bound = bound;
  scan.warning = d < 5;
  std::vector<double> g(static_cast<std::size_t>(bound) + 1);
  for (int a = 0; a <= bound; ++a) g[a] = g_value(d, a);
  for (int a = 1; a <= bound; ++a)
    for (int ap = 1; ap <= a && a + ap <= bound; ++ap)
      if (!(g[a + ap] - g[a] - g[ap] > kGTolerance)) scan.failures.emplace_back(a, ap);
  return scan;
}

std::vector<int> scan_discrete_convexity(int d, int bound) {
  if (bound < 3) throw Error(ErrorCode::InvalidArgument, "scan bound must be >= 3");
  std::vector<int> failures;
  for (int k = 2; k <= bound; ++k) {
    const double lhs = g_value(d, k + 1) - g_value(d, k);
    const double rhs = g_value(d, k) - g_value(d, k - 1);
    if (!(lhs - rhs > kGTolerance)) failures.push_back(k);
  }
  return failures;
}

namespace {

// Classes with v = 0 for every d >= 5 listed in the proof of the two-curve
// proposition: degree 2 and degree 1 with their multiplicity patterns.
const std::vector<std::vector<int>>& quadric_classes() {
  static const std::vector<std::vector<int>> classes = {
      {3, 2}, {2, 2, 2}, {3, 1, 1, 1}, {2, 2, 1, 1, 1},
      {2, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 1}};
  return classes;
}

const std::vector<std::vector<int>>& linear_classes() {
  static const std::vector<std::vector<int>> classes = {{2}, {1, 1, 1}};
  return classes;
}

// Calls fn(b_vector) for every injective placement of `pattern` into `points` slots.
template <class Fn>
void for_each_placement(const std::vector<int>& pattern, int points, Fn&& fn) {
  std::vector<int> b(static_cast<std::size_t>(points), 0);
  std::vector<char> used(static_cast<std::size_t>(points), 0);
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == pattern.size()) {
      fn(b);
      return;
    }
    for (int p = 0; p < points; ++p) {
      if (used[p]) continue;
      used[p] = 1;
      b[p] = pattern[idx];
      self(self, idx + 1);
      b[p] = 0;
      used[p] = 0;
    }
  };
  rec(rec, 0);
}

std::vector<int> canonical_placement(const std::vector<int>& pattern, int points) {
  std::vector<int> b(static_cast<std::size_t>(points), 0);
  std::copy(pattern.begin(), pattern.end(), b.begin());
  return b;
}

}  // namespace

SmallPairsReport check_small_pairs(int d, int points) {
  if (d < 5) throw Error(ErrorCode::InvalidArgument, "small-pair check requires d >= 5");
  if (points < 9) throw Error(ErrorCode::InvalidArgument, "need at least 9 points");
  SmallPairsReport report;
  report.d = d;
  report.points = points;
  report.min_v_21 = std::numeric_limits<std::int64_t>::max();

  auto sum_v = [&](int a, const std::vector<int>& b, const std::vector<int>& bp) {
    std::vector<int> total(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) total[i] = b[i] + bp[i];
    return v_projective_exact(d, a, total);
  };

  for (const auto& dq : quadric_classes()) {
    const auto b = canonical_placement(dq, points);
    if (v_projective_exact(d, 2, b) != 0)
      throw Error(ErrorCode::Internal, "listed quadric class does not have v = 0");
    for (const auto& dl : linear_classes()) {
      for_each_placement(dl, points, [&](const std::vector<int>& bp) {
        ++report.checked;
        const std::int64_t v = sum_v(3, b, bp);
        report.min_v_21 = std::min(report.min_v_21, v);
        if (v < 1) report.violations.push_back({2, 1, b, bp, v, false, false});
      });
    }
  }

  for (const auto& dl : linear_classes()) {
    const auto b = canonical_placement(dl, points);
    for (const auto& dl2 : linear_classes()) {
      for_each_placement(dl2, points, [&](const std::vector<int>& bp) {
        ++report.checked;
        const bool same = b == bp;
        const std::int64_t v = sum_v(2, b, bp);
        const bool ok = same ? v <= 0 : v > 0;
        if (!ok) report.violations.push_back({1, 1, b, bp, v, same, false});
      });
    }
  }
  return report;
}

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// A random point of {b >= 0 : sum b_i(b_i+1)/2 = f}: a random sparse direction
// rescaled onto the constraint surface.
std::vector<double> sample_constraint_point(std::mt19937_64& gen, int points, double f) {
  std::vector<double> u(static_cast<std::size_t>(points), 0.0);
  // Small supports are sampled often so that the concentrated configurations
  // are actually visited.
  const int support = 1 + static_cast<int>(std::floor(std::pow(uniform01(gen), 2.0) * points));
  std::vector<int> idx(static_cast<std::size_t>(points));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < support; ++i) {
    const int j = i + static_cast<int>(gen() % static_cast<std::uint64_t>(points - i));
    std::swap(idx[i], idx[j]);
    u[idx[i]] = -std::log(1.0 - uniform01(gen)) + 1e-12;
  }
  double s1 = 0.0;
  double s2 = 0.0;
  for (double x : u) {
    s1 += x;
    s2 += x * x;
  }
  // (lambda^2/2) s2 + (lambda/2) s1 = f
  const double lambda = (-s1 / 2.0 + std::sqrt(s1 * s1 / 4.0 + 2.0 * s2 * f)) / s2;
  for (double& x : u) x *= lambda;
  return u;
}

}  // namespace

MinConfigReport randomized_min_config(int d, int a, int a_prime, int points, int samples,
                                      std::uint64_t seed) {
  if (a < 1 || a_prime < 1) throw Error(ErrorCode::InvalidArgument, "degrees must be >= 1");
  if (points < 1 || samples < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one point and one sample");
  const double fa = static_cast<double>(f_value(d, a));
  const double fap = static_cast<double>(f_value(d, a_prime));
  const double fsum = static_cast<double>(f_value(d, a + a_prime));
  const double ga = g_value(d, a);
  const double gap = g_value(d, a_prime);

  MinConfigReport report;
  report.samples = samples;
  report.single_point_value = fsum - (ga + gap) * (ga + gap + 1.0) / 2.0;
  report.min_value = std::numeric_limits<double>::infinity();

  std::mt19937_64 gen(seed);
  for (int s = 0; s < samples; ++s) {
    auto b = sample_constraint_point(gen, points, fa);
    auto bp = sample_constraint_point(gen, points, fap);
    double v = fsum;
    for (int i = 0; i < points; ++i) v -= (b[i] + bp[i]) * (b[i] + bp[i] + 1.0) / 2.0;
    if (v < report.min_value) {
      report.min_value = v;
      report.argmin_b = std::move(b);
      report.argmin_b_prime = std::move(bp);
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    double dist2 = 0.0;
    for (int j = 0; j < points; ++j) {
      const double tb = (j == i) ? ga : 0.0;
      const double tbp = (j == i) ? gap : 0.0;
      dist2 += (report.argmin_b[j] - tb) * (report.argmin_b[j] - tb) +
               (report.argmin_b_prime[j] - tbp) * (report.argmin_b_prime[j] - tbp);
    }
    best = std::min(best, std::sqrt(dist2));
  }
  report.distance_from_single_point = best;
  report.ok = report.min_value >= report.single_point_value - kGTolerance;
  return report;
}

}  // namespace fatpoints::dims
