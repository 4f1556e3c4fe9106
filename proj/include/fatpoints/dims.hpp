#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fatpoints/series.hpp"

namespace fatpoints::dims {

/// n(n-1)(n-2)/6 for n >= 3 and 0 otherwise. The zero branch is what makes
/// negative twists have no sections, and it is used by every count below.
std::int64_t choose3(std::int64_t n);

/// h^0(O_S(e)) for a surface S of degree d in P^3.
std::int64_t h0_surface(int d, int e);

/// Complete intersection of surfaces of degrees s and t.
struct CICurve {
  int s = 1;
  int t = 1;
};

/// h^0(O_C(k)) by inclusion-exclusion over the Koszul resolution.
std::int64_t h0_curve(CICurve c, int k);

std::int64_t fat_degree(int m);
/// Length of the delta_{m,n} scheme; n <= m.
std::int64_t delta_degree(int m, int n);
std::int64_t scheme_degree(const Multiplicities& mults);

/// Vector-space virtual dimension h^0(O_S(e)) - deg(Gamma).
std::int64_t vdim(const SurfaceSeriesSpec& spec);
std::int64_t edim(const SurfaceSeriesSpec& spec);

/// Real divisor class aH - sum b_i E_i on the blowup of S.
struct RDivisorClass {
  int a = 1;
  std::vector<double> b;
};

/// Projective-dimension count v(aH - sum b_i E_i) = h^0(O_S(a)) - 1 - sum b_i(b_i+1)/2.
double v_projective(int d, const RDivisorClass& cls);
/// Same count for integral b; exact.
std::int64_t v_projective_exact(int d, int a, const std::vector<int>& b);

/// f(a) = h^0(O_S(a)) - 1.
std::int64_t f_value(int d, int a);
/// The nonnegative root g of g(g+1)/2 = f(a).
double g_value(int d, int a);

inline constexpr double kGTolerance = 1e-6;

struct SuperadditivityScan {
  int d = 0;
  int bound = 0;
  /// Pairs (a, a') with a >= a' >= 1 where g(a) + g(a') < g(a + a') fails.
  std::vector<std::pair<int, int>> failures;
  /// Set when d < 5, where the inequality is not claimed.
  bool warning = false;
};

SuperadditivityScan scan_superadditivity(int d, int bound);

/// Every k in [2, bound] where g(k+1) - g(k) > g(k) - g(k-1) fails.
std::vector<int> scan_discrete_convexity(int d, int bound);

struct SmallPairCase {
  int a = 0;
  int a_prime = 0;
  std::vector<int> b;        // D, indexed by point
  std::vector<int> b_prime;  // D'
  std::int64_t v_sum = 0;    // v(D + D')
  bool same_divisor = false;
  bool ok = true;
};

struct SmallPairsReport {
  int d = 0;
  int points = 0;
  std::int64_t checked = 0;
  std::int64_t min_v_21 = 0;  // smallest v(D+D') over the (2,1) table
  std::vector<SmallPairCase> violations;
};

/// Exhausts the (a, a') = (2, 1) and (1, 1) configurations with v(D) =
/// v(D') = 0 over every placement of the multiplicities on `points` points.
SmallPairsReport check_small_pairs(int d, int points);

struct MinConfigReport {
  double min_value = 0.0;
  double single_point_value = 0.0;
  std::vector<double> argmin_b;
  std::vector<double> argmin_b_prime;
  /// Euclidean distance of the arg-min pair from the nearest single-point pair.
  double distance_from_single_point = 0.0;
  int samples = 0;
  bool ok = true;
};

/// Samples pairs (D, D') on {v = 0} and compares min v(D + D') against the
/// configuration where both classes are concentrated on one point.
MinConfigReport randomized_min_config(int d, int a, int a_prime, int points, int samples,
                                      std::uint64_t seed);

}  // namespace fatpoints::dims
