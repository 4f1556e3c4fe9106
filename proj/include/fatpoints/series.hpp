#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fatpoints {

enum class ErrorCode {
  InvalidArgument,
  PreconditionViolated,
  RetriesExhausted,
  BudgetExceeded,
  SingularChart,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Multiplicities of a fat-point scheme; canonical form is sorted descending.
using Multiplicities = std::vector<int>;

void canonicalize(Multiplicities& mults);

/// Parses exponential notation such as "4^2,3,2^3". The empty string and
/// "-" both denote the empty multiset.
Multiplicities parse_multiplicities(std::string_view text);

/// Inverse of parse_multiplicities on canonical input.
std::string format_multiplicities(const Multiplicities& mults);

/// The series L_e^d(m_1, ..., m_r) of sections of O_S(e) on a general
/// surface S of degree d having multiplicity m_i at r general points.
struct SurfaceSeriesSpec {
  int d = 1;
  int e = 0;
  Multiplicities mults;

  /// Validates (d >= 1, every multiplicity >= 1) and sorts.
  static SurfaceSeriesSpec make(int d, int e, Multiplicities mults);

  std::string to_string() const;
  friend bool operator==(const SurfaceSeriesSpec&, const SurfaceSeriesSpec&) = default;
  friend auto operator<=>(const SurfaceSeriesSpec&, const SurfaceSeriesSpec&) = default;
};

struct PlanarSeriesSpec {
  int e = 0;
  Multiplicities mults;

  static PlanarSeriesSpec make(int e, Multiplicities mults);

  SurfaceSeriesSpec as_surface() const { return {1, e, mults}; }
  std::string to_string() const;
  friend bool operator==(const PlanarSeriesSpec&, const PlanarSeriesSpec&) = default;
};

}  // namespace fatpoints
