#include "fatpoints/series.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace fatpoints {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::PreconditionViolated: return "precondition_violated";
    case ErrorCode::RetriesExhausted: return "retries_exhausted";
    case ErrorCode::BudgetExceeded: return "budget_exceeded";
    case ErrorCode::SingularChart: return "singular_chart";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

void canonicalize(Multiplicities& mults) {
  std::sort(mults.begin(), mults.end(), std::greater<>());
}

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidArgument,
                "bad multiplicity list '" + std::string(whole) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Multiplicities parse_multiplicities(std::string_view text) {
  Multiplicities out;
  const std::string_view whole = text;
  text = trim(text);
  if (text.empty() || text == "-") return out;
  while (true) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    int count = 1;
    if (const auto caret = item.find('^'); caret != std::string_view::npos) {
      count = parse_int(trim(item.substr(caret + 1)), whole);
      item = trim(item.substr(0, caret));
    }
    const int m = parse_int(item, whole);
    if (m < 1 || count < 0)
      throw Error(ErrorCode::InvalidArgument,
                  "multiplicities must be >= 1 in '" + std::string(whole) + "'");
    out.insert(out.end(), static_cast<std::size_t>(count), m);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  canonicalize(out);
  return out;
}

std::string format_multiplicities(const Multiplicities& mults) {
  if (mults.empty()) return "-";
  std::string out;
  std::size_t i = 0;
  while (i < mults.size()) {
    std::size_t j = i;
    while (j < mults.size() && mults[j] == mults[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(mults[i]);
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

SurfaceSeriesSpec SurfaceSeriesSpec::make(int d, int e, Multiplicities mults) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "surface degree must be >= 1");
  for (int m : mults)
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "multiplicities must be >= 1");
  canonicalize(mults);
  return {d, e, std::move(mults)};
}

std::string SurfaceSeriesSpec::to_string() const {
  return "L_" + std::to_string(e) + "^" + std::to_string(d) + "(" +
         (mults.empty() ? std::string() : format_multiplicities(mults)) + ")";
}

PlanarSeriesSpec PlanarSeriesSpec::make(int e, Multiplicities mults) {
  for (int m : mults)
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "multiplicities must be >= 1");
  canonicalize(mults);
  return {e, std::move(mults)};
}

std::string PlanarSeriesSpec::to_string() const { return as_surface().to_string(); }

}  // namespace fatpoints
