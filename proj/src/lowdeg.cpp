#include "fatpoints/lowdeg.hpp"

#include <algorithm>
#include <sstream>

#include "fatpoints/dims.hpp"
#include "parallel.hpp"

namespace fatpoints::lowdeg {

namespace {

PlanarSeriesSpec with_extra_points(int e, int copies, int mult, const Multiplicities& rest) {
  Multiplicities m(static_cast<std::size_t>(copies), mult);
  m.insert(m.end(), rest.begin(), rest.end());
  std::erase_if(m, [](int x) { return x <= 0; });
  canonicalize(m);
  return {e, std::move(m)};
}

}  // namespace

PlanarSeriesSpec quadric_to_planar(const SurfaceSeriesSpec& spec) {
  if (spec.d != 2) throw Error(ErrorCode::InvalidArgument, "quadric reduction needs d = 2");
  if (spec.e < 0) throw Error(ErrorCode::PreconditionViolated, "quadric reduction needs e >= 0");
  return with_extra_points(2 * spec.e, 2, spec.e, spec.mults);
}

PlanarSeriesSpec cubic_to_planar(const SurfaceSeriesSpec& spec) {
  if (spec.d != 3) throw Error(ErrorCode::InvalidArgument, "cubic reduction needs d = 3");
  if (spec.e < 0) throw Error(ErrorCode::PreconditionViolated, "cubic reduction needs e >= 0");
  return with_extra_points(3 * spec.e, 6, spec.e, spec.mults);
}

planar::PlanarVerdict classify_lowdeg(const SurfaceSeriesSpec& spec) {
  if (spec.d < 1 || spec.d > 3)
    throw Error(ErrorCode::InvalidArgument,
                "low-degree classifier handles d in {1,2,3}; use the degeneration verifier");
  if (spec.e < 0) {
    // Negative degree: no sections; no reduction is needed.
    planar::PlanarVerdict v;
    v.trace.initial = {spec.e, spec.mults};
    v.trace.terminal = {spec.e, {}};
    v.trace.max_multiplicity = spec.mults.empty() ? 0 : spec.mults.front();
    return v;
  }
  PlanarSeriesSpec image;
  switch (spec.d) {
    case 1: image = {spec.e, spec.mults}; break;
    case 2: image = quadric_to_planar(spec); break;
    default: image = cubic_to_planar(spec); break;
  }
  auto verdict = planar::classify_planar(image);
  if (verdict.edim != dims::edim(spec))
    throw Error(ErrorCode::Internal, "reduction changed the expected dimension of " +
                                         spec.to_string());
  return verdict;
}

SpecialSeriesTable enumerate_special(int d, int e_max, int slack, int threads) {
  if (d != 2 && d != 3) throw Error(ErrorCode::InvalidArgument, "enumeration needs d in {2,3}");
  if (slack < 0) throw Error(ErrorCode::InvalidArgument, "slack must be >= 0");
  SpecialSeriesTable table;
  table.d = d;
  table.e_max = e_max;
  table.slack = slack;

  std::vector<SurfaceSeriesSpec> candidates;
  for (int e = 1; e <= e_max; ++e) {
    const std::int64_t cap = dims::h0_surface(d, e) + slack;
    for (int a = 0; 10 * a <= cap; ++a)
      for (int b = 0; 10 * a + 6 * b <= cap; ++b)
        for (int c = 0; 10 * a + 6 * b + 3 * c <= cap; ++c) {
          Multiplicities m(static_cast<std::size_t>(a), 4);
          m.insert(m.end(), static_cast<std::size_t>(b), 3);
          m.insert(m.end(), static_cast<std::size_t>(c), 2);
          candidates.push_back({d, e, std::move(m)});
        }
  }
  table.scanned = static_cast<long long>(candidates.size());

  struct Outcome {
    bool special = false;
    bool conditional = false;
  };
  const auto outcomes = parallel_map<Outcome>(
      candidates.size(), threads, [&](std::size_t i) {
        const auto v = classify_lowdeg(candidates[i]);
        return Outcome{v.special, v.confidence != planar::Confidence::Unconditional};
      });

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!outcomes[i].special) continue;
    (outcomes[i].conditional ? table.conditional_entries : table.entries)
        .push_back(candidates[i]);
  }
  auto order = [](const SurfaceSeriesSpec& x, const SurfaceSeriesSpec& y) {
    if (x.e != y.e) return x.e < y.e;
    return std::lexicographical_compare(x.mults.begin(), x.mults.end(), y.mults.begin(),
                                        y.mults.end());
  };
  std::sort(table.entries.begin(), table.entries.end(), order);
  std::sort(table.conditional_entries.begin(), table.conditional_entries.end(), order);
  return table;
}

std::string render_table(const SpecialSeriesTable& table) {
  std::ostringstream out;
  out << "special series L_e^" << table.d << "(4^a,3^b,2^c), 1 <= e <= " << table.e_max
      << ", slack " << table.slack << "\n";
  int current = -1;
  for (const auto& s : table.entries) {
    if (s.e != current) {
      if (current >= 0) out << "\n";
      current = s.e;
      out << "  e=" << s.e << ":";
    }
    out << "  " << s.to_string();
  }
  if (current >= 0) out << "\n";
  out << "total: " << table.entries.size() << " of " << table.scanned << " scanned\n";
  return out.str();
}

}  // namespace fatpoints::lowdeg
