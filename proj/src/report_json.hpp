#pragma once

#include <json.hpp>

#include "fatpoints/degen.hpp"
#include "fatpoints/lowdeg.hpp"
#include "fatpoints/oracle.hpp"
#include "fatpoints/planar.hpp"

namespace fatpoints::report {

using nlohmann::json;

json to_json(const SurfaceSeriesSpec& s);
json to_json(const PlanarSeriesSpec& s);
json to_json(const planar::ReductionTrace& t);
json to_json(const planar::PlanarVerdict& v);
json to_json(const lowdeg::SpecialSeriesTable& t);
json to_json(const oracle::OracleVerdict& v);
json to_json(const oracle::DeltaCount& c);
json to_json(const degen::OnCurveScheme& s);
json to_json(const degen::LedgerTrace& t);
json to_json(const degen::DegenPlan& p);
json to_json(const degen::PlanHypotheses& h);
json to_json(const degen::CaseTrace& t);

/// "4^2,3" or [4,4,3]; absent means empty.
Multiplicities mults_from(const json& v);

}  // namespace fatpoints::report
