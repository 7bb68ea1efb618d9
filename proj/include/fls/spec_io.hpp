#pragma once

#include <string>

#include "json.hpp"

#include "fls/compose.hpp"
#include "fls/converge.hpp"
#include "fls/inverse.hpp"

namespace fls {

using json = nlohmann::ordered_json;

/// Parses a series-spec JSON document into a Series. Kinds: "finite",
/// "constant", "arithmetic", "geometric", "regular_geometric",
/// "principal_geometric", "regular_formula" (presets "ones", "inv_square",
/// "alt_inv_sqrt") and "sum" of sub-specs. Complex numbers are [re, im]
/// pairs. Malformed input raises InvalidInput naming the offending field.
Series parse_series_spec(const json& doc);
Series load_series_spec(const std::string& path);

/// Parses a one-sided splitting sequence (same schema, evaluated at j >= 1).
SplitSequence parse_split_spec(const json& doc);

json complex_to_json(cplx z);
json outcome_to_json(const SumOutcome& o);
json limit_to_json(const LimitEstimate& e);
json window_to_json(Window w);

json report_to_json(const InverseReport& rep, Window coeff_window);
json report_to_json(const ProductOutcome& rep);
json report_to_json(const VerificationReport& rep);
json report_to_json(const CompositionReport& rep);
json report_to_json(const LawCheckReport& rep);
json report_to_json(const RadiiEstimate& rep);
json report_to_json(const BoundaryReport& rep);
json report_to_json(const DisjointnessReport& rep);
json coefficients_to_json(const Series& s, Window w);

std::string classification_name(InverseClass c);
std::string method_name(InverseMethod m);

}  // namespace fls
