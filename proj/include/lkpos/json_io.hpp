#pragma once

#include <string>

#include <json.hpp>

#include "lkpos/catalog.hpp"
#include "lkpos/kernelcheck.hpp"
#include "lkpos/levykhin.hpp"
#include "lkpos/measure.hpp"
#include "lkpos/reflection.hpp"

namespace lkpos {

using Json = nlohmann::json;

/// Finite numbers as JSON numbers, infinities as "inf" / "-inf", NaN as "nan".
Json number_json(double x);
/// Accepts what number_json writes. Throws InvalidArgument otherwise.
double number_from_json(const Json& j);

Json to_json(const Measure& mu);
Json to_json(const LKIntervalRep& rep);
Json to_json(const LKIncreasingRep& rep);
Json to_json(const BernsteinRep& rep);
Json to_json(const LKData& d);
Json to_json(const PositivityVerdict& v);
Json to_json(const ReflectionReport& r);
Json to_json(const Domain& d);
Json to_json(const FlagClaim& c);

/// Parsers throw InvalidArgument (malformed input) or InvalidMeasure /
/// InvalidRep (well-formed but invalid content); never a JSON library error.
Measure measure_from_json(const Json& j);
LKIntervalRep interval_rep_from_json(const Json& j);
LKIncreasingRep increasing_rep_from_json(const Json& j);
BernsteinRep bernstein_rep_from_json(const Json& j);
/// {"form": "interval" | "increasing" | "bernstein" | "reflection_negative"
///  | "laplace" | "laplace_abs", ...}. `form` overrides the document's own.
LKData lk_data_from_json(const Json& j, const std::string& form = "");
PositivityVerdict verdict_from_json(const Json& j);
Domain domain_from_json(const Json& j);

/// Parses text; malformed JSON becomes InvalidArgument.
Json parse_json(const std::string& text);
/// Stable rendering used for reports: sorted keys, two-space indent.
std::string render(const Json& j);

Verdict verdict_from_string(const std::string& s);

}  // namespace lkpos
