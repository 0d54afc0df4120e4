#pragma once

#include <string_view>

#include "json.hpp"
#include "smoothcert/checker.hpp"
#include "smoothcert/estimate.hpp"

namespace smoothcert {

using json = nlohmann::json;

inline constexpr std::string_view kToolName = "smoothcert";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Doubles are written in their shortest round-trip decimal form, so every
// coordinate parses back to the identical value.
json to_json(const Vector& v);
json to_json(const ConditionInstance& inst);
json to_json(const Verdict& v);
json to_json(const LEstimate& est);
json to_json(const MinimalL& m);
json to_json(const DagReport& r);
json to_json(const CheckResult& c);
json to_json(const SuiteReport& s);
json describe_function(const FunctionHandle& f);

Vector vector_from_json(const json& j);

}  // namespace smoothcert
