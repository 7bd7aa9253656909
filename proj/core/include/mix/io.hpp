#pragma once

// JSON and CSV encodings: marginal spec files, certificates, verdicts,
// solver results, risk reports and sample tables.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mix/construct.hpp"
#include "mix/criteria.hpp"
#include "mix/distributions.hpp"
#include "mix/rearrange.hpp"
#include "mix/riskbounds.hpp"
#include "mix/verdict.hpp"

namespace mix {

using Json = nlohmann::ordered_json;

enum class NumberMode { Auto, Float };

struct SpecFile {
  std::vector<DistributionSpec> specs;
  /// True when every spec can be handled exactly.
  bool rational = true;
  /// Optional "n" from an {"marginals": [...], "n": N} wrapper.
  std::optional<std::size_t> n;
};

/// Accepts a spec object, an array of them, or {"marginals": [...], "n": N}.
/// Numbers may be JSON numbers (read as exact decimals), "a/b" strings or
/// {"num", "den"} objects. Duplicate and unknown keys are rejected.
/// Throws SchemaError naming the offending line or field.
SpecFile parse_spec_text(std::string_view text, NumberMode mode = NumberMode::Auto);

/// Parses JSON text, rejecting duplicate keys.
Json parse_json_strict(std::string_view text);

Json to_json(const Rational& value);
Rational rational_from_json(const Json& value, const std::string& where);

Json to_json(const DistributionSpec& spec);
Json to_json(const Certificate& certificate);
/// Accepts a certificate object (with "kind") or any report that embeds one.
Certificate certificate_from_json(const Json& value);
Json to_json(const Verdict& verdict);
Json to_json(const NormCheckReport& report);
Json to_json(const SearchDiagnostics& diagnostics);
Json to_json(const SolveResult<double>& result);
Json to_json(const SolveResult<Rational>& result);
Json to_json(const RiskBoundReport& report);
Json to_json(const DiscreteDistribution& law);

/// m rows of n comma-separated numbers; a first line that does not parse as
/// numbers is taken as a header. Values are read exactly.
MatrixInstance<Rational> parse_matrix_csv(std::string_view text);

/// Header x1..xn, then one line per row.
std::string to_csv(const SampleTable& table);

/// Shortest text that round-trips the double.
std::string format_double(double value);

}  // namespace mix
