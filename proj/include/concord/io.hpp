#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "concord/agreement.hpp"
#include "concord/inference.hpp"
#include "concord/montecarlo.hpp"
#include "concord/quadrature.hpp"

namespace concord {

inline constexpr std::string_view kVersion = "0.1.0";

enum class InputFormat : std::uint8_t { Csv, Json };

std::optional<InputFormat> parse_format(std::string_view text);

/// Format implied by a file extension (.csv / .json).
std::optional<InputFormat> format_from_extension(const std::filesystem::path& path);

using StrataInput = std::variant<StratifiedRisks, CountTable>;

/// Parse a strata file body.
///
/// CSV: header `stratum,group,risk` or `stratum,group,events,total`, then
/// one row per (P|Q, control|exposed). Rows may come in any order but each
/// of the four cells must appear exactly once.
///
/// JSON: {"strata": {"P": {"control": r, "exposed": r}, "Q": {...}}} or
/// {"counts": {"P": {"control": {"events": n, "total": n}, ...}, ...}}.
///
/// Throws ParseError for malformed text and ValidationError when the values
/// break a domain invariant.
StrataInput parse_strata(std::string_view text, InputFormat format);

/// Throws ConfigError when the file cannot be read.
StrataInput load_strata(const std::filesystem::path& path, InputFormat format);

using Json = nlohmann::ordered_json;

/// Doubles as JSON numbers, except infinities ("inf", "-inf") and NaN ("nan").
Json number(double x);
double number_from(const Json& j);

Json to_json(const RiskPair& p);
Json to_json(const StratifiedRisks& s);
Json to_json(const CountTable& t);
Json to_json(const MeasureVector& v);
Json to_json(const DerivedMeasures& d);
Json to_json(const AgreementReport& r);
Json to_json(const Interval& i);
Json to_json(const SimulationResult& r);
Json to_json(Region region, const QuadratureResult& r);
Json to_json(const TestVerdict& v);

/// Everything a command produced, plus enough context to rerun it.
struct ReportEnvelope {
    std::vector<std::string> command;
    Json inputs = Json::object();
    Json results = Json::object();
    std::string version{kVersion};
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ReportEnvelope&, const ReportEnvelope&) = default;
};

Json to_json(const ReportEnvelope& e);
ReportEnvelope envelope_from_json(const Json& j);

/// Pretty-printed JSON followed by a newline.
std::string serialize(const ReportEnvelope& e);
/// Throws ParseError.
ReportEnvelope parse_envelope(std::string_view text);

/// Venn table: header `bitmask,members,count,frequency`, 64 rows.
std::string venn_csv(const SimulationResult& r);

}  // namespace concord
