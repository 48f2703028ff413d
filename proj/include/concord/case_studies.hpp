#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concord/agreement.hpp"

namespace concord {

/// What a printed value reports: one of the six measures, or the number
/// needed to treat (1/RD).
enum class Quantity : std::uint8_t { RR, RRStar, HR, HRStar, RD, OR, NNT };

std::string_view name(Quantity q) noexcept;

enum class StratumId : std::uint8_t { P, Q };

/// How the published figure was cut to its printed digits.
enum class PrintRule : std::uint8_t { Rounded, Truncated };

struct ExpectedValue {
    StratumId stratum;
    bool opposite_outcome;  // computed on (1 - control, 1 - exposed)
    Quantity quantity;
    double printed;
    int decimals;
    PrintRule rule = PrintRule::Rounded;
};

/// Published risks plus the effect measures printed for them. Group order
/// is (control, exposed) = (reference, exposed) throughout.
struct CaseStudy {
    std::string name;
    std::string description;
    std::string label_p;
    std::string label_q;  // empty for single-pair studies
    RiskPair stratum_p;
    std::optional<RiskPair> stratum_q;
    std::vector<ExpectedValue> expected;

    /// Both strata, or nullopt for a single-pair study.
    std::optional<StratifiedRisks> stratified() const;

    double recompute(const ExpectedValue& e) const;

    /// recompute(e) cut to e.decimals by `rule`, compared to the printed value.
    bool matches(const ExpectedValue& e, PrintRule rule) const;
    bool matches(const ExpectedValue& e) const { return matches(e, e.rule); }
};

/// Cut x to `decimals` places by rounding half away from zero or truncating.
double cut(double x, int decimals, PrintRule rule);

/// table1, hcv-a, hcv-b, melanoma, covid.
std::vector<std::string_view> case_names();

/// Throws UnknownCase.
CaseStudy case_study(std::string_view name);

}  // namespace concord
