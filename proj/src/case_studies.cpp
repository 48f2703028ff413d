#include "concord/case_studies.hpp"

#include <cmath>
#include <limits>

namespace concord {
namespace {

using enum StratumId;
using enum Quantity;

constexpr ExpectedValue value(StratumId s, Quantity q, double printed, int decimals,
                              PrintRule rule = PrintRule::Rounded) {
    return {s, false, q, printed, decimals, rule};
}

constexpr ExpectedValue opposite(StratumId s, Quantity q, double printed, int decimals) {
    return {s, true, q, printed, decimals, PrintRule::Rounded};
}

CaseStudy table1() {
    return {"table1",
            "Memory-test failure by tea type, stratified by gender (exposed = decaf)",
            "men",
            "women",
            RiskPair(0.7, 0.9),
            RiskPair(0.2, 0.3),
            {value(P, RR, 1.29, 2), value(Q, RR, 1.50, 2),
             value(P, OR, 3.86, 2), value(Q, OR, 1.71, 2),
             value(P, RD, 0.2, 1), value(Q, RD, 0.1, 1),
             opposite(P, RR, 0.333, 3), opposite(Q, RR, 0.875, 3),
             opposite(P, OR, 0.259, 3), opposite(Q, OR, 0.583, 3),
             opposite(P, RD, -0.2, 1), opposite(Q, RD, -0.1, 1),
             value(P, RRStar, 3.00, 2), value(Q, RRStar, 1.14, 2),
             opposite(P, RRStar, 0.778, 3), opposite(Q, RRStar, 0.667, 3)}};
}

// Risks are 1/19 and 5/19; the printed 0.05263 and 0.26316 are their roundings.
CaseStudy hcv_a() {
    return {"hcv-a",
            "Hepatitis C outcome A, single pair",
            "all",
            "",
            RiskPair(1.0 / 19.0, 0.15),
            std::nullopt,
            {value(P, RR, 2.850, 3), value(P, OR, 3.176, 3), value(P, RD, 0.09737, 5),
             value(P, RRStar, 1.115, 3), value(P, HR, 3.006, 3), value(P, HRStar, 1.552, 3)}};
}

CaseStudy hcv_b() {
    return {"hcv-b",
            "Hepatitis C outcome B, single pair",
            "all",
            "",
            RiskPair(5.0 / 19.0, 0.35),
            std::nullopt,
            {value(P, RR, 1.3300, 4), value(P, OR, 1.5077, 4), value(P, RD, 0.08684, 5),
             value(P, RRStar, 1.1336, 4), value(P, HR, 1.4106, 4), value(P, HRStar, 1.2716, 4)}};
}

// Annual risks per stratum taken as exact. HR* for Q is printed as a
// truncated percentage (1.1727 shown as 1.172).
CaseStudy melanoma() {
    return {"melanoma",
            "Melanoma risk with and without exposure, two strata of annual risk",
            "P",
            "Q",
            RiskPair(0.00384, 0.0083),
            RiskPair(0.00045, 0.0014),
            {value(P, RR, 2.16, 2), value(Q, RR, 3.11, 2),
             value(P, HRStar, 1.161, 3), value(Q, HRStar, 1.172, 3, PrintRule::Truncated),
             value(P, NNT, 224, 0), value(Q, NNT, 1053, 0)}};
}

// HR* printed as percentages above 1; 1.8186 appears as 81%.
CaseStudy covid() {
    return {"covid",
            "COVID-19 outcomes by exposure, two strata",
            "P",
            "Q",
            RiskPair(0.009, 0.075),
            RiskPair(0.106, 0.253),
            {value(P, RR, 8.33, 2), value(Q, RR, 2.39, 2),
             value(P, OR, 8.93, 2), value(Q, OR, 2.86, 2),
             value(P, HR, 8.62, 2), value(Q, HR, 2.60, 2),
             value(P, RD, 0.066, 3), value(Q, RD, 0.147, 3),
             value(P, RRStar, 1.071, 3), value(Q, RRStar, 1.197, 3),
             value(P, HRStar, 1.81, 2, PrintRule::Truncated), value(Q, HRStar, 1.63, 2)}};
}

}  // namespace

std::string_view name(Quantity q) noexcept {
    switch (q) {
        case RR: return "RR";
        case RRStar: return "RR*";
        case HR: return "HR";
        case HRStar: return "HR*";
        case RD: return "RD";
        case OR: return "OR";
        case NNT: return "NNT";
    }
    return "?";
}

std::optional<StratifiedRisks> CaseStudy::stratified() const {
    if (!stratum_q) return std::nullopt;
    return StratifiedRisks{stratum_p, *stratum_q};
}

double CaseStudy::recompute(const ExpectedValue& e) const {
    if (e.stratum == Q && !stratum_q) throw UnknownCase(name + " has a single stratum");
    RiskPair pair = e.stratum == P ? stratum_p : *stratum_q;
    if (e.opposite_outcome) pair = pair.opposite_outcome();
    if (e.quantity == NNT) return 1.0 / measure(pair, MeasureKind::RD);
    return measure(pair, static_cast<MeasureKind>(e.quantity));
}

double cut(double x, int decimals, PrintRule rule) {
    const double scale = std::pow(10.0, decimals);
    // Nudge by a few ulps so values like 0.875 * 1000 land on the right side.
    const double scaled = x * scale * (1.0 + 4 * std::numeric_limits<double>::epsilon());
    const double mag = rule == PrintRule::Rounded ? std::round(std::fabs(scaled))
                                                  : std::trunc(std::fabs(scaled));
    return std::copysign(mag, x) / scale;
}

bool CaseStudy::matches(const ExpectedValue& e, PrintRule rule) const {
    const double scale = std::pow(10.0, e.decimals);
    return std::llround(cut(recompute(e), e.decimals, rule) * scale) ==
           std::llround(e.printed * scale);
}

std::vector<std::string_view> case_names() {
    return {"table1", "hcv-a", "hcv-b", "melanoma", "covid"};
}

CaseStudy case_study(std::string_view name) {
    if (name == "table1") return table1();
    if (name == "hcv-a") return hcv_a();
    if (name == "hcv-b") return hcv_b();
    if (name == "melanoma") return melanoma();
    if (name == "covid") return covid();
    throw UnknownCase("unknown case study '" + std::string(name) + "'");
}

}  // namespace concord
