#include "concord/measures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace concord {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_closed_unit(double p) { return p >= 0.0 && p <= 1.0; }

std::string describe(double control, double exposed) {
    return "(" + std::to_string(control) + ", " + std::to_string(exposed) + ")";
}

// Ratio of two quantities of the same sign, with 0 and +inf handled as
// one-sided limits: x/0 -> +inf, 0/x -> 0.
double same_sign_ratio(double num, double den) {
    return std::fabs(num) / std::fabs(den);
}

}  // namespace

RiskPair::RiskPair(double control, double exposed) : control_(control), exposed_(exposed) {
    if (!in_closed_unit(control) || !in_closed_unit(exposed)) {
        throw DomainError("risks must lie in [0, 1], got " + describe(control, exposed));
    }
}

RiskPair RiskPair::strict(double control, double exposed) {
    RiskPair pair(control, exposed);
    if (!pair.is_strict()) {
        throw DomainError("risks must lie in the open interval (0, 1), got " +
                          describe(control, exposed));
    }
    return pair;
}

bool RiskPair::is_strict() const noexcept {
    return control_ > 0.0 && control_ < 1.0 && exposed_ > 0.0 && exposed_ < 1.0;
}

RiskPair RiskPair::opposite_outcome() const { return {1.0 - control_, 1.0 - exposed_}; }

RiskPair RiskPair::swapped_groups() const { return {exposed_, control_}; }

std::string_view name(MeasureKind k) noexcept {
    switch (k) {
        case MeasureKind::RR: return "RR";
        case MeasureKind::RRStar: return "RR*";
        case MeasureKind::HR: return "HR";
        case MeasureKind::HRStar: return "HR*";
        case MeasureKind::RD: return "RD";
        case MeasureKind::OR: return "OR";
    }
    return "?";
}

std::optional<MeasureKind> parse_kind(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "RRSTAR" || upper == "RRS") upper = "RR*";
    if (upper == "HRSTAR" || upper == "HRS") upper = "HR*";
    for (MeasureKind k : kAllKinds) {
        if (name(k) == upper) return k;
    }
    return std::nullopt;
}

double measure(const RiskPair& pair, MeasureKind kind) {
    const double p1 = pair.control();
    const double p2 = pair.exposed();
    if ((p1 == 0.0 && p2 == 0.0) || (p1 == 1.0 && p2 == 1.0)) {
        throw UndefinedMeasure("both risks sit at the same boundary " + describe(p1, p2) +
                               "; the measure has no well-defined limit");
    }

    double value = 0.0;
    switch (kind) {
        case MeasureKind::RR:
            value = same_sign_ratio(p2, p1);
            break;
        case MeasureKind::RRStar:
            value = same_sign_ratio(1.0 - p1, 1.0 - p2);
            break;
        case MeasureKind::HR:
            value = same_sign_ratio(std::log1p(-p2), std::log1p(-p1));
            break;
        case MeasureKind::HRStar:
            value = same_sign_ratio(std::log(p1), std::log(p2));
            break;
        case MeasureKind::RD:
            value = p2 - p1;
            break;
        case MeasureKind::OR: {
            const double num = p2 * (1.0 - p1);
            const double den = p1 * (1.0 - p2);
            if (num == 0.0 && den == 0.0) {
                throw UndefinedMeasure("odds ratio is 0/0 at " + describe(p1, p2));
            }
            value = den == 0.0 ? kInf : num / den;
            break;
        }
    }
    if (std::isnan(value)) {
        throw UndefinedMeasure(std::string(name(kind)) + " is undefined at " + describe(p1, p2));
    }
    return value;
}

MeasureVector measure_vector(const RiskPair& pair) {
    MeasureVector out;
    for (MeasureKind k : kAllKinds) out[k] = measure(pair, k);
    return out;
}

double grrr(const RiskPair& pair) {
    if (!pair.is_strict()) {
        throw DomainError("grrr requires risks in the open interval (0, 1)");
    }
    if (pair.exposed() < pair.control()) return measure(pair, MeasureKind::RR) - 1.0;
    return 1.0 - 1.0 / measure(pair, MeasureKind::RRStar);
}

DerivedMeasures derived_measures(const RiskPair& pair) {
    if (!pair.is_strict()) {
        throw DomainError("derived measures require risks in the open interval (0, 1)");
    }
    const double p1 = pair.control();
    const double p2 = pair.exposed();
    const double rd = p2 - p1;
    const double cpg = rd / (1.0 - p1);
    const double cpp = (p1 - p2) / p1;
    const double pn = 1.0 - p1 / p2;
    const double nnt = std::fabs(rd) <= kNullTolerance ? kInf : 1.0 / rd;

    using enum Orientation;
    return DerivedMeasures{
        .cp_generative = {cpg, Direct},
        .cp_preventative = {cpp, Inverse},
        .prob_necessity = {pn, Direct},
        .prob_sufficiency = {cpg, Direct},
        .pns = {rd, Direct},
        // 1/RD is decreasing in RD on each side of the null.
        .nnt = {nnt, Inverse},
        .vaccine_efficacy = {cpp, Inverse},
        .grrr = {grrr(pair), Direct},
    };
}

}  // namespace concord
