#include "concord/agreement.hpp"

#include <algorithm>
#include <cmath>

namespace concord {

void check_boundaries(const StratifiedRisks& s) {
    const std::array<double, 4> risks = {s.p1(), s.p2(), s.p3(), s.p4()};
    const auto zeros = std::count(risks.begin(), risks.end(), 0.0);
    const auto ones = std::count(risks.begin(), risks.end(), 1.0);
    if (zeros >= 2 || ones >= 2) {
        throw UndefinedMeasure(
            "two or more risks sit at the same boundary; effect measures are not "
            "compared there");
    }
}

std::string_view name(Direction d) noexcept {
    switch (d) {
        case Direction::TowardP: return "TowardP";
        case Direction::Null: return "Null";
        case Direction::TowardQ: return "TowardQ";
    }
    return "?";
}

Direction compare_measure(MeasureKind kind, double in_p, double in_q, DirectionTolerance tol) {
    if (in_p == in_q) return Direction::Null;
    const double diff = in_q - in_p;
    if (std::isfinite(in_p) && std::isfinite(in_q)) {
        const double band = is_ratio(kind)
                                ? tol.relative * std::max(std::fabs(in_p), std::fabs(in_q))
                                : tol.relative;
        if (std::fabs(diff) <= band) return Direction::Null;
    }
    return diff > 0.0 ? Direction::TowardQ : Direction::TowardP;
}

Direction modification_direction(const StratifiedRisks& s, MeasureKind kind,
                                 DirectionTolerance tol) {
    return compare_measure(kind, measure(s.stratum_p, kind), measure(s.stratum_q, kind), tol);
}

std::vector<MeasureKind> MeasureSet::kinds() const {
    std::vector<MeasureKind> out;
    for (MeasureKind k : kAllKinds) {
        if (contains(k)) out.push_back(k);
    }
    return out;
}

std::string MeasureSet::label() const {
    if (empty()) return "{}";
    std::string out;
    for (MeasureKind k : kinds()) {
        if (!out.empty()) out += '+';
        out += name(k);
    }
    return out;
}

DirectionMasks direction_masks(const std::array<Direction, kKindCount>& directions) {
    DirectionMasks masks;
    for (std::size_t i = 0; i < kKindCount; ++i) {
        const auto bit = static_cast<std::uint8_t>(1u << i);
        if (directions[i] == Direction::TowardQ) masks.toward_q |= bit;
        if (directions[i] == Direction::TowardP) masks.toward_p |= bit;
    }
    return masks;
}

std::string_view name(ConditionId id) noexcept {
    switch (id) {
        case ConditionId::NullStratum: return "null-stratum";
        case ConditionId::Qualitative: return "qualitative";
        case ConditionId::RelativeRisksAgree: return "relative-risks-agree";
        case ConditionId::ChainsWithRisingRR: return "chains-with-rising-rr";
        case ConditionId::SplitChains: return "split-chains";
        case ConditionId::ExposedOrderMatchesRRStar: return "exposed-order-matches-rr-star";
        case ConditionId::ControlOrderMatchesRRStar: return "control-order-matches-rr-star";
        case ConditionId::ControlOrderMatchesRR: return "control-order-matches-rr";
    }
    return "?";
}

AgreementReport agree(const StratifiedRisks& s, MeasureSet kinds, DirectionTolerance tol) {
    check_boundaries(s);
    AgreementReport report;
    report.queried = kinds;
    report.tolerance = tol;
    for (MeasureKind k : kAllKinds) {
        report.directions[index_of(k)] = modification_direction(s, k, tol);
    }
    for (std::size_t i = 0; i < kKindCount; ++i) {
        for (std::size_t j = 0; j < kKindCount; ++j) {
            report.pairwise[i][j] = agrees(report.directions[i], report.directions[j]);
        }
    }
    const DirectionMasks masks = direction_masks(report.directions);
    for (std::size_t bits = 0; bits < kSubsetCount; ++bits) {
        report.subsets[bits] = masks.subset_agrees(MeasureSet(static_cast<std::uint8_t>(bits)));
    }
    report.verdict = report.subset_agrees(kinds);
    report.rr_gate_fired = agrees(report.direction(MeasureKind::RR),
                                  report.direction(MeasureKind::RRStar));
    if (s.is_strict()) report.sufficient_conditions = sufficient_conditions(s, tol);
    return report;
}

bool rr_gate(const StratifiedRisks& s, DirectionTolerance tol) {
    check_boundaries(s);
    return agrees(modification_direction(s, MeasureKind::RR, tol),
                  modification_direction(s, MeasureKind::RRStar, tol));
}

double critical_p4(double p1, double p2, double p3, MeasureKind kind) {
    const RiskPair p = RiskPair::strict(p1, p2);
    if (!(p3 > 0.0 && p3 < 1.0)) throw DomainError("p3 must lie in (0, 1)");
    switch (kind) {
        case MeasureKind::RR:
            return p3 * (p2 / p1);
        case MeasureKind::RRStar:
            return 1.0 - (1.0 - p3) * ((1.0 - p2) / (1.0 - p1));
        case MeasureKind::RD:
            return (p2 - p1) + p3;
        case MeasureKind::OR: {
            const double t = measure(p, MeasureKind::OR) * p3 / (1.0 - p3);
            return t / (1.0 + t);
        }
        case MeasureKind::HR:
            // log(1 - p4) = HR_P * log(1 - p3)
            return -std::expm1(measure(p, MeasureKind::HR) * std::log1p(-p3));
        case MeasureKind::HRStar:
            // log(p4) = log(p3) / HR*_P
            return std::exp(std::log(p3) / measure(p, MeasureKind::HRStar));
    }
    return 0.0;
}

Interval disagreement_window(double p1, double p2, double p3, MeasureKind kind_a,
                             MeasureKind kind_b) {
    // Critical values that coincide analytically can differ by a few ulps.
    constexpr double kCoincide = 1e-12;
    const double a = critical_p4(p1, p2, p3, kind_a);
    const double b = critical_p4(p1, p2, p3, kind_b);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (hi - lo <= kCoincide) return {};
    Interval window{std::max(lo, 0.0), std::min(hi, 1.0)};
    if (window.empty()) return {};
    return window;
}

namespace {

// Conditions that assume exposure raises risk in both strata. Each was
// checked against direct measure computation (see tests/test_agreement.cpp).
void rising_conditions(const StratifiedRisks& s, bool strata_relabelled,
                       bool groups_relabelled, std::vector<FiredCondition>& out) {
    using enum MeasureKind;
    const double p1 = s.p1(), p2 = s.p2(), p3 = s.p3(), p4 = s.p4();
    const bool rr_rises = measure(s.stratum_p, RR) < measure(s.stratum_q, RR);
    const bool rrs_rises = measure(s.stratum_p, RRStar) < measure(s.stratum_q, RRStar);
    const bool chain_p = p4 > p2 && p2 > p1;
    const bool chain_q = p4 > p3 && p3 > p1;

    auto fire = [&](ConditionId id, MeasureSet forced) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const FiredCondition& c) {
            return c.id == id && c.forced == forced;
        });
        if (!seen) out.push_back({id, forced, strata_relabelled, groups_relabelled});
    };

    if (chain_p && chain_q && rr_rises) fire(ConditionId::ChainsWithRisingRR, {RR, HRStar});
    if (chain_p != chain_q) fire(ConditionId::SplitChains, {RRStar, HRStar});
    if ((p4 < p2) == rrs_rises) fire(ConditionId::ExposedOrderMatchesRRStar, {RRStar, HRStar});
    if (rrs_rises == (p3 <= p1)) fire(ConditionId::ControlOrderMatchesRRStar, {RRStar, RD});
    if (rr_rises == (p3 >= p1)) fire(ConditionId::ControlOrderMatchesRR, {RR, RD});
}

}  // namespace

std::vector<FiredCondition> sufficient_conditions(const StratifiedRisks& s,
                                                  DirectionTolerance tol) {
    if (!s.is_strict()) {
        throw DomainError("sufficient conditions require risks in the open interval (0, 1)");
    }
    std::vector<FiredCondition> out;
    const double p1 = s.p1(), p2 = s.p2(), p3 = s.p3(), p4 = s.p4();

    if (p1 == p2 || p3 == p4) {
        out.push_back({ConditionId::NullStratum, MeasureSet::all()});
        return out;
    }
    if ((p1 < p2) != (p3 < p4)) {
        out.push_back({ConditionId::Qualitative, MeasureSet::all()});
        return out;
    }
    if (rr_gate(s, tol)) out.push_back({ConditionId::RelativeRisksAgree, MeasureSet::all()});

    // Relabelling groups flips every measure's direction and relabelling
    // strata swaps P and Q; neither changes which measures agree.
    const bool falling = p2 < p1;
    const StratifiedRisks rising = falling ? s.swapped_groups() : s;
    rising_conditions(rising, false, falling, out);
    rising_conditions(rising.swapped_strata(), true, falling, out);
    return out;
}

}  // namespace concord
