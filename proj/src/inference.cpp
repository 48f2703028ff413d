#include "concord/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

namespace concord {
namespace {

struct CellRisk {
    double risk;
    double n;
};

std::array<CellRisk, 4> cell_risks(const CountTable& t, CellCorrection correction) {
    t.validate();
    static constexpr std::array<const char*, 4> kLabels = {"P/control", "P/exposed", "Q/control",
                                                           "Q/exposed"};
    std::array<CellRisk, 4> out{};
    const auto cells = t.cells();
    for (std::size_t i = 0; i < 4; ++i) {
        double events = static_cast<double>(cells[i].events);
        double n = static_cast<double>(cells[i].total);
        if (correction == CellCorrection::HalfEvent) {
            events += 0.5;
            n += 1.0;
        } else if (cells[i].events == 0 || cells[i].events == cells[i].total) {
            throw DegenerateCell(std::string("cell ") + kLabels[i] + " has " +
                                 (cells[i].events == 0 ? "no events" : "only events") +
                                 "; the delta method is undefined there");
        }
        out[i] = {events / n, n};
    }
    return out;
}

}  // namespace

void CountTable::validate() const {
    static constexpr std::array<const char*, 4> kLabels = {"P/control", "P/exposed", "Q/control",
                                                           "Q/exposed"};
    const auto c = cells();
    for (std::size_t i = 0; i < 4; ++i) {
        if (c[i].total == 0) {
            throw ValidationError(std::string("cell ") + kLabels[i] + ": total must be at least 1");
        }
        if (c[i].events > c[i].total) {
            throw ValidationError(std::string("cell ") + kLabels[i] + ": events (" +
                                  std::to_string(c[i].events) + ") exceed total (" +
                                  std::to_string(c[i].total) + ")");
        }
    }
}

StratifiedRisks from_counts(const CountTable& t, CellCorrection correction) {
    const auto r = cell_risks(t, correction);
    return {RiskPair(r[0].risk, r[1].risk), RiskPair(r[2].risk, r[3].risk)};
}

double RRREstimate::se1() const { return std::sqrt(covariance[0][0]); }
double RRREstimate::se2() const { return std::sqrt(covariance[1][1]); }

RRREstimate population_rrr(const StratifiedRisks& s) {
    if (!s.is_strict()) throw DomainError("log relative risk ratios need risks in (0, 1)");
    RRREstimate e;
    e.log_rrr1 = std::log(s.p2()) + std::log(s.p3()) - std::log(s.p1()) - std::log(s.p4());
    e.log_rrr2 = std::log1p(-s.p1()) + std::log1p(-s.p4()) - std::log1p(-s.p2()) -
                 std::log1p(-s.p3());
    return e;
}

RRREstimate estimate_rrr(const CountTable& t, CellCorrection correction) {
    const auto cells = cell_risks(t, correction);
    RRREstimate e = population_rrr(
        {RiskPair(cells[0].risk, cells[1].risk), RiskPair(cells[2].risk, cells[3].risk)});
    double v1 = 0.0, v2 = 0.0, c12 = 0.0;
    for (const auto& [p, n] : cells) {
        v1 += (1.0 - p) / (n * p);
        v2 += p / (n * (1.0 - p));
        c12 += 1.0 / n;
    }
    e.covariance = {{{v1, c12}, {c12, v2}}};
    return e;
}

std::string_view name(ModificationSign s) noexcept {
    switch (s) {
        case ModificationSign::BothAbove: return "BothAbove";
        case ModificationSign::BothBelow: return "BothBelow";
        case ModificationSign::None: return "None";
    }
    return "?";
}

TestVerdict modification_test(const CountTable& t, double alpha, CellCorrection correction) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    TestVerdict v;
    v.alpha = alpha;
    v.estimate = estimate_rrr(t, correction);
    // Bonferroni: each of the two intervals at level 1 - alpha/2.
    v.z = boost::math::quantile(boost::math::normal_distribution<double>{}, 1.0 - alpha / 4.0);
    const double half1 = v.z * v.estimate.se1();
    const double half2 = v.z * v.estimate.se2();
    v.region = {ConfidenceInterval{v.estimate.log_rrr1 - half1, v.estimate.log_rrr1 + half1},
                ConfidenceInterval{v.estimate.log_rrr2 - half2, v.estimate.log_rrr2 + half2}};
    if (v.region[0].lower > 0.0 && v.region[1].lower > 0.0) {
        v.reject = true;
        v.direction = ModificationSign::BothAbove;
    } else if (v.region[0].upper < 0.0 && v.region[1].upper < 0.0) {
        v.reject = true;
        v.direction = ModificationSign::BothBelow;
    }
    return v;
}

}  // namespace concord
