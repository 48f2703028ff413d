#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "concord/agreement.hpp"

namespace concord {

struct CellCount {
    std::uint64_t events = 0;
    std::uint64_t total = 0;

    friend bool operator==(const CellCount&, const CellCount&) = default;
};

/// Event counts for a 2x2x2 table: stratum (P, Q) by group (control, exposed).
struct CountTable {
    CellCount p_control;
    CellCount p_exposed;
    CellCount q_control;
    CellCount q_exposed;

    /// Cells in the order p1, p2, p3, p4.
    std::array<CellCount, 4> cells() const { return {p_control, p_exposed, q_control, q_exposed}; }

    /// Throws ValidationError if a total is zero or events exceed total.
    void validate() const;

    friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Opt-in continuity correction: add 0.5 to events and 1 to totals.
enum class CellCorrection : std::uint8_t { None, HalfEvent };

/// Observed risks events/total. Throws DegenerateCell when a risk is 0 or 1
/// and no correction is requested.
StratifiedRisks from_counts(const CountTable& t, CellCorrection correction = CellCorrection::None);

/// Log relative risk ratios and their delta-method covariance.
///
///   log_rrr1 = log(p2 p3 / (p1 p4))                 (ratio of RRs, P over Q)
///   log_rrr2 = log((1-p1)(1-p4) / ((1-p2)(1-p3)))   (ratio of RR*s, P over Q)
///
/// Var(log_rrr1) = sum (1-p)/(n p), Var(log_rrr2) = sum p/(n (1-p)),
/// Cov = sum 1/n over the four cells. Each cell contributes
/// Cov(log p, log(1-p)) = -1/n with opposite signs in the two contrasts.
struct RRREstimate {
    double log_rrr1 = 0.0;
    double log_rrr2 = 0.0;
    std::array<std::array<double, 2>, 2> covariance{};

    double se1() const;
    double se2() const;
};

RRREstimate estimate_rrr(const CountTable& t, CellCorrection correction = CellCorrection::None);

/// Population log relative risk ratios (covariance left at zero).
RRREstimate population_rrr(const StratifiedRisks& s);

enum class ModificationSign : std::uint8_t {
    BothAbove,  // both ratios > 1: P shows the stronger effect on both RR scales
    BothBelow,  // both ratios < 1: Q shows the stronger effect
    None,
};

std::string_view name(ModificationSign s) noexcept;

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
};

struct TestVerdict {
    bool reject = false;
    ModificationSign direction = ModificationSign::None;
    double alpha = 0.05;
    double z = 0.0;  // z_{1 - alpha/4}
    /// Bonferroni rectangle on the log scale: one interval per log RRR.
    std::array<ConfidenceInterval, 2> region{};
    RRREstimate estimate;
};

/// Reject "no common-direction modification" when the simultaneous
/// rectangle lies inside the (>1, >1) or (<1, <1) quadrant.
TestVerdict modification_test(const CountTable& t, double alpha,
                              CellCorrection correction = CellCorrection::None);

}  // namespace concord
