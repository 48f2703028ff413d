#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "concord/measures.hpp"

namespace concord {

/// Two strata: P holds risks (p1, p2), Q holds (p3, p4).
struct StratifiedRisks {
    RiskPair stratum_p;
    RiskPair stratum_q;

    static StratifiedRisks strict(double p1, double p2, double p3, double p4) {
        return {RiskPair::strict(p1, p2), RiskPair::strict(p3, p4)};
    }

    double p1() const noexcept { return stratum_p.control(); }
    double p2() const noexcept { return stratum_p.exposed(); }
    double p3() const noexcept { return stratum_q.control(); }
    double p4() const noexcept { return stratum_q.exposed(); }

    bool is_strict() const noexcept { return stratum_p.is_strict() && stratum_q.is_strict(); }

    StratifiedRisks swapped_strata() const { return {stratum_q, stratum_p}; }
    StratifiedRisks swapped_groups() const {
        return {stratum_p.swapped_groups(), stratum_q.swapped_groups()};
    }

    friend bool operator==(const StratifiedRisks&, const StratifiedRisks&) = default;
};

/// Reject strata where two or more risks are 0 or two or more are 1. The
/// direction of modification is then obvious from the risks and the
/// measures have no common limit.
void check_boundaries(const StratifiedRisks& s);

/// Which stratum a measure says responds more strongly to the exposure.
/// TowardQ means the measure is larger in Q than in P.
enum class Direction : std::int8_t { TowardP = -1, Null = 0, TowardQ = 1 };

std::string_view name(Direction d) noexcept;

/// Null agrees with everything; TowardP and TowardQ disagree.
constexpr bool agrees(Direction a, Direction b) noexcept {
    return static_cast<int>(a) * static_cast<int>(b) >= 0;
}

/// Tolerance for deciding that the two strata show no modification. Ratio
/// measures use a relative band; RD uses an absolute band.
struct DirectionTolerance {
    double relative = 1e-9;
};

/// Compare two values of the same measure taken in P and Q.
Direction compare_measure(MeasureKind kind, double in_p, double in_q,
                          DirectionTolerance tol = {});

Direction modification_direction(const StratifiedRisks& s, MeasureKind kind,
                                 DirectionTolerance tol = {});

/// A subset of the six measures, bit i set for kind with index i.
class MeasureSet {
public:
    constexpr MeasureSet() = default;
    constexpr explicit MeasureSet(std::uint8_t bits) : bits_(bits & 0x3F) {}
    constexpr MeasureSet(std::initializer_list<MeasureKind> kinds) {
        for (MeasureKind k : kinds) bits_ |= bit(k);
    }

    static constexpr MeasureSet all() { return MeasureSet(std::uint8_t{0x3F}); }

    constexpr bool contains(MeasureKind k) const { return (bits_ & bit(k)) != 0; }
    constexpr bool contains(MeasureSet other) const { return (bits_ & other.bits_) == other.bits_; }
    constexpr MeasureSet with(MeasureKind k) const { return MeasureSet(std::uint8_t(bits_ | bit(k))); }
    constexpr std::uint8_t bits() const { return bits_; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool empty() const { return bits_ == 0; }

    std::vector<MeasureKind> kinds() const;
    /// Members joined by '+', e.g. "RR+RR*"; "{}" for the empty set.
    std::string label() const;

    friend constexpr bool operator==(MeasureSet, MeasureSet) = default;

private:
    static constexpr std::uint8_t bit(MeasureKind k) {
        return static_cast<std::uint8_t>(1u << index_of(k));
    }
    std::uint8_t bits_ = 0;
};

inline constexpr std::size_t kSubsetCount = 64;

/// Masks of the kinds pointing toward Q and toward P. A subset agrees
/// unless it contains a member of each.
struct DirectionMasks {
    std::uint8_t toward_q = 0;
    std::uint8_t toward_p = 0;

    constexpr bool subset_agrees(MeasureSet s) const {
        return (s.bits() & toward_q) == 0 || (s.bits() & toward_p) == 0;
    }
};

DirectionMasks direction_masks(const std::array<Direction, kKindCount>& directions);

/// Sufficient conditions for agreement between particular measures.
enum class ConditionId : std::uint8_t {
    NullStratum,        // p1 == p2 or p3 == p4: every measure is Null in one stratum
    Qualitative,        // exposure raises risk in exactly one stratum
    RelativeRisksAgree, // RR and RR* agree, forcing all six
    ChainsWithRisingRR, // p4>p2>p1, p4>p3>p1 and RR_P<RR_Q  =>  RR ~ HR*
    SplitChains,        // exactly one of the chains holds      =>  RR* ~ HR*
    ExposedOrderMatchesRRStar,  // (p4<p2) == (RR*_P<RR*_Q)    =>  RR* ~ HR*
    ControlOrderMatchesRRStar,  // (RR*_P<RR*_Q) == (p3<=p1)   =>  RR* ~ RD
    ControlOrderMatchesRR,      // (RR_P<RR_Q) == (p3>=p1)     =>  RR ~ RD
};

std::string_view name(ConditionId id) noexcept;

struct FiredCondition {
    ConditionId id;
    MeasureSet forced;  // kinds guaranteed to agree
    bool strata_relabelled = false;
    bool groups_relabelled = false;
};

struct AgreementReport {
    std::array<Direction, kKindCount> directions{};
    std::array<std::array<bool, kKindCount>, kKindCount> pairwise{};
    std::array<bool, kSubsetCount> subsets{};
    MeasureSet queried;
    bool verdict = true;  // verdict for the queried subset
    bool rr_gate_fired = false;
    std::vector<FiredCondition> sufficient_conditions;
    DirectionTolerance tolerance;

    bool subset_agrees(MeasureSet s) const { return subsets[s.bits()]; }
    Direction direction(MeasureKind k) const { return directions[index_of(k)]; }
};

AgreementReport agree(const StratifiedRisks& s, MeasureSet kinds = MeasureSet::all(),
                      DirectionTolerance tol = {});

/// True iff RR and RR* do not point in opposite directions. When true all
/// six measures agree.
bool rr_gate(const StratifiedRisks& s, DirectionTolerance tol = {});

/// Value of p4 at which `kind` shows no modification given p1, p2, p3.
/// May fall outside (0, 1); returned unclamped.
double critical_p4(double p1, double p2, double p3, MeasureKind kind);

/// Open interval; empty when lower >= upper.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    bool empty() const noexcept { return !(lower < upper); }
    bool contains(double x) const noexcept { return lower < x && x < upper; }
    double width() const noexcept { return empty() ? 0.0 : upper - lower; }
};

/// Values of p4 for which the two measures disagree: the open interval
/// between their critical values, intersected with (0, 1).
Interval disagreement_window(double p1, double p2, double p3, MeasureKind kind_a,
                             MeasureKind kind_b);

std::vector<FiredCondition> sufficient_conditions(const StratifiedRisks& s,
                                                  DirectionTolerance tol = {});

}  // namespace concord
