#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "concord/errors.hpp"

namespace concord {

/// Risks of the outcome in the control and exposed groups of one stratum.
///
/// Both risks lie in [0, 1]. A pair with both risks at 0 or both at 1 is
/// accepted by the constructor but every measure on it raises
/// UndefinedMeasure, since the one-sided limits disagree there.
class RiskPair {
public:
    RiskPair(double control, double exposed);

    /// Open-interval constructor used by operations that need log/ratio
    /// forms everywhere (derived measures, critical values, sampling).
    static RiskPair strict(double control, double exposed);

    double control() const noexcept { return control_; }
    double exposed() const noexcept { return exposed_; }

    bool is_strict() const noexcept;

    /// Same groups, complementary outcome: (1 - control, 1 - exposed).
    RiskPair opposite_outcome() const;

    /// Exchange the roles of the two groups.
    RiskPair swapped_groups() const;

    friend bool operator==(const RiskPair&, const RiskPair&) = default;

private:
    double control_;
    double exposed_;
};

enum class MeasureKind : std::uint8_t { RR = 0, RRStar, HR, HRStar, RD, OR };

inline constexpr std::array<MeasureKind, 6> kAllKinds = {
    MeasureKind::RR, MeasureKind::RRStar, MeasureKind::HR,
    MeasureKind::HRStar, MeasureKind::RD, MeasureKind::OR};

inline constexpr std::size_t kKindCount = kAllKinds.size();

constexpr std::size_t index_of(MeasureKind k) noexcept {
    return static_cast<std::size_t>(k);
}

/// 0 for the risk difference, 1 for every ratio measure.
constexpr double null_value(MeasureKind k) noexcept {
    return k == MeasureKind::RD ? 0.0 : 1.0;
}

constexpr bool is_ratio(MeasureKind k) noexcept { return k != MeasureKind::RD; }

/// Short label ("RR", "RR*", "HR", "HR*", "RD", "OR").
std::string_view name(MeasureKind k) noexcept;

/// Inverse of name(); also accepts "RRStar"/"HRStar" and is case-insensitive.
std::optional<MeasureKind> parse_kind(std::string_view text);

/// Absolute tolerance used when a measure is compared to its null value.
inline constexpr double kNullTolerance = 1e-12;

/// Values of the six measures for one stratum. Ratio entries are in
/// [0, +inf]; RD is in [-1, 1].
struct MeasureVector {
    std::array<double, kKindCount> values{};

    double operator[](MeasureKind k) const noexcept { return values[index_of(k)]; }
    double& operator[](MeasureKind k) noexcept { return values[index_of(k)]; }
};

/// Compute one measure. Boundary risks yield the one-sided limit of the
/// formula, e.g. control = 0 and exposed = 0.3 gives RR = +inf.
///
/// HR is log(1 - exposed) / log(1 - control), the ratio of cumulative
/// hazards H = -log(1 - p). The sign of H cancels in the ratio.
/// HR* is log(control) / log(exposed).
double measure(const RiskPair& pair, MeasureKind kind);

MeasureVector measure_vector(const RiskPair& pair);

/// Whether larger values of a derived measure point in the same direction
/// as larger values of RR (exposed group worse off).
enum class Orientation : std::uint8_t { Direct, Inverse };

template <typename T>
struct Oriented {
    T value;
    Orientation orientation;
};

/// Measures concordant with one of RR, RR*, or RD, plus the generalised
/// relative risk ratio.
struct DerivedMeasures {
    Oriented<double> cp_generative;     // (p2 - p1) / (1 - p1), with RR*
    Oriented<double> cp_preventative;   // (p1 - p2) / p1 = 1 - RR, inverse
    Oriented<double> prob_necessity;    // 1 - 1/RR
    Oriented<double> prob_sufficiency;  // equals cp_generative
    Oriented<double> pns;               // equals RD
    Oriented<double> nnt;               // 1/RD, +inf when RD == 0
    Oriented<double> vaccine_efficacy;  // equals cp_preventative
    Oriented<double> grrr;
};

DerivedMeasures derived_measures(const RiskPair& pair);

/// Generalised relative risk ratio: RR - 1 when exposed < control,
/// otherwise 1 - 1/RR*. Zero at exposed == control from both sides.
double grrr(const RiskPair& pair);

}  // namespace concord
