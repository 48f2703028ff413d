#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace concord {

/// The four open regions of (0,1)^3 cut out by the planes p1 = p2 and p1 = p3.
enum class Region : std::uint8_t {
    A,  // p1 < p2, p1 < p3
    B,  // p1 > p2, p1 < p3
    C,  // p1 < p2, p1 > p3
    D,  // p1 > p2, p1 > p3
};

inline constexpr std::array<Region, 4> kAllRegions = {Region::A, Region::B, Region::C, Region::D};

std::string_view name(Region r) noexcept;
std::optional<Region> parse_region(std::string_view text);

/// Region containing (p1, p2, p3), or nullopt on one of the cutting planes.
std::optional<Region> region_of(double p1, double p2, double p3) noexcept;

enum class QuadratureScheme : std::uint8_t { MidpointGrid, Adaptive };

struct QuadratureSpec {
    QuadratureScheme scheme = QuadratureScheme::MidpointGrid;
    std::size_t cells = 256;         // cells per axis (grid scheme)
    double tolerance = 1e-5;         // target error estimate (adaptive scheme)
    std::size_t max_cells = 1024;    // refinement cap (adaptive scheme)
    unsigned workers = 0;            // 0 = hardware concurrency

    static constexpr std::size_t kMinCells = 8;

    /// Throws ResolutionError.
    void validate() const;
};

/// Estimate with a practical error bound: the change from the previous
/// dyadic refinement (cells/2 per axis).
struct QuadratureResult {
    double estimate = 0.0;
    double error = 0.0;
    std::size_t cells = 0;
};

/// Conditional probability, given (p1, p2, p3) and p4 ~ U(0,1), that RR and
/// RR* disagree: the length of the part of (0, 1) lying between their
/// critical values of p4.
double integrand(double p1, double p2, double p3);

/// Integral of the integrand over one region.
QuadratureResult region_probability(Region region, const QuadratureSpec& spec = {});

/// The region-A integral split at p3 = p1/p2:
///   first  = int p2*p3/p1 over p1 < p2, p1 < p3 < p1/p2
///   second = int 1 over p1 < p2, p1/p2 < p3 < 1
///   third  = int (1 - (1-p2)(1-p3)/(1-p1)) over region A
/// and region A = first + second - third.
struct RegionAParts {
    QuadratureResult first;
    QuadratureResult second;
    QuadratureResult third;
};

RegionAParts region_a_parts(const QuadratureSpec& spec = {});

}  // namespace concord
