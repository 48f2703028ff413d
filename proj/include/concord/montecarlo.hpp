#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "concord/agreement.hpp"

namespace concord {

enum class RiskDistribution : std::uint8_t {
    UniformUnit,    // all four risks uniform on (0, 1)
    UniformRare,    // all four risks uniform on (0, 0.1)
    TentDependent,  // control risks uniform on (L, U); exposed risks tent-distributed
                    // on (L, U) with the mode at the matching control risk
};

std::string_view name(RiskDistribution d) noexcept;

struct SimulationConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    RiskDistribution distribution = RiskDistribution::UniformUnit;
    double lower = 0.0;  // tent support, ignored by the uniform families
    double upper = 1.0;
    unsigned workers = 1;
    DirectionTolerance tolerance{};

    /// Throws ConfigError.
    void validate() const;
};

struct SimulationResult {
    SimulationConfig config;
    std::uint64_t trials = 0;
    /// Trials in which subset `bits` agreed.
    std::array<std::uint64_t, kSubsetCount> agree_counts{};

    double frequency(MeasureSet s) const {
        return static_cast<double>(agree_counts[s.bits()]) / static_cast<double>(trials);
    }
    double disagreement(MeasureSet s) const { return 1.0 - frequency(s); }

    friend bool operator==(const SimulationResult& a, const SimulationResult& b) {
        return a.trials == b.trials && a.agree_counts == b.agree_counts;
    }
};

/// Sample strata and tally agreement for all 64 subsets of the measures.
///
/// Trials are split into `workers` contiguous blocks. Block w draws from
/// its own engine seeded with (seed, w), so the result depends only on
/// (config, seed, workers) and never on scheduling.
SimulationResult run(const SimulationConfig& config);

/// Asymmetric tent (triangular) law on [lower, upper] with its mode at
/// `peak`: density rises linearly from 0 at `lower` to 2/(upper - lower)
/// at `peak` and falls linearly back to 0 at `upper`.
struct TentLaw {
    double peak;
    double lower = 0.0;
    double upper = 1.0;

    /// Throws DomainError unless 0 <= lower < peak < upper <= 1.
    void validate() const;

    double density(double x) const;
    double cdf(double x) const;
};

/// x with cdf(x) == u for u in [0, 1].
double tent_inverse_cdf(double u, double peak, double lower = 0.0, double upper = 1.0);

/// Joint density of one trial of the tent simulation: control risks
/// uniform on (lower, upper), exposed risks tent-distributed around them.
double tent_joint_density(const StratifiedRisks& s, double lower = 0.0, double upper = 1.0);

struct VennRow {
    MeasureSet subset;
    std::uint64_t count = 0;
    double frequency = 0.0;
};

/// 64 rows ordered by subset bitmask.
std::vector<VennRow> venn_table(const SimulationResult& result);

}  // namespace concord
