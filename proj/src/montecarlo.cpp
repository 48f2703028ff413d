#include "concord/montecarlo.hpp"

#include <cmath>
#include <random>
#include <thread>

namespace concord {
namespace {

constexpr std::uint32_t kStreamTag = 0x636f6e63;  // "conc"

// Engine for one block of trials, keyed by (seed, worker index).
std::mt19937_64 make_engine(std::uint64_t seed, unsigned worker) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(worker), kStreamTag};
    return std::mt19937_64(seq);
}

// Uniform on [0, 1) from the top 53 bits.
double canonical(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Uniform on the open interval (lower, upper); exact endpoints are redrawn.
double open_uniform(std::mt19937_64& engine, double lower, double upper) {
    for (;;) {
        const double x = lower + (upper - lower) * canonical(engine);
        if (x > lower && x < upper) return x;
    }
}

double tent_draw(std::mt19937_64& engine, double peak, double lower, double upper) {
    for (;;) {
        const double x = tent_inverse_cdf(canonical(engine), peak, lower, upper);
        if (x > 0.0 && x < 1.0 && x > lower && x < upper) return x;
    }
}

StratifiedRisks draw(std::mt19937_64& engine, const SimulationConfig& config) {
    switch (config.distribution) {
        case RiskDistribution::UniformUnit:
        case RiskDistribution::UniformRare: {
            const double hi = config.distribution == RiskDistribution::UniformRare ? 0.1 : 1.0;
            const double p1 = open_uniform(engine, 0.0, hi);
            const double p2 = open_uniform(engine, 0.0, hi);
            const double p3 = open_uniform(engine, 0.0, hi);
            const double p4 = open_uniform(engine, 0.0, hi);
            return {RiskPair(p1, p2), RiskPair(p3, p4)};
        }
        case RiskDistribution::TentDependent: {
            const double lo = config.lower, hi = config.upper;
            const double p1 = open_uniform(engine, lo, hi);
            const double p2 = tent_draw(engine, p1, lo, hi);
            const double p3 = open_uniform(engine, lo, hi);
            const double p4 = tent_draw(engine, p3, lo, hi);
            return {RiskPair(p1, p2), RiskPair(p3, p4)};
        }
    }
    throw ConfigError("unknown distribution");
}

// Counts of (toward_q mask, toward_p mask) pairs.
using MaskHistogram = std::array<std::array<std::uint64_t, kSubsetCount>, kSubsetCount>;

void run_block(const SimulationConfig& config, unsigned worker, std::uint64_t first,
               std::uint64_t last, MaskHistogram& hist) {
    auto engine = make_engine(config.seed, worker);
    for (std::uint64_t t = first; t < last; ++t) {
        const StratifiedRisks s = draw(engine, config);
        const MeasureVector mp = measure_vector(s.stratum_p);
        const MeasureVector mq = measure_vector(s.stratum_q);
        std::array<Direction, kKindCount> dirs{};
        for (MeasureKind k : kAllKinds) {
            dirs[index_of(k)] = compare_measure(k, mp[k], mq[k], config.tolerance);
        }
        const DirectionMasks m = direction_masks(dirs);
        ++hist[m.toward_q][m.toward_p];
    }
}

}  // namespace

std::string_view name(RiskDistribution d) noexcept {
    switch (d) {
        case RiskDistribution::UniformUnit: return "uniform";
        case RiskDistribution::UniformRare: return "rare";
        case RiskDistribution::TentDependent: return "tent";
    }
    return "?";
}

void SimulationConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (workers < 1) throw ConfigError("worker count must be positive");
    if (!(lower >= 0.0 && lower < upper && upper <= 1.0)) {
        throw ConfigError("bounds must satisfy 0 <= L < U <= 1");
    }
    if (!(tolerance.relative >= 0.0)) throw ConfigError("tolerance must be non-negative");
}

SimulationResult run(const SimulationConfig& config) {
    config.validate();
    const unsigned workers = config.workers;
    std::vector<MaskHistogram> hists(workers, MaskHistogram{});
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t first = config.trials * w / workers;
            const std::uint64_t last = config.trials * (w + 1) / workers;
            pool.emplace_back(
                [&config, &hists, w, first, last] { run_block(config, w, first, last, hists[w]); });
        }
    }

    MaskHistogram total{};
    for (const auto& h : hists) {
        for (std::size_t q = 0; q < kSubsetCount; ++q) {
            for (std::size_t p = 0; p < kSubsetCount; ++p) total[q][p] += h[q][p];
        }
    }

    SimulationResult result;
    result.config = config;
    result.trials = config.trials;
    for (std::size_t bits = 0; bits < kSubsetCount; ++bits) {
        const MeasureSet subset(static_cast<std::uint8_t>(bits));
        std::uint64_t count = 0;
        for (std::size_t q = 0; q < kSubsetCount; ++q) {
            for (std::size_t p = 0; p < kSubsetCount; ++p) {
                const DirectionMasks m{static_cast<std::uint8_t>(q), static_cast<std::uint8_t>(p)};
                if (m.subset_agrees(subset)) count += total[q][p];
            }
        }
        result.agree_counts[bits] = count;
    }
    return result;
}

void TentLaw::validate() const {
    if (!(lower >= 0.0 && upper <= 1.0 && lower < peak && peak < upper)) {
        throw DomainError("tent law needs 0 <= lower < peak < upper <= 1");
    }
}

double TentLaw::density(double x) const {
    validate();
    if (x <= lower || x >= upper) return 0.0;
    const double width = upper - lower;
    if (x <= peak) return 2.0 * (x - lower) / ((peak - lower) * width);
    return 2.0 * (upper - x) / ((upper - peak) * width);
}

double TentLaw::cdf(double x) const {
    validate();
    if (x <= lower) return 0.0;
    if (x >= upper) return 1.0;
    const double width = upper - lower;
    if (x <= peak) return (x - lower) * (x - lower) / ((peak - lower) * width);
    return 1.0 - (upper - x) * (upper - x) / ((upper - peak) * width);
}

double tent_inverse_cdf(double u, double peak, double lower, double upper) {
    const TentLaw law{peak, lower, upper};
    law.validate();
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("tent_inverse_cdf needs u in [0, 1]");
    const double width = upper - lower;
    const double at_peak = (peak - lower) / width;
    if (u <= at_peak) return lower + std::sqrt(u * (peak - lower) * width);
    return upper - std::sqrt((1.0 - u) * (upper - peak) * width);
}

double tent_joint_density(const StratifiedRisks& s, double lower, double upper) {
    const double uniform = 1.0 / (upper - lower);
    const double f2 = TentLaw{s.p1(), lower, upper}.density(s.p2());
    const double f4 = TentLaw{s.p3(), lower, upper}.density(s.p4());
    return uniform * f2 * uniform * f4;
}

std::vector<VennRow> venn_table(const SimulationResult& result) {
    std::vector<VennRow> rows;
    rows.reserve(kSubsetCount);
    for (std::size_t bits = 0; bits < kSubsetCount; ++bits) {
        const MeasureSet subset(static_cast<std::uint8_t>(bits));
        rows.push_back({subset, result.agree_counts[bits], result.frequency(subset)});
    }
    return rows;
}

}  // namespace concord
