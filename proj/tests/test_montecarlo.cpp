#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "concord/montecarlo.hpp"

using namespace concord;
using enum MeasureKind;

namespace {

SimulationConfig config(RiskDistribution d, std::uint64_t trials, std::uint64_t seed,
                        unsigned workers = 1) {
    SimulationConfig c;
    c.distribution = d;
    c.trials = trials;
    c.seed = seed;
    c.workers = workers;
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    SimulationConfig c;
    c.trials = 0;
    CHECK_THROWS_AS(run(c), ConfigError);
    c = {};
    c.workers = 0;
    CHECK_THROWS_AS(run(c), ConfigError);
    c = {};
    c.lower = 0.6;
    c.upper = 0.4;
    CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("a single trial gives frequencies of 0 or 1") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SimulationResult r = run(config(RiskDistribution::UniformUnit, 1, seed));
        for (const VennRow& row : venn_table(r)) {
            CHECK((row.frequency == 0.0 || row.frequency == 1.0));
        }
    }
}

TEST_CASE("identical seed and worker count reproduce the result bit for bit") {
    for (auto d : {RiskDistribution::UniformUnit, RiskDistribution::UniformRare,
                   RiskDistribution::TentDependent}) {
        const auto c = config(d, 20000, 99, 3);
        CHECK(run(c) == run(c));
        CHECK_FALSE(run(c) == run(config(d, 20000, 100, 3)));
    }
}

TEST_CASE("venn table shape") {
    const SimulationResult r = run(config(RiskDistribution::UniformUnit, 50000, 5, 2));
    const auto rows = venn_table(r);
    REQUIRE(rows.size() == kSubsetCount);
    CHECK(rows[0].frequency == 1.0);
    for (std::size_t a = 0; a < kSubsetCount; ++a) {
        CHECK(rows[a].subset.bits() == a);
        for (std::size_t b = 0; b < kSubsetCount; ++b) {
            if (rows[b].subset.contains(rows[a].subset)) CHECK(rows[a].count >= rows[b].count);
        }
    }
}

TEST_CASE("relative-risk agreement count equals all-six count") {
    for (auto d : {RiskDistribution::UniformUnit, RiskDistribution::UniformRare,
                   RiskDistribution::TentDependent}) {
        const SimulationResult r = run(config(d, 200000, 17, 2));
        CHECK(r.agree_counts[MeasureSet{RR, RRStar}.bits()] ==
              r.agree_counts[MeasureSet::all().bits()]);
    }
}

TEST_CASE("uniform all-six frequency is near 5/6") {
    const std::uint64_t n = 1'000'000;
    const SimulationResult r = run(config(RiskDistribution::UniformUnit, n, 2024, 2));
    const double sigma = std::sqrt((5.0 / 6.0) * (1.0 / 6.0) / n);
    CHECK(std::fabs(r.frequency(MeasureSet::all()) - 5.0 / 6.0) <= 4 * sigma);
}

TEST_CASE("rare risks are drawn from (0, 0.1)") {
    const SimulationResult rare = run(config(RiskDistribution::UniformRare, 200000, 3));
    const SimulationResult unit = run(config(RiskDistribution::UniformUnit, 200000, 3));
    CHECK(rare.frequency(MeasureSet::all()) > unit.frequency(MeasureSet::all()) + 0.05);
    CHECK(rare.frequency({OR, RR}) > 0.99);
}

TEST_CASE("tent law") {
    const TentLaw law{0.3, 0.0, 1.0};
    CHECK(law.cdf(0.0) == 0.0);
    CHECK(law.cdf(1.0) == 1.0);
    CHECK(law.cdf(0.3) == doctest::Approx(0.3));
    CHECK(law.density(0.3) == doctest::Approx(2.0));
    CHECK(law.density(0.0) == 0.0);
    CHECK(law.density(1.0) == 0.0);

    CHECK(tent_inverse_cdf(0.0, 0.3) == 0.0);
    CHECK(tent_inverse_cdf(1.0, 0.3) == 1.0);
    CHECK(tent_inverse_cdf(0.3, 0.3) == doctest::Approx(0.3));
    CHECK(tent_inverse_cdf(0.0, 0.5, 0.2, 0.9) == doctest::Approx(0.2));
    CHECK(tent_inverse_cdf(1.0, 0.5, 0.2, 0.9) == doctest::Approx(0.9));
    CHECK(tent_inverse_cdf((0.5 - 0.2) / 0.7, 0.5, 0.2, 0.9) == doctest::Approx(0.5));

    for (double u : {0.01, 0.2, 0.45, 0.77, 0.99}) {
        CHECK(TentLaw{0.6, 0.1, 0.8}.cdf(tent_inverse_cdf(u, 0.6, 0.1, 0.8)) ==
              doctest::Approx(u).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tent_inverse_cdf(0.5, 1.2), DomainError);
    CHECK_THROWS_AS(tent_inverse_cdf(1.5, 0.3), DomainError);
}

TEST_CASE("tent density integrates to one") {
    const TentLaw law{0.7, 0.1, 0.9};
    const int n = 100000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += law.density(0.1 + 0.8 * (i + 0.5) / n);
    CHECK(s * 0.8 / n == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inverse-transform tent draws pass a Kolmogorov-Smirnov check") {
    for (double peak : {0.15, 0.5, 0.83}) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(peak * 1000));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> x(1'000'000);
        for (double& v : x) v = tent_inverse_cdf(u(rng), peak);
        std::sort(x.begin(), x.end());
        const TentLaw law{peak};
        double d = 0.0;
        const double n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double f = law.cdf(x[i]);
            d = std::max({d, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
        }
        CHECK(d < 0.002);
    }
}

TEST_CASE("joint density ratio of the two quoted quadruples") {
    const double near = tent_joint_density(StratifiedRisks::strict(0.56, 0.53, 0.78, 0.74));
    const double far = tent_joint_density(StratifiedRisks::strict(0.1, 0.9, 0.8, 0.3));
    // Hand evaluation: near = (2*0.53/0.56) * (2*0.74/0.78),
    // far = (2*0.1/0.9) * (2*0.3/0.8).
    CHECK(near == doctest::Approx((1.06 / 0.56) * (1.48 / 0.78)));
    CHECK(far == doctest::Approx((0.2 / 0.9) * (0.6 / 0.8)));
    CHECK(near / far == doctest::Approx(21.55).epsilon(1e-3));
}
