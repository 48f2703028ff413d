#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "concord/montecarlo.hpp"
#include "concord/quadrature.hpp"

using namespace concord;

namespace {

// Independent integrand: probability over p4 ~ U(0, 1) that RR and RR*
// point in opposite directions, by brute-force counting on a p4 grid.
double counted_integrand(double p1, double p2, double p3) {
    const int n = 200000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double p4 = (i + 0.5) / n;
        const double rr = (p2 / p1) - (p4 / p3);
        const double rrs = (1 - p1) / (1 - p2) - (1 - p3) / (1 - p4);
        if ((rr > 0 && rrs < 0) || (rr < 0 && rrs > 0)) ++hits;
    }
    return static_cast<double>(hits) / n;
}

}  // namespace

TEST_CASE("integrand at the published points") {
    CHECK(integrand(0.1, 0.2, 0.3) == doctest::Approx(0.6 - (1 - 0.8 * 0.7 / 0.9)));
    CHECK(integrand(0.1, 0.2, 0.3) == doctest::Approx(2.0 / 9.0));
    // p4 critical values 1/15 (RR) and -0.0286 (RR*, clipped to 0).
    CHECK(integrand(0.3, 0.1, 0.2) == doctest::Approx(1.0 / 15.0));
    for (double x : {0.1, 0.4, 0.9}) {
        for (double y : {0.05, 0.5, 0.95}) CHECK(integrand(x, x, y) == 0.0);
    }
}

TEST_CASE("integrand matches a counting oracle") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 50; ++i) {
        const double p1 = u(rng), p2 = u(rng), p3 = u(rng);
        CHECK(integrand(p1, p2, p3) == doctest::Approx(counted_integrand(p1, p2, p3)).epsilon(1e-4).scale(1));
    }
}

TEST_CASE("region membership") {
    CHECK(region_of(0.1, 0.2, 0.3) == Region::A);
    CHECK(region_of(0.2, 0.1, 0.3) == Region::B);
    CHECK(region_of(0.2, 0.3, 0.1) == Region::C);
    CHECK(region_of(0.3, 0.1, 0.2) == Region::D);
    CHECK_FALSE(region_of(0.3, 0.3, 0.2).has_value());
    for (Region r : kAllRegions) CHECK(parse_region(name(r)) == r);
    CHECK(parse_region("d") == Region::D);
    CHECK_FALSE(parse_region("E").has_value());
}

TEST_CASE("resolution validation") {
    QuadratureSpec s;
    s.cells = 4;
    CHECK_THROWS_AS(region_probability(Region::A, s), ResolutionError);
    s = {};
    s.scheme = QuadratureScheme::Adaptive;
    s.tolerance = 0.0;
    CHECK_THROWS_AS(region_probability(Region::A, s), ResolutionError);
}

TEST_CASE("each region integrates to 1/24 and the total to 1/6") {
    QuadratureSpec spec;
    double total = 0.0;
    for (Region r : kAllRegions) {
        const QuadratureResult q = region_probability(r, spec);
        CHECK(q.cells == 256);
        CHECK(std::fabs(q.estimate - 1.0 / 24.0) <= 1e-4);
        CHECK(q.error < 1e-4);
        total += q.estimate;
    }
    CHECK(std::fabs(total - 1.0 / 6.0) <= 4e-4);
}

TEST_CASE("region A parts") {
    const RegionAParts p = region_a_parts();
    CHECK(std::fabs(p.first.estimate - 1.0 / 16.0) <= 1e-4);
    CHECK(std::fabs(p.second.estimate - 1.0 / 4.0) <= 1e-4);
    CHECK(std::fabs(p.third.estimate - 13.0 / 48.0) <= 1e-4);
    const QuadratureResult a = region_probability(Region::A);
    const double combined = p.first.error + p.second.error + p.third.error + a.error;
    CHECK(std::fabs(p.first.estimate + p.second.estimate - p.third.estimate - a.estimate) <=
          combined + 1e-12);
}

TEST_CASE("refinement shrinks the error estimate") {
    double prev_err = 1.0, prev_est = 0.0;
    for (std::size_t n : {16u, 32u, 64u, 128u}) {
        QuadratureSpec s;
        s.cells = n;
        const QuadratureResult q = region_probability(Region::B, s);
        CHECK(q.error < prev_err);
        if (n > 16) CHECK(std::fabs(q.estimate - prev_est) <= prev_err);
        prev_err = q.error;
        prev_est = q.estimate;
    }
}

TEST_CASE("adaptive scheme stops at the requested tolerance") {
    QuadratureSpec s;
    s.scheme = QuadratureScheme::Adaptive;
    s.tolerance = 1e-4;
    const QuadratureResult q = region_probability(Region::C, s);
    CHECK(q.error <= 1e-4);
    CHECK(q.cells < 1024);
    CHECK(std::fabs(q.estimate - 1.0 / 24.0) <= 1e-3);
}

TEST_CASE("worker count does not change the estimate") {
    QuadratureSpec one;
    one.cells = 64;
    one.workers = 1;
    QuadratureSpec four = one;
    four.workers = 4;
    CHECK(region_probability(Region::D, one).estimate ==
          region_probability(Region::D, four).estimate);
}

TEST_CASE("quadrature total agrees with Monte Carlo disagreement") {
    double total = 0.0, err = 0.0;
    for (Region r : kAllRegions) {
        const QuadratureResult q = region_probability(r);
        total += q.estimate;
        err += q.error;
    }
    SimulationConfig c;
    c.trials = 1'000'000;
    c.seed = 77;
    const SimulationResult mc = run(c);
    const double sigma = std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / c.trials);
    CHECK(std::fabs(mc.disagreement(MeasureSet::all()) - total) <= 4 * sigma + err);
}
