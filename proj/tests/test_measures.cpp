#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "concord/measures.hpp"

using namespace concord;
using enum MeasureKind;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent closed forms written from the definitions with plain log().
double oracle(double p1, double p2, MeasureKind k) {
    switch (k) {
        case RR: return p2 / p1;
        case RRStar: return (1 - p1) / (1 - p2);
        case HR: return std::log(1 - p2) / std::log(1 - p1);
        case HRStar: return std::log(p1) / std::log(p2);
        case RD: return p2 - p1;
        case OR: return (p2 / (1 - p2)) / (p1 / (1 - p1));
    }
    return 0;
}

}  // namespace

TEST_CASE("risk pair validation") {
    CHECK_NOTHROW(RiskPair(0.0, 1.0));
    CHECK_THROWS_AS(RiskPair(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(RiskPair(0.5, 1.5), DomainError);
    CHECK_THROWS_AS(RiskPair(std::nan(""), 0.5), DomainError);
    CHECK_THROWS_AS(RiskPair::strict(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(RiskPair::strict(0.5, 1.0), DomainError);
    CHECK(RiskPair(0.3, 0.6).opposite_outcome() == RiskPair(0.7, 0.4));
    CHECK(RiskPair(0.3, 0.6).swapped_groups() == RiskPair(0.6, 0.3));
}

TEST_CASE("names round-trip") {
    for (MeasureKind k : kAllKinds) CHECK(parse_kind(name(k)) == k);
    CHECK(parse_kind("rrstar") == RRStar);
    CHECK(parse_kind("hr*") == HRStar);
    CHECK_FALSE(parse_kind("NNT").has_value());
}

TEST_CASE("published single-pair values") {
    const RiskPair men(0.7, 0.9);
    CHECK(measure(men, RR) == doctest::Approx(9.0 / 7.0).epsilon(1e-14));

    const RiskPair hcv(0.05263, 0.15);
    CHECK(std::round(measure(hcv, HR) * 1000) / 1000 == doctest::Approx(3.006));
    CHECK(std::round(measure(hcv, HRStar) * 1000) / 1000 == doctest::Approx(1.552));

    const RiskPair covid(0.009, 0.075);
    CHECK(std::round(measure(covid, HR) * 100) / 100 == doctest::Approx(8.62));

    const RiskPair women(0.2, 0.3);
    const MeasureVector v = measure_vector(women);
    CHECK(v[RR] == doctest::Approx(1.5));
    CHECK(std::round(v[OR] * 100) / 100 == doctest::Approx(1.71));
    CHECK(v[RD] == doctest::Approx(0.1));
    CHECK(v[RRStar] == doctest::Approx(8.0 / 7.0));

    const RiskPair mel(0.00384, 0.0083);
    CHECK(std::round(measure(mel, RR) * 100) / 100 == doctest::Approx(2.16));
    CHECK(std::round(measure(mel, HRStar) * 1000) / 1000 == doctest::Approx(1.161));
}

TEST_CASE("equal risks give the null value") {
    for (double x : {1e-6, 0.1, 0.5, 0.9, 1 - 1e-6}) {
        const MeasureVector v = measure_vector(RiskPair(x, x));
        for (MeasureKind k : kAllKinds) CHECK(v[k] == doctest::Approx(null_value(k)));
    }
}

TEST_CASE("boundary risks take one-sided limits") {
    CHECK(measure(RiskPair(0.0, 0.3), RR) == kInf);
    CHECK(measure(RiskPair(0.3, 0.0), RR) == 0.0);
    CHECK(measure(RiskPair(0.3, 1.0), RRStar) == kInf);
    CHECK(measure(RiskPair(0.0, 0.3), OR) == kInf);
    CHECK(measure(RiskPair(0.3, 1.0), HR) == kInf);
    CHECK(measure(RiskPair(0.0, 0.3), HRStar) == kInf);
    CHECK(measure(RiskPair(0.0, 1.0), RD) == 1.0);
    CHECK_THROWS_AS(measure(RiskPair(0.0, 0.0), RR), UndefinedMeasure);
    CHECK_THROWS_AS(measure(RiskPair(1.0, 1.0), HR), UndefinedMeasure);
}

TEST_CASE("measures match an independent oracle on random strict pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-6, 1 - 1e-6);
    for (int i = 0; i < 20000; ++i) {
        const double a = u(rng), b = u(rng);
        const MeasureVector v = measure_vector(RiskPair(a, b));
        for (MeasureKind k : kAllKinds) {
            CHECK(v[k] == doctest::Approx(oracle(a, b, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("algebraic identities") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(1e-4, 1 - 1e-4);
    for (int i = 0; i < 20000; ++i) {
        const RiskPair p(u(rng), u(rng));
        const MeasureVector v = measure_vector(p);

        // OR = RR * RR*
        CHECK(std::fabs(v[OR] - v[RR] * v[RRStar]) <= 1e-12 * v[OR]);

        // Complementing the outcome and exchanging groups swaps RR with RR*
        // and HR with HR*, and leaves RD and OR alone.
        const MeasureVector w = measure_vector(p.opposite_outcome().swapped_groups());
        CHECK(w[RR] == doctest::Approx(v[RRStar]).epsilon(1e-12));
        CHECK(w[RRStar] == doctest::Approx(v[RR]).epsilon(1e-12));
        CHECK(w[HR] == doctest::Approx(v[HRStar]).epsilon(1e-10));
        CHECK(w[HRStar] == doctest::Approx(v[HR]).epsilon(1e-10));
        CHECK(w[RD] == doctest::Approx(v[RD]).epsilon(1e-12));
        CHECK(w[OR] == doctest::Approx(v[OR]).epsilon(1e-12));

        // Complementing the outcome alone inverts RR*.
        CHECK(measure(p.opposite_outcome(), RR) * v[RRStar] == doctest::Approx(1.0));

        if (std::fabs(v[RR] * v[RRStar] - 1) > 1e-6) {
            const double rd = (v[RR] - 1) * (v[RRStar] - 1) / (v[RR] * v[RRStar] - 1);
            CHECK(rd == doctest::Approx(v[RD]).epsilon(1e-8).scale(1));
        }
    }
}

TEST_CASE("every measure sits on the same side of its null") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(1e-6, 1 - 1e-6);
    for (int i = 0; i < 20000; ++i) {
        const double a = u(rng), b = u(rng);
        if (a == b) continue;
        const MeasureVector v = measure_vector(RiskPair(a, b));
        for (MeasureKind k : kAllKinds) {
            if (b > a) CHECK(v[k] > null_value(k));
            else CHECK(v[k] < null_value(k));
        }
    }
}

TEST_CASE("derived measures") {
    const DerivedMeasures same = derived_measures(RiskPair(0.3, 0.3));
    CHECK(same.cp_generative.value == 0.0);
    CHECK(same.cp_preventative.value == 0.0);
    CHECK(same.prob_necessity.value == 0.0);
    CHECK(same.nnt.value == kInf);

    const DerivedMeasures d = derived_measures(RiskPair(0.2, 0.6));
    CHECK(d.cp_generative.value == doctest::Approx(0.5));
    CHECK(d.prob_necessity.value == doctest::Approx(2.0 / 3.0));
    CHECK((1 - d.prob_necessity.value) * (1 - d.cp_preventative.value) == doctest::Approx(1.0));
    CHECK(d.prob_sufficiency.value == d.cp_generative.value);
    CHECK(d.pns.value == doctest::Approx(0.4));
    CHECK(d.nnt.value == doctest::Approx(2.5));
    CHECK(d.vaccine_efficacy.value == d.cp_preventative.value);
    CHECK(d.cp_preventative.orientation == Orientation::Inverse);
    CHECK(d.vaccine_efficacy.orientation == Orientation::Inverse);
    CHECK(d.cp_generative.orientation == Orientation::Direct);

    CHECK_THROWS_AS(derived_measures(RiskPair(0.0, 0.5)), DomainError);
}

TEST_CASE("(1 - PN)(1 - CPp) = 1 on random pairs") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(1e-3, 1 - 1e-3);
    for (int i = 0; i < 5000; ++i) {
        const DerivedMeasures d = derived_measures(RiskPair(u(rng), u(rng)));
        CHECK((1 - d.prob_necessity.value) * (1 - d.cp_preventative.value) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("generalised relative risk ratio") {
    CHECK(grrr(RiskPair(0.7, 0.9)) == doctest::Approx(2.0 / 3.0));
    CHECK(grrr(RiskPair(0.9, 0.7)) == doctest::Approx(0.7 / 0.9 - 1));
    CHECK(grrr(RiskPair(0.4, 0.4)) == 0.0);
    // Continuous across exposed == control.
    for (double x : {0.05, 0.4, 0.95}) {
        CHECK(std::fabs(grrr(RiskPair(x, x + 1e-9))) < 1e-7);
        CHECK(std::fabs(grrr(RiskPair(x, x - 1e-9))) < 1e-7);
    }
}
