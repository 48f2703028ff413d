#include "concord/quadrature.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "concord/agreement.hpp"
#include "concord/errors.hpp"

namespace concord {
namespace {

// Integrand and the p3 range, both allowed to depend on (p1, p2).
struct Layer {
    std::function<double(double, double, double)> f;
    std::function<std::pair<double, double>(double)> p2_range;             // given p1
    std::function<std::pair<double, double>(double, double)> p3_range;     // given p1, p2
};

// Sum of values in index order by recursive halving.
double pairwise_sum(const std::vector<double>& v, std::size_t first, std::size_t last) {
    if (last - first <= 8) {
        double s = 0.0;
        for (std::size_t i = first; i < last; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = first + (last - first) / 2;
    return pairwise_sum(v, first, mid) + pairwise_sum(v, mid, last);
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Iterated midpoint rule with n nodes per axis; p1 on (0, 1), p2 and p3 on
// ranges that may depend on the outer variables.
double iterated_midpoint(const Layer& layer, std::size_t n, unsigned workers) {
    std::vector<double> slices(n, 0.0);
    const double h1 = 1.0 / static_cast<double>(n);
    auto work = [&](std::size_t first, std::size_t last) {
        std::vector<double> row(n);
        for (std::size_t i = first; i < last; ++i) {
            const double p1 = (static_cast<double>(i) + 0.5) * h1;
            const auto [lo2, hi2] = layer.p2_range(p1);
            const double h2 = (hi2 - lo2) / static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = lo2 + (static_cast<double>(j) + 0.5) * h2;
                const auto [lo3, hi3] = layer.p3_range(p1, p2);
                const double h3 = (hi3 - lo3) / static_cast<double>(n);
                double inner = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    inner += layer.f(p1, p2, lo3 + (static_cast<double>(k) + 0.5) * h3);
                }
                row[j] = inner * h3;
            }
            slices[i] = pairwise_sum(row, 0, n) * h2 * h1;
        }
    };

    const unsigned w = std::min<unsigned>(workers, static_cast<unsigned>(n));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < w; ++t) {
            pool.emplace_back(work, n * t / w, n * (t + 1) / w);
        }
    }
    return pairwise_sum(slices, 0, n);
}

QuadratureResult integrate(const Layer& layer, const QuadratureSpec& spec) {
    spec.validate();
    const unsigned workers = resolve_workers(spec.workers);
    if (spec.scheme == QuadratureScheme::MidpointGrid) {
        const double fine = iterated_midpoint(layer, spec.cells, workers);
        const double coarse = iterated_midpoint(layer, spec.cells / 2, workers);
        return {fine, std::fabs(fine - coarse), spec.cells};
    }
    std::size_t n = QuadratureSpec::kMinCells;
    double coarse = iterated_midpoint(layer, n / 2, workers);
    for (;;) {
        const double fine = iterated_midpoint(layer, n, workers);
        const double err = std::fabs(fine - coarse);
        if (err <= spec.tolerance || n * 2 > spec.max_cells) return {fine, err, n};
        coarse = fine;
        n *= 2;
    }
}

std::pair<double, double> below(double p1) { return {0.0, p1}; }
std::pair<double, double> above(double p1) { return {p1, 1.0}; }

Layer region_layer(Region r) {
    const bool p2_above = r == Region::A || r == Region::C;
    const bool p3_above = r == Region::A || r == Region::B;
    Layer layer;
    layer.f = integrand;
    layer.p2_range = p2_above ? above : below;
    layer.p3_range = [p3_above](double p1, double) { return p3_above ? above(p1) : below(p1); };
    return layer;
}

}  // namespace

std::string_view name(Region r) noexcept {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
        case Region::D: return "D";
    }
    return "?";
}

std::optional<Region> parse_region(std::string_view text) {
    if (text.size() != 1) return std::nullopt;
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
        case 'A': return Region::A;
        case 'B': return Region::B;
        case 'C': return Region::C;
        case 'D': return Region::D;
        default: return std::nullopt;
    }
}

std::optional<Region> region_of(double p1, double p2, double p3) noexcept {
    if (p1 == p2 || p1 == p3) return std::nullopt;
    if (p1 < p2) return p1 < p3 ? Region::A : Region::C;
    return p1 < p3 ? Region::B : Region::D;
}

void QuadratureSpec::validate() const {
    if (scheme == QuadratureScheme::MidpointGrid && cells < kMinCells) {
        throw ResolutionError("midpoint grid needs at least " + std::to_string(kMinCells) +
                              " cells per axis, got " + std::to_string(cells));
    }
    if (scheme == QuadratureScheme::Adaptive &&
        (!(tolerance > 0.0) || max_cells < kMinCells)) {
        throw ResolutionError("adaptive quadrature needs a positive tolerance and max_cells >= " +
                              std::to_string(kMinCells));
    }
}

double integrand(double p1, double p2, double p3) {
    // min{1, max{c_RR, c_RR*}} - max{0, min{c_RR, c_RR*}}, floored at 0
    return disagreement_window(p1, p2, p3, MeasureKind::RR, MeasureKind::RRStar).width();
}

QuadratureResult region_probability(Region region, const QuadratureSpec& spec) {
    return integrate(region_layer(region), spec);
}

RegionAParts region_a_parts(const QuadratureSpec& spec) {
    Layer first;
    first.f = [](double p1, double p2, double p3) { return p2 * p3 / p1; };
    first.p2_range = above;
    first.p3_range = [](double p1, double p2) { return std::pair{p1, p1 / p2}; };

    Layer second;
    second.f = [](double, double, double) { return 1.0; };
    second.p2_range = above;
    second.p3_range = [](double p1, double p2) { return std::pair{p1 / p2, 1.0}; };

    Layer third;
    third.f = [](double p1, double p2, double p3) {
        return 1.0 - (1.0 - p2) * (1.0 - p3) / (1.0 - p1);
    };
    third.p2_range = above;
    third.p3_range = [](double p1, double) { return above(p1); };

    return {integrate(first, spec), integrate(second, spec), integrate(third, spec)};
}

}  // namespace concord
