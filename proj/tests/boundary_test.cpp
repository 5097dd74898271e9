#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "vlab/boundary.hpp"
#include "vlab/mesh.hpp"

using namespace vlab;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("sample_boundary values and minimum sample count") {
    BoundaryMap g{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    CHECK(g.min_samples() == 64);
    CHECK_THROWS_AS(sample_boundary(g, 4), UndersampledError);

    const auto s = sample_boundary(g, 64);
    REQUIRE(s.size() == 64);
    CHECK(std::abs(s[0] - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(s[16] - cplx(0.0, 1.0)) < 1e-14);
    CHECK(std::abs(s[32] - cplx(-1.0, 0.0)) < 1e-14);
    CHECK(std::abs(s[48] - cplx(0.0, -1.0)) < 1e-14);

    BoundaryMap g2{.degree = 2, .cos_coef = {0.1}, .sin_coef = {0.0}, .mean_phase = 0.3};
    CHECK(g2.min_samples() == 64);
    const auto s2 = sample_boundary(g2, 128);
    CHECK(winding_number(s2) == 2);
    for (std::size_t j = 0; j < s2.size(); ++j)
        CHECK(std::abs(std::abs(s2[j]) - 1.0) < 1e-14);
}

TEST_CASE("current density") {
    BoundaryMap g{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    CHECK(current_density(g, 0.7) == doctest::Approx(1.0).epsilon(1e-15));

    // eta = 0.1 sin(theta): density D + 0.1 cos(theta) = 1 - 0.1 at theta = pi
    BoundaryMap gs{.degree = 1, .cos_coef = {0.0}, .sin_coef = {0.1}, .mean_phase = 0.0};
    CHECK(current_density(gs, std::numbers::pi) == doctest::Approx(0.9).epsilon(1e-14));

    // the mean of the current over the circle is the degree
    BoundaryMap gm{.degree = 3, .cos_coef = {0.2, -0.4}, .sin_coef = {0.1, 0.7},
                   .mean_phase = 1.1};
    const int n = 2048;
    double mean = 0.0;
    for (int k = 0; k < n; ++k) mean += current_density(gm, two_pi * k / n);
    mean /= n;
    CHECK(mean == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("unwrap_phase") {
    std::vector<cplx> constant(128, cplx(1.0, 0.0));
    auto tr = unwrap_phase(constant);
    CHECK(tr.winding_offset == 0.0);
    for (double v : tr.samples) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

    const int m = 256;
    std::vector<cplx> wiggly(m);
    for (int j = 0; j < m; ++j)
        wiggly[j] = std::polar(1.0, 0.3 * std::sin(two_pi * j / m));
    tr = unwrap_phase(wiggly);
    CHECK(tr.winding_offset == 0.0);
    for (int j = 0; j < m; ++j)
        CHECK(tr.samples[j] == doctest::Approx(0.3 * std::sin(two_pi * j / m)).epsilon(1e-10));
    for (int j = 0; j < m; ++j)
        CHECK(std::abs(std::polar(1.0, tr.samples[j]) - wiggly[j]) < 1e-12);

    // representative fixed by the first sample
    std::vector<cplx> shifted(m);
    for (int j = 0; j < m; ++j) shifted[j] = wiggly[j] * std::polar(1.0, -1.0);
    tr = unwrap_phase(shifted);
    CHECK(tr.samples[0] >= 0.0);
    CHECK(tr.samples[0] < two_pi);
    CHECK(tr.samples[0] == doctest::Approx(two_pi - 1.0).epsilon(1e-12));

    std::vector<cplx> winding(m);
    for (int j = 0; j < m; ++j) winding[j] = std::polar(1.0, two_pi * j / m);
    CHECK_THROWS_AS(unwrap_phase(winding), DegreeMismatch);
}

TEST_CASE("relative phase strips a Blaschke trace to a constant") {
    const cplx zeros[] = {cplx(0.3, 0.0), cplx(-0.2, 0.4)};
    BoundaryMap g = blaschke_boundary(zeros, 0.7);
    auto tr = relative_phase(g, std::span<const cplx>(zeros), 512);
    CHECK(tr.winding_offset == 0.0);
    for (double v : tr.samples)
        CHECK(v == doctest::Approx(tr.samples[0]).epsilon(1e-9));

    // e^{i theta} against the Blaschke product vanishing at 0: ratio is 1
    BoundaryMap id{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    const cplx origin[] = {cplx(0.0, 0.0)};
    tr = relative_phase(id, std::span<const cplx>(origin), 256);
    for (double v : tr.samples) CHECK(std::abs(v) < 1e-12);

    // residual 0.2 cos(theta) survives unchanged
    BoundaryMap gc{.degree = 1, .cos_coef = {0.2}, .sin_coef = {}, .mean_phase = 0.0};
    tr = relative_phase(gc, std::span<const cplx>(origin), 256);
    for (std::size_t j = 0; j < tr.samples.size(); ++j) {
        const double theta = two_pi * j / tr.samples.size();
        CHECK(tr.samples[j] == doctest::Approx(0.2 * std::cos(theta)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(relative_phase(gc, std::span<const cplx>(zeros), 256), DegreeMismatch);
}

TEST_CASE("blaschke_boundary reproduces the true boundary trace") {
    std::mt19937_64 gen(5);
    for (int t = 0; t < 8; ++t) {
        std::vector<cplx> zeros;
        const int d = 1 + static_cast<int>(3 * uniform01(gen));
        for (int j = 0; j < d; ++j)
            zeros.push_back(std::polar(0.85 * uniform01(gen), two_pi * uniform01(gen)));
        const double alpha = two_pi * uniform01(gen) - std::numbers::pi;
        const BoundaryMap g = blaschke_boundary(zeros, alpha);
        CHECK(g.degree == d);
        for (int k = 0; k < 97; ++k) {
            const double theta = two_pi * k / 97;
            const cplx direct = blaschke_eval(std::span<const cplx>(zeros), alpha,
                                              std::polar(1.0, theta));
            CHECK(std::abs(g.value(theta) - direct) < 1e-10);
        }
    }
}
