#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "vlab/disc.hpp"
#include "vlab/mesh.hpp"

using namespace vlab;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<cplx> circle_samples(std::span<const cplx> zeros, double alpha, double radius,
                                 int n) {
    std::vector<cplx> out(n);
    for (int k = 0; k < n; ++k)
        out[k] = blaschke_eval(zeros, alpha, std::polar(radius, two_pi * k / n));
    return out;
}

} // namespace

TEST_CASE("disc point invariant") {
    CHECK_THROWS_AS(DiscPoint(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(DiscPoint(0.8, 0.7), InvalidArgument);
    CHECK(DiscPoint(0.3, -0.4).abs() == doctest::Approx(0.5));
}

TEST_CASE("mobius basics") {
    CHECK(mobius(DiscPoint(0.0, 0.0), cplx(0.3, 0.1)) == cplx(0.3, 0.1));
    CHECK(mobius(DiscPoint(0.5, 0.0), cplx(0.0, 0.0)) == cplx(0.5, 0.0));
    CHECK(std::abs(mobius(DiscPoint(0.5, 0.0), cplx(-0.5, 0.0))) < 1e-15);
}

TEST_CASE("mobius group action and boundary preservation") {
    std::mt19937_64 gen(42);
    for (int t = 0; t < 1000; ++t) {
        const DiscPoint a(std::polar(0.95 * uniform01(gen), two_pi * uniform01(gen)));
        const DiscPoint na(-a.z());
        const cplx z = std::polar(0.999 * uniform01(gen), two_pi * uniform01(gen));
        CHECK(std::abs(mobius(a, mobius(na, z)) - z) < 1e-12);
        const cplx w = std::polar(1.0, two_pi * uniform01(gen));
        CHECK(std::abs(std::abs(mobius(a, w)) - 1.0) < 1e-12);
    }
}

TEST_CASE("blaschke evaluation") {
    const cplx zeros2[] = {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    CHECK(std::abs(blaschke_eval(zeros2, 0.0, cplx(0.0, 0.2)) - cplx(-0.04, 0.0)) < 1e-15);
    const cplx half[] = {cplx(0.5, 0.0)};
    CHECK(std::abs(blaschke_eval(half, 0.0, cplx(0.5, 0.0))) < 1e-15);
    CHECK(std::abs(blaschke_eval(half, 0.0, cplx(0.0, 0.0)) - cplx(-0.5, 0.0)) < 1e-15);

    std::mt19937_64 gen(7);
    std::vector<cplx> zeros;
    for (int j = 0; j < 4; ++j)
        zeros.push_back(std::polar(0.9 * uniform01(gen), two_pi * uniform01(gen)));
    for (int t = 0; t < 200; ++t) {
        const cplx w = std::polar(1.0, two_pi * uniform01(gen));
        CHECK(std::abs(std::abs(blaschke_eval(zeros, 1.3, w)) - 1.0) < 1e-12);
    }
}

TEST_CASE("hyperbolic distance") {
    CHECK(hyperbolic_distance(DiscPoint(0, 0), DiscPoint(0, 0)) == 0.0);
    CHECK(hyperbolic_distance(DiscPoint(0.3, 0.0), DiscPoint(0.3, 0.0)) == 0.0);
    // atanh(1/2) against its power series sum_k x^(2k+1)/(2k+1)
    double series = 0.0;
    for (int k = 30; k >= 0; --k) series += std::pow(0.5, 2 * k + 1) / (2 * k + 1);
    const double d = hyperbolic_distance(DiscPoint(0, 0), DiscPoint(0.5, 0.0));
    CHECK(d == doctest::Approx(series).epsilon(1e-14));
    CHECK(d == doctest::Approx(0.5493061443340549).epsilon(1e-15));

    std::mt19937_64 gen(11);
    for (int t = 0; t < 100; ++t) {
        const DiscPoint x(std::polar(0.9 * uniform01(gen), two_pi * uniform01(gen)));
        const DiscPoint y(std::polar(0.9 * uniform01(gen), two_pi * uniform01(gen)));
        const DiscPoint a(std::polar(0.8 * uniform01(gen), two_pi * uniform01(gen)));
        const double dxy = hyperbolic_distance(x, y);
        CHECK(dxy == doctest::Approx(hyperbolic_distance(y, x)).epsilon(1e-12));
        // invariance under the disc automorphism M_a
        const DiscPoint mx(mobius(a, x.z())), my(mobius(a, y.z()));
        CHECK(dxy == doctest::Approx(hyperbolic_distance(mx, my)).epsilon(1e-9));
    }
}

TEST_CASE("winding number of plain loops") {
    std::vector<cplx> loop(256);
    for (int k = 0; k < 256; ++k) loop[k] = std::polar(1.0, 3.0 * two_pi * k / 256);
    CHECK(winding_number(loop) == 3);
    std::fill(loop.begin(), loop.end(), cplx(1.0, 0.0));
    CHECK(winding_number(loop) == 0);
    for (int k = 0; k < 256; ++k) loop[k] = std::polar(2.0, -two_pi * k / 256);
    CHECK(winding_number(loop) == -1);
}

TEST_CASE("winding number agrees with the argument-principle contour integral") {
    const cplx zeros[] = {cplx(0.5, 0.0), cplx(0.0, -0.3)};
    const auto loop = circle_samples(zeros, 0.0, 0.9, 256);
    CHECK(winding_number(loop) == 2);

    // (1/2 pi i) contour integral of B'/B over |z| = 0.9, trapezoid rule
    const int n = 4096;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx z = std::polar(0.9, two_pi * k / n);
        cplx logderiv = 0.0;
        for (const cplx& a : zeros)
            logderiv += 1.0 / (z - a) + std::conj(a) / (1.0 - std::conj(a) * z);
        acc += logderiv * (cplx(0, 1) * z) * (two_pi / n); // dz = i z dtheta
    }
    const double enclosed = (acc / (two_pi * cplx(0, 1))).real();
    CHECK(enclosed == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("winding additivity and cyclic invariance") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<cplx> za, zb;
        const int na = 1 + static_cast<int>(3 * uniform01(gen));
        const int nb = 1 + static_cast<int>(3 * uniform01(gen));
        for (int j = 0; j < na; ++j)
            za.push_back(std::polar(0.7 * uniform01(gen), two_pi * uniform01(gen)));
        for (int j = 0; j < nb; ++j)
            zb.push_back(std::polar(0.7 * uniform01(gen), two_pi * uniform01(gen)));
        const auto la = circle_samples(za, 0.4, 0.95, 512);
        const auto lb = circle_samples(zb, -1.1, 0.95, 512);
        std::vector<cplx> prod(la.size());
        for (std::size_t k = 0; k < la.size(); ++k) prod[k] = la[k] * lb[k];
        CHECK(winding_number(prod) == winding_number(la) + winding_number(lb));

        std::vector<cplx> rotated(la.begin() + 100, la.end());
        rotated.insert(rotated.end(), la.begin(), la.begin() + 100);
        CHECK(winding_number(rotated) == winding_number(la));
    }
}

TEST_CASE("winding error taxonomy") {
    std::vector<cplx> loop(256, cplx(1.0, 0.0));
    loop[17] = 0.0;
    CHECK_THROWS_AS(winding_number(loop), DegenerateLoopError);
    std::vector<cplx> coarse(4);
    for (int k = 0; k < 4; ++k) coarse[k] = std::polar(1.0, 3.0 * two_pi * k / 4);
    CHECK_THROWS_AS(winding_number(coarse), UndersampledError);
}

TEST_CASE("invalid parameters") {
    std::vector<cplx> bad = {cplx(1.2, 0.0)};
    CHECK_THROWS_AS(blaschke_eval(std::span<const cplx>(bad), 0.0, cplx(0.0, 0.0)),
                    InvalidArgument);
    CHECK(UnitCirclePoint(-0.5).angle == doctest::Approx(two_pi - 0.5));
}
