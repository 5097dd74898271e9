#include <cmath>
#include <numbers>

#include "doctest.h"

#include "vlab/thinfilm.hpp"

using namespace vlab;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("z-independent lifts carry the planar energy and no vertical cost") {
    const double eps = 0.4;
    PolarMesh mesh(32, 64);
    BlaschkeMinimizer exact({cplx(0.0, 0.0)}, 0.0, eps);
    auto planar = sample_field(mesh, exact);
    auto stack = lift_planar(planar, 0.25, 5);

    CHECK(stack.n_z == 5);
    CHECK(stack.thickness == 0.25);
    for (int l = 0; l < stack.n_z; ++l)
        for (int i = 0; i < mesh.n_r(); ++i)
            for (int m = 0; m < mesh.n_theta(); ++m) {
                const Vec3& v = stack.at(l, i, m);
                CHECK(v[0] == planar.at(i, m).real());
                CHECK(v[1] == planar.at(i, m).imag());
                CHECK(v[2] == 0.0);
            }

    const ThinFilmBreakdown b = thin_film_energy(stack);
    CHECK(b.vertical_term == 0.0);
    // the per-layer lattice term matches the plain planar quadrature
    CHECK(b.planar_term == doctest::Approx(plain_energy(planar).total).epsilon(1e-12));
    CHECK(stack.max_out_of_plane() == 0.0);
    CHECK(stack.min_modulus() == doctest::Approx(planar.min_modulus()).epsilon(1e-12));
}

TEST_CASE("vertical differences are billed at 1/h^2") {
    PolarMesh mesh(16, 64);
    BoundaryMap g{.degree = 0, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    auto planar = sample_field(mesh, 0.5, g, [](cplx) { return cplx(1.0, 0.0); });

    auto perturbed = [&](double h) {
        Field3D stack = lift_planar(planar, h, 5);
        for (int i = 0; i < mesh.n_r(); ++i)
            for (int m = 0; m < mesh.n_theta(); ++m) {
                // interior layers tilt out of plane, faces stay flat
                stack.at(1, i, m)[2] = 0.1;
                stack.at(2, i, m)[2] = 0.2;
                stack.at(3, i, m)[2] = 0.1;
            }
        return thin_film_energy(stack);
    };
    const ThinFilmBreakdown b1 = perturbed(0.4);
    const ThinFilmBreakdown b2 = perturbed(0.2);
    CHECK(b1.vertical_term > 0.0);
    // halving h quadruples the vertical bill for identical samples
    CHECK(b2.vertical_term == doctest::Approx(4.0 * b1.vertical_term).epsilon(1e-12));
    CHECK(b1.planar_term == doctest::Approx(b2.planar_term).epsilon(1e-12));
}

TEST_CASE("constructor and input validation") {
    PolarMesh mesh(16, 64);
    CHECK_THROWS_AS(Field3D(mesh, 0.4, 0.3, 1), InvalidArgument); // needs both faces
    CHECK_THROWS_AS(Field3D(mesh, 0.4, 0.0, 5), InvalidArgument); // h > 0
    CHECK_NOTHROW(Field3D(mesh, 0.4, 0.3, 4));

    BoundaryMap g{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    SolverConfig cfg;
    cfg.max_iterations = 10;
    CHECK_THROWS_AS(
        thin_film_minimize(g, 0.4, 0.3, mesh, 3, cfg), // interior layers required
        InvalidArgument);
    CHECK_THROWS_AS(
        thin_film_minimize(g, 0.4, 0.3, mesh, 5, cfg, 0.5), // seed amplitude cap
        InvalidArgument);

    // a start whose face layer leaves the plane is rejected
    BlaschkeMinimizer exact({cplx(0.0, 0.0)}, 0.0, 0.4);
    auto stack = lift_planar(sample_field(mesh, exact), 0.3, 4);
    stack.at(0, 3, 5)[2] = 0.05;
    CHECK_THROWS_AS(thin_film_minimize(g, std::move(stack), cfg), InvalidArgument);
}

TEST_CASE("descent escapes the planar critical set when the film is thick") {
    // at h = 0.4 the out-of-plane channel is cheap enough that the degree-one
    // core pays for escaping; the minimum drops below the planar value
    const double eps = 0.3;
    const double h = 0.4;
    PolarMesh mesh(24, 64);
    BoundaryMap g{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    SolverConfig cfg;
    cfg.gradient_tol = 1e-5;
    cfg.max_iterations = 4000;
    auto res = thin_film_minimize(g, eps, h, mesh, 5, cfg);

    CHECK(res.value <= res.initial_value + 1e-12);
    CHECK(res.value < res.initial_value - 0.5); // genuinely left the plane
    CHECK(res.max_out_of_plane > 0.1);
    CHECK(res.breakdown.total() == doctest::Approx(res.value).epsilon(1e-12));
    CHECK(res.value <= 2.0 * pi / eps + 0.5); // never worse than planar physics

    // faces stayed exactly in-plane under the projected descent
    for (int i = 0; i < mesh.n_r(); ++i)
        for (int m = 0; m < mesh.n_theta(); ++m) {
            CHECK(res.field.at(0, i, m)[2] == 0.0);
            CHECK(res.field.at(res.field.n_z - 1, i, m)[2] == 0.0);
        }

    // the lateral ring still samples g on every layer boundary
    for (int m = 0; m < mesh.n_theta(); ++m)
        CHECK(std::abs(res.field.ring[m] - g.value(mesh.angle(m))) < 1e-12);
}

TEST_CASE("zero escape seed keeps the search planar") {
    // the in-plane set is invariant under the flow: u3 = 0 stays exactly 0,
    // even though the in-plane values still relax toward the lattice minimum
    const double eps = 0.3;
    PolarMesh mesh(24, 64);
    BoundaryMap g{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    SolverConfig cfg;
    cfg.gradient_tol = 1e-5;
    cfg.max_iterations = 2000;
    auto res = thin_film_minimize(g, eps, 0.4, mesh, 5, cfg, 0.0);
    CHECK(res.max_out_of_plane == 0.0);
    CHECK(res.value <= res.initial_value + 1e-12);
}
