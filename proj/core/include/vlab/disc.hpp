#pragma once

#include <complex>
#include <span>
#include <vector>

#include "vlab/errors.hpp"

namespace vlab {

using cplx = std::complex<double>;

// Point in the open unit disc.  The invariant re^2 + im^2 < 1 is checked at
// construction so downstream code can rely on it.
struct DiscPoint {
    double re = 0.0;
    double im = 0.0;

    DiscPoint() = default;
    DiscPoint(double re_, double im_);
    explicit DiscPoint(cplx z) : DiscPoint(z.real(), z.imag()) {}

    cplx z() const { return {re, im}; }
    double abs() const { return std::abs(z()); }
};

// Point on the unit circle, stored as an angle normalized to [0, 2pi).
struct UnitCirclePoint {
    double angle = 0.0;

    UnitCirclePoint() = default;
    explicit UnitCirclePoint(double a);

    cplx z() const { return std::polar(1.0, angle); }
};

// M_a(z) = (z + a) / (1 + conj(a) z): disc automorphism sending 0 to a.
cplx mobius(DiscPoint a, cplx z);

// Finite Blaschke product e^{i alpha} prod_j (z - a_j) / (1 - conj(a_j) z).
// Zeros may repeat.
cplx blaschke_eval(std::span<const DiscPoint> zeros, double alpha, cplx z);
cplx blaschke_eval(std::span<const cplx> zeros, double alpha, cplx z);

// d(x, y) = atanh |M_{-x}(y)|.  Symmetric and invariant under disc
// automorphisms; d(0, x) = atanh |x|.
double hyperbolic_distance(DiscPoint x, DiscPoint y);

// Winding number of a closed sampled loop about the origin, from
// principal-branch angle increments between consecutive samples (the last
// sample closes against the first).  Throws DegenerateLoopError if a sample
// is at the origin (within 1e-14) and UndersampledError if any increment
// reaches pi/2 in magnitude.
int winding_number(std::span<const cplx> loop);

} // namespace vlab
