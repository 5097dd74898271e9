#include "vlab/disc.hpp"

#include <cmath>
#include <numbers>

namespace vlab {

DiscPoint::DiscPoint(double re_, double im_) : re(re_), im(im_) {
    if (!(re * re + im * im < 1.0))
        throw InvalidArgument("DiscPoint outside the open unit disc");
}

UnitCirclePoint::UnitCirclePoint(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    angle = std::fmod(a, two_pi);
    if (angle < 0.0) angle += two_pi;
}

cplx mobius(DiscPoint a, cplx z) {
    const cplx az = a.z();
    return (z + az) / (1.0 + std::conj(az) * z);
}

cplx blaschke_eval(std::span<const cplx> zeros, double alpha, cplx z) {
    cplx out = std::polar(1.0, alpha);
    for (const cplx& a : zeros) {
        if (!(std::norm(a) < 1.0))
            throw InvalidArgument("Blaschke zero outside the open unit disc");
        out *= (z - a) / (1.0 - std::conj(a) * z);
    }
    return out;
}

cplx blaschke_eval(std::span<const DiscPoint> zeros, double alpha, cplx z) {
    cplx out = std::polar(1.0, alpha);
    for (const DiscPoint& a : zeros)
        out *= (z - a.z()) / (1.0 - std::conj(a.z()) * z);
    return out;
}

double hyperbolic_distance(DiscPoint x, DiscPoint y) {
    const cplx num = y.z() - x.z();
    const cplx den = 1.0 - std::conj(x.z()) * y.z();
    return std::atanh(std::abs(num / den));
}

int winding_number(std::span<const cplx> loop) {
    if (loop.size() < 3)
        throw InvalidArgument("winding_number needs at least 3 samples");
    double total = 0.0;
    const double half_pi = std::numbers::pi / 2.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const cplx a = loop[k];
        const cplx b = loop[(k + 1) % loop.size()];
        if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14)
            throw DegenerateLoopError("loop sample at the origin");
        const double gap = std::arg(b / a);
        if (std::abs(gap) >= half_pi)
            throw UndersampledError("angle gap between adjacent loop samples reaches pi/2");
        total += gap;
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

} // namespace vlab
