#include "vlab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

int BoundaryMap::mode_count() const {
    return static_cast<int>(std::max(cos_coef.size(), sin_coef.size()));
}

int BoundaryMap::min_samples() const {
    return std::max(64, 16 * (std::abs(degree) + mode_count()));
}

double BoundaryMap::residual(double theta) const {
    double out = mean_phase;
    for (std::size_t k = 0; k < cos_coef.size(); ++k)
        out += cos_coef[k] * std::cos((double)(k + 1) * theta);
    for (std::size_t k = 0; k < sin_coef.size(); ++k)
        out += sin_coef[k] * std::sin((double)(k + 1) * theta);
    return out;
}

double BoundaryMap::residual_derivative(double theta) const {
    double out = 0.0;
    for (std::size_t k = 0; k < cos_coef.size(); ++k) {
        const double kk = (double)(k + 1);
        out -= kk * cos_coef[k] * std::sin(kk * theta);
    }
    for (std::size_t k = 0; k < sin_coef.size(); ++k) {
        const double kk = (double)(k + 1);
        out += kk * sin_coef[k] * std::cos(kk * theta);
    }
    return out;
}

double BoundaryMap::phase(double theta) const {
    return degree * theta + residual(theta);
}

cplx BoundaryMap::value(double theta) const {
    return std::polar(1.0, phase(theta));
}

std::vector<cplx> sample_boundary(const BoundaryMap& g, int m) {
    if (m < g.min_samples())
        throw UndersampledError("sample_boundary: need at least max(64, 16(|D|+K)) samples");
    std::vector<cplx> out(m);
    for (int j = 0; j < m; ++j)
        out[j] = g.value(two_pi * j / m);
    return out;
}

double current_density(const BoundaryMap& g, double theta) {
    return g.degree + g.residual_derivative(theta);
}

PhaseTrace unwrap_phase(std::span<const cplx> samples) {
    const int w = winding_number(samples);
    if (w != 0)
        throw DegreeMismatch("unwrap_phase: trace has nonzero winding " + std::to_string(w));
    PhaseTrace trace;
    trace.samples.resize(samples.size());
    double phi = std::arg(samples[0]);
    if (phi < 0.0) phi += two_pi;
    trace.samples[0] = phi;
    for (std::size_t j = 1; j < samples.size(); ++j) {
        phi += std::arg(samples[j] / samples[j - 1]);
        trace.samples[j] = phi;
    }
    trace.winding_offset = 0.0;
    return trace;
}

PhaseTrace relative_phase(const BoundaryMap& g, std::span<const cplx> zeros, int m) {
    if (static_cast<int>(zeros.size()) != g.degree)
        throw DegreeMismatch("relative_phase: zero count must equal the boundary degree");
    std::vector<cplx> w(m);
    for (int j = 0; j < m; ++j) {
        const double theta = two_pi * j / m;
        const cplx b = blaschke_eval(zeros, 0.0, std::polar(1.0, theta));
        w[j] = g.value(theta) * std::conj(b);
    }
    return unwrap_phase(w);
}

PhaseTrace relative_phase(const BoundaryMap& g, std::span<const DiscPoint> zeros, int m) {
    std::vector<cplx> zs(zeros.size());
    for (std::size_t j = 0; j < zeros.size(); ++j) zs[j] = zeros[j].z();
    return relative_phase(g, std::span<const cplx>(zs), m);
}

BoundaryMap blaschke_boundary(std::span<const cplx> zeros, double alpha, double tail_tol) {
    double top = 0.0;
    for (const cplx& a : zeros) {
        if (!(std::norm(a) < 1.0))
            throw InvalidArgument("blaschke_boundary: zero outside the open unit disc");
        top = std::max(top, std::abs(a));
    }
    BoundaryMap g;
    g.degree = static_cast<int>(zeros.size());
    g.mean_phase = alpha;
    if (top == 0.0) return g;

    int kmax = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(top)));
    kmax = std::clamp(kmax, 1, 1 << 16);
    g.cos_coef.resize(kmax);
    g.sin_coef.resize(kmax);
    std::vector<cplx> pw(zeros.begin(), zeros.end());
    for (cplx& p : pw) p = std::conj(p);
    std::vector<cplx> acc(pw);
    for (int k = 1; k <= kmax; ++k) {
        cplx ck = 0.0;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            if (k > 1) acc[j] *= pw[j];
            ck += acc[j];
        }
        g.cos_coef[k - 1] = 2.0 * ck.imag() / k;
        g.sin_coef[k - 1] = 2.0 * ck.real() / k;
    }
    return g;
}

} // namespace vlab
