#include "vlab/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double coincidence_tol = 1e-9;
} // namespace

VortexConfig::VortexConfig(std::vector<DiscPoint> pts, std::vector<int> degs)
    : points(std::move(pts)), degrees(std::move(degs)) {
    if (points.size() != degrees.size())
        throw InvalidArgument("VortexConfig: points/degrees size mismatch");
    for (int d : degrees)
        if (d == 0) throw InvalidArgument("VortexConfig: zero degree");
}

VortexConfig VortexConfig::unit(std::span<const cplx> pts) {
    VortexConfig cfg;
    for (const cplx& p : pts) {
        cfg.points.emplace_back(p);
        cfg.degrees.push_back(1);
    }
    return cfg;
}

int VortexConfig::total_degree() const {
    int d = 0;
    for (int dj : degrees) d += dj;
    return d;
}

double HarmonicFunction::regular_value(cplx z) const {
    const double r = std::abs(z);
    const double theta = std::arg(z);
    double out = mean;
    double rk = 1.0;
    for (std::size_t k = 0; k < cos_coef.size(); ++k) {
        rk *= r;
        if (rk < 1e-18) break;
        const double kt = (double)(k + 1) * theta;
        out += rk * (cos_coef[k] * std::cos(kt) + sin_coef[k] * std::sin(kt));
    }
    for (const LogTerm& t : mirror_terms)
        out += t.coef * std::log(std::abs(1.0 - std::conj(t.point) * z));
    return out;
}

double HarmonicFunction::operator()(cplx z) const {
    double out = regular_value(z);
    for (const LogTerm& t : log_terms)
        out += t.coef * std::log(std::abs(z - t.point));
    return out;
}

HarmonicFunction harmonic_extension(const FourierModes& trace) {
    HarmonicFunction h;
    h.mean = trace.mean;
    h.cos_coef = trace.cos_coef;
    h.sin_coef = trace.sin_coef;
    return h;
}

HarmonicFunction harmonic_extension(const PhaseTrace& trace) {
    return harmonic_extension(fourier_analyze(trace.samples));
}

double h_half_seminorm_sq(const FourierModes& trace) {
    double s = 0.0;
    for (std::size_t k = 0; k < trace.cos_coef.size(); ++k) {
        const double a = trace.cos_coef[k];
        const double b = trace.sin_coef[k];
        s += (double)(k + 1) * (a * a + b * b);
    }
    return std::numbers::pi * s;
}

double h_half_seminorm_sq(const PhaseTrace& trace) {
    return h_half_seminorm_sq(fourier_analyze(trace.samples));
}

double dirichlet_phi0(const VortexConfig& cfg, cplx z) {
    double out = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const cplx a = cfg.points[j].z();
        out += cfg.degrees[j] *
               std::log(std::abs(z - a) / std::abs(1.0 - std::conj(a) * z));
    }
    return out;
}

HarmonicFunction neumann_phi0_tilde(const VortexConfig& cfg, const BoundaryMap& g) {
    if (cfg.total_degree() != g.degree)
        throw DegreeMismatch("neumann_phi0_tilde: total vortex degree must match the boundary degree");
    HarmonicFunction h;
    // Singular part ln|z - a| + ln|1 - conj(a) z| per unit degree carries flux 1
    // through every boundary arc element and zero boundary mean.
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const cplx a = cfg.points[j].z();
        const double d = cfg.degrees[j];
        h.log_terms.push_back({a, d});
        h.mirror_terms.push_back({a, d});
    }
    // Spectral part balancing the residual flux eta'(theta): mode k of the
    // extension r^k (A cos + B sin) has normal derivative k (A cos + B sin).
    const std::size_t kc = g.cos_coef.size();
    const std::size_t ks = g.sin_coef.size();
    const std::size_t K = std::max(kc, ks);
    h.cos_coef.assign(K, 0.0);
    h.sin_coef.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        if (k < ks) h.cos_coef[k] = g.sin_coef[k];
        if (k < kc) h.sin_coef[k] = -g.cos_coef[k];
    }
    h.mean = 0.0;
    return h;
}

double regular_part_R0(const HarmonicFunction& phi0_tilde, cplx x) {
    return phi0_tilde.regular_value(x);
}

CanonicalMap::CanonicalMap(const VortexConfig& cfg, const BoundaryMap& g, int samples)
    : cfg_(cfg) {
    for (std::size_t i = 0; i < cfg_.size(); ++i)
        for (std::size_t j = i + 1; j < cfg_.size(); ++j)
            if (std::abs(cfg_.points[i].z() - cfg_.points[j].z()) < coincidence_tol)
                throw InvalidArgument("canonical map: coincident vortex points");

    int total_abs = 0;
    for (int d : cfg_.degrees) total_abs += std::abs(d);
    const int m = std::max({samples, g.min_samples(), 32 * (total_abs + 1)});

    // Boundary mismatch g conj(prod ((z-a)/|z-a|)^d): winding zero when the
    // degrees sum to D, which unwrap_phase enforces.
    std::vector<cplx> w(m);
    for (int j = 0; j < m; ++j) {
        const double theta = two_pi * j / m;
        const cplx z = std::polar(1.0, theta);
        cplx prod = 1.0;
        for (std::size_t l = 0; l < cfg_.size(); ++l) {
            const cplx u = (z - cfg_.points[l].z());
            prod *= std::polar(1.0, cfg_.degrees[l] * std::arg(u));
        }
        w[j] = g.value(theta) * std::conj(prod);
    }
    phase_ = harmonic_extension(unwrap_phase(w));
}

cplx CanonicalMap::operator()(cplx z) const {
    cplx prod = 1.0;
    for (std::size_t l = 0; l < cfg_.size(); ++l) {
        const cplx u = z - cfg_.points[l].z();
        if (std::abs(u) < 1e-14)
            throw InvalidArgument("canonical map evaluated at a vortex point");
        prod *= std::polar(1.0, cfg_.degrees[l] * std::arg(u));
    }
    return std::polar(1.0, phase_(z)) * prod;
}

CanonicalMap canonical_harmonic_map(const VortexConfig& cfg, const BoundaryMap& g, int samples) {
    return CanonicalMap(cfg, g, samples);
}

} // namespace vlab
