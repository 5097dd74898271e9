#pragma once

#include <span>
#include <vector>

#include "vlab/boundary.hpp"
#include "vlab/disc.hpp"
#include "vlab/fourier.hpp"

namespace vlab {

// Vortex points with integer degrees.  Coincident points are allowed where
// documented (the potentials below sum their contributions).
struct VortexConfig {
    std::vector<DiscPoint> points;
    std::vector<int> degrees;

    VortexConfig() = default;
    VortexConfig(std::vector<DiscPoint> pts, std::vector<int> degs);
    // All degrees 1.
    static VortexConfig unit(std::span<const cplx> pts);

    int total_degree() const;
    std::size_t size() const { return points.size(); }
};

// Harmonic function on the disc assembled from a boundary Fourier series and
// logarithmic terms:
//   h(z) = mean + sum_k r^k (cos_coef[k-1] cos k theta + sin_coef[k-1] sin k theta)
//        + sum_j log_terms[j].coef    * ln|z - p_j|
//        + sum_j mirror_terms[j].coef * ln|1 - conj(p_j) z|.
// Mirror terms are harmonic on the whole closed disc; log terms carry the
// singular part.
struct HarmonicFunction {
    struct LogTerm {
        cplx point;
        double coef = 0.0;
    };

    double mean = 0.0;
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;
    std::vector<LogTerm> log_terms;
    std::vector<LogTerm> mirror_terms;

    double operator()(cplx z) const;
    // Value without the log_terms sum (finite everywhere in the closed disc).
    double regular_value(cplx z) const;
};

// Harmonic extension of boundary data: r^k interpolation of the trace modes.
HarmonicFunction harmonic_extension(const FourierModes& trace);
HarmonicFunction harmonic_extension(const PhaseTrace& trace);

// Squared H^{1/2}(S^1) seminorm, pi sum_k k (a_k^2 + b_k^2).  Equals the
// Dirichlet energy of the harmonic extension.
double h_half_seminorm_sq(const FourierModes& trace);
double h_half_seminorm_sq(const PhaseTrace& trace);

// Sum_j d_j ln( |z - a_j| / |1 - conj(a_j) z| ): the potential with Dirichlet
// boundary value 0 and Delta = 2 pi sum d_j delta_{a_j}.  Strictly negative in
// the open disc when all degrees are positive, zero on the boundary.
double dirichlet_phi0(const VortexConfig& cfg, cplx z);

// Potential with Delta = 2 pi sum d_j delta_{a_j}, normal derivative
// g x g_tau = D + eta'(theta) on the boundary and zero boundary mean:
//   sum_j d_j ( ln|z - a_j| + ln|1 - conj(a_j) z| ) + (spectral part from eta).
// Requires sum d_j == degree of g (Neumann compatibility).
HarmonicFunction neumann_phi0_tilde(const VortexConfig& cfg, const BoundaryMap& g);

// R0(x) = phi0_tilde(x) - sum_j d_j ln|x - a_j|: the part that stays smooth
// across the vortex points.
double regular_part_R0(const HarmonicFunction& phi0_tilde, cplx x);

// u0(z) = e^{i phi(z)} prod_j ((z - a_j)/|z - a_j|)^{d_j} with phi harmonic,
// chosen so u0 = g on the boundary.  The additive constant in phi is pinned by
// the unwrapped trace value at theta = 0 lying in [0, 2pi).
class CanonicalMap {
  public:
    CanonicalMap(const VortexConfig& cfg, const BoundaryMap& g, int samples = 2048);

    cplx operator()(cplx z) const;
    const HarmonicFunction& phase() const { return phase_; }
    const VortexConfig& config() const { return cfg_; }

  private:
    VortexConfig cfg_;
    HarmonicFunction phase_;
};

CanonicalMap canonical_harmonic_map(const VortexConfig& cfg, const BoundaryMap& g,
                                    int samples = 2048);

} // namespace vlab
