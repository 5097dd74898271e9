#pragma once

#include <span>
#include <vector>

#include "vlab/disc.hpp"

namespace vlab {

// S^1-valued boundary data on the unit circle:
//   g(theta) = exp(i (D theta + eta(theta))),
//   eta(theta) = mean_phase + sum_{k=1..K} cos_coef[k-1] cos(k theta)
//                           + sin_coef[k-1] sin(k theta).
// D = degree (nonzero or zero integer), eta = single-valued residual phase.
struct BoundaryMap {
    int degree = 0;
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;
    double mean_phase = 0.0;

    int mode_count() const;
    // Smallest admissible sample count: max(64, 16 (|D| + K)).
    int min_samples() const;

    double residual(double theta) const;            // eta(theta)
    double residual_derivative(double theta) const; // eta'(theta)
    double phase(double theta) const;               // D theta + eta(theta)
    cplx value(double theta) const;                 // g(theta)
};

// Continuous phase along a uniformly sampled boundary loop.  samples[j] is the
// phase at theta_j = 2 pi j / m; winding_offset = 2 pi w is the total increment
// accumulated over one loop (w = 0 whenever the unwrapped quantity is
// single-valued, which unwrap_phase requires).
struct PhaseTrace {
    std::vector<double> samples;
    double winding_offset = 0.0;
};

// g(theta_j) at theta_j = 2 pi j / m.  Throws UndersampledError when
// m < max(64, 16 (|D| + K)).
std::vector<cplx> sample_boundary(const BoundaryMap& g, int m);

// g x g_tau = D + eta'(theta): the tangential current carried by g.
double current_density(const BoundaryMap& g, double theta);

// Continuous phase of a winding-free sampled loop; the representative is fixed
// by samples[0] in [0, 2pi).  Throws DegreeMismatch on nonzero winding and the
// winding_number errors on degenerate or undersampled input.
PhaseTrace unwrap_phase(std::span<const cplx> samples);

// Unwrapped phase of g conj(B) on the boundary, where B is the Blaschke
// product with the given zeros (alpha = 0).  Requires len(zeros) == D.
PhaseTrace relative_phase(const BoundaryMap& g, std::span<const DiscPoint> zeros, int m);
PhaseTrace relative_phase(const BoundaryMap& g, std::span<const cplx> zeros, int m);

// Boundary trace of the Blaschke product with the given zeros and rotation:
//   arg B(e^{i theta}) = alpha + D theta + sum_k (2/k) Im[c_k e^{ik theta}],
//   c_k = sum_j conj(a_j)^k.
// The series is truncated once max_j |a_j|^k drops below tail_tol.
BoundaryMap blaschke_boundary(std::span<const cplx> zeros, double alpha = 0.0,
                              double tail_tol = 1e-14);

} // namespace vlab
