#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vlab/boundary.hpp"
#include "vlab/harmonic.hpp"

namespace vlab {

// Which expression a value came from: the H^{1/2} seminorm of the relative
// phase, or the renormalized-energy combination.
enum class ExcessRoute { direct, formula };

struct ExcessOptions {
    int starts = 8;          // origin cluster, radius-0.5 ring, then random
    int boundary_modes = 1024;
    int max_iterations = 600; // simplex iterations per start
    double f_tol = 1e-12;
    double x_tol = 1e-10;
    std::uint64_t seed = 1234;
    ExcessRoute route = ExcessRoute::direct;
};

struct ExcessResult {
    std::vector<DiscPoint> zeros; // sorted by angle, then radius
    double value = 0.0;
    ExcessRoute route = ExcessRoute::direct;
    int starts = 0;
    int converged_starts = 0;
    double value_spread = 0.0;  // worst converged value minus best
    double argmin_spread = 0.0; // config distance from best to near-optimal starts
    int boundary_modes = 0;
};

// Squared H^{1/2} distance from g to the Blaschke trace with the given zeros,
// computed as the seminorm of the unwrapped phase of g conj(B) from `modes`
// uniform boundary samples.  Requires len(zeros) = degree of g.
double excess_direct(const BoundaryMap& g, std::span<const cplx> zeros, int modes = 1024);

// Distance to the whole degree-D Blaschke class: derivative-free simplex
// descent over the zeros, each zero parametrized as tanh(s) e^{i omega} so
// iterates stay inside the open disc.  Multistart; the spread fields report
// disagreement between near-optimal starts instead of asserting uniqueness.
ExcessResult minimize_excess(const BoundaryMap& g, int degree, const ExcessOptions& opt = {});

// Renormalized energy of a vortex configuration against boundary data g:
//   int_bnd phi0_tilde (g x g_tau) - 2 pi sum_j d_j R0(a_j)
//   - 2 pi sum_{i != j} d_i d_j ln|a_i - a_j|.
// The boundary integral is evaluated in closed form from the Fourier modes of
// g and the zeros.  Points must be pairwise distinct (min gap 1e-9).
double w_renormalized(const VortexConfig& cfg, const BoundaryMap& g);

// Data-independent part:
//   -2 pi sum_{j != k} d_j d_k ln|a_j - a_k|
//   + 2 pi sum_{j,k} d_j d_k ln|1 - conj(a_j) a_k|.
// Points must be pairwise distinct.
double w_tilde(const VortexConfig& cfg);

// The difference of the two above, written so coincident zeros stay finite
// (the pair logs cancel):
//   int_bnd phi0_tilde (g x g_tau) - 2 pi sum_j R0(a_j)
//   - 2 pi sum_{i,j} ln|1 - a_i conj(a_j)|,
// with all degrees 1.  Equals excess_direct at the same zeros.
double excess_via_formula(const BoundaryMap& g, std::span<const cplx> zeros);

struct CrossValidation {
    ExcessResult direct;
    ExcessResult formula;
    double value_gap = 0.0;  // |direct.value - formula.value|
    double argmin_gap = 0.0; // max distance between matched zeros
};

// Minimize through both routes independently and report the discrepancies.
CrossValidation cross_validate(const BoundaryMap& g, int degree, const ExcessOptions& opt = {});

} // namespace vlab
