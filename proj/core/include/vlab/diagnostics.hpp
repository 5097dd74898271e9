#pragma once

#include <vector>

#include "vlab/energy.hpp"
#include "vlab/harmonic.hpp"
#include "vlab/mesh.hpp"

namespace vlab {

struct Vortex {
    DiscPoint center;       // weighted location of the modulus dip
    double radius = 0.0;    // probe circle the degree was read on
    int degree = 0;
    double min_modulus = 0.0;
};

struct VortexDetection {
    std::vector<Vortex> vortices;
    double beta = 0.0;
    // Some low-modulus component ends within 3 cells of r = 1: degrees can
    // still be read but the field is suspect near the boundary.
    bool boundary_warning = false;

    int total_degree() const;
};

// beta = max(0.75, sqrt(D/(D+1)) + 0.02): above both 1/sqrt(2) and the
// degree-dependent floor with a little margin.
double default_beta(int degree);

// Connected components of {|u| < beta} with a degree for each, read by
// sampling u on the smallest centered circle that clears the component with
// modulus > beta everywhere on it.  Throws NumericError when no such circle
// fits inside the disc.
VortexDetection detect_vortices(const Field2D& field, double beta);

// Bilinear (r, theta) interpolation of the field; clamps r to the node range
// and uses the boundary ring beyond the last node circle.
cplx sample_bilinear(const Field2D& field, cplx z);

// All three skip nodes within 0.15 of a winding cell, where the core profile
// makes stencil truncation grow under refinement instead of shrinking.
struct IdentityResiduals {
    double el = 0.0;          // mesh L2 norm of div(u x grad u), edge currents
    double current_div = 0.0; // same divergence from rho^2 grad(phi) currents
    double subharmonicity_min = 0.0; // min of Lap(rho^2) - 2 eps^2 energy density
};

IdentityResiduals identity_residuals(const Field2D& field);

// Boundary identity: int (|d_r u|^2 - |d_tau g|^2) + (1/eps^2 - 1)(d_r rho)^2
// over the circle, normalized by int |d_tau g|^2.  Radial derivatives from a
// one-sided 3-point stencil through the ghost ring.
double pohozaev_residual(const Field2D& field);

// Discrete Cauchy-Riemann defect of the quadratic differential
//   chi = |u_x|^2 - |u_y|^2 - 2i u_x . u_y
//       + (1/eps^2 - 1)(rho_x^2 - rho_y^2 - 2i rho_x rho_y),
// which is holomorphic for minimizers.  Cells with modulus <= beta are
// excluded (differencing rho across a core amplifies rounding).
double hopf_cr_residual(const Field2D& field, double beta = 0.75);

// modulus_term / dirichlet_term.  Throws NumericError when the Dirichlet term
// vanishes.
double equipartition_ratio(const EnergyBreakdown& b);

struct Annulus {
    double r_in = 0.0;
    double r_out = 0.0;
};

// sup over annulus nodes of | ln|u| / eps - Phi0 |, Phi0 the Dirichlet
// log-potential of the configuration.  The annulus must clear every vortex
// point by at least 4 cells.
double modulus_asymptotics_error(const Field2D& field, const VortexConfig& config,
                                 Annulus annulus);

// sup over annulus nodes of the angular distance between u/|u| and the
// canonical harmonic map for (config, g).
double compare_to_canonical(const Field2D& field, const VortexConfig& config,
                            const BoundaryMap& g, Annulus annulus);

struct DiagnosticsReport {
    VortexDetection detection;
    IdentityResiduals identities;
    double pohozaev = 0.0;
    double hopf_cr = 0.0;
    double equipartition = 0.0;
    Annulus annulus;             // probe annulus; r_in >= r_out means "none fit"
    double phi0_sup_error = 0.0; // NaN when no annulus fit
    double canonical_sup_error = 0.0;
    double mesh_dr = 0.0; // scale the residuals were computed at
};

// One-stop post-solve check: detection with the default beta, all residuals,
// and the asymptotic comparisons on an automatically chosen annulus between
// the detected vortices and the boundary.
DiagnosticsReport run_diagnostics(const Field2D& field, const BoundaryMap& g);

} // namespace vlab
