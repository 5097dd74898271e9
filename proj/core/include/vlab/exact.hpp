#pragma once

#include <span>
#include <vector>

#include "vlab/disc.hpp"

namespace vlab {

// Modulus profile (r/R)^{D eps} of the radial minimizer with all vorticity at
// the center of the disc of radius R.  Requires D >= 1, eps in (0,1], R > 0,
// 0 <= r <= R.
double radial_profile(int degree, double eps, double big_r, double r);

// Minimal energy 2 pi D / eps over maps of boundary degree D >= 1 at
// parameter eps in (0,1].
double exact_energy(int degree, double eps);

// U(z) = |F(z)|^eps F(z)/|F(z)| for the Blaschke product F with the given
// zeros and rotation alpha: the unique minimizer for boundary data F|_{S^1}.
// Value at a zero is 0.
class BlaschkeMinimizer {
  public:
    BlaschkeMinimizer(std::vector<cplx> zeros, double alpha, double eps);

    cplx operator()(cplx z) const;
    double modulus(cplx z) const; // |F(z)|^eps

    // First derivatives at z (away from zeros): complex partials of
    // w = u1 + i u2 and the real gradient of rho = |u|.
    struct Jet {
        cplx u;
        cplx du_dx, du_dy;
        double rho;
        double drho_dx, drho_dy;
        // |d log F / dz|: both |grad log rho|/eps and |grad phase| equal this.
        double log_deriv;
    };
    Jet jet(cplx z) const;

    // Energy density |grad u|^2 + (1/eps^2 - 1) |grad rho|^2 at z; equals
    // 2 rho^2 |d log F/dz|^2.
    double energy_density(cplx z) const;

    const std::vector<cplx>& zeros() const { return zeros_; }
    double alpha() const { return alpha_; }
    double eps() const { return eps_; }
    int degree() const { return static_cast<int>(zeros_.size()); }

  private:
    std::vector<cplx> zeros_;
    double alpha_;
    double eps_;
};

// One-shot evaluation.
cplx blaschke_minimizer(std::span<const cplx> zeros, double alpha, double eps, cplx z);

} // namespace vlab
