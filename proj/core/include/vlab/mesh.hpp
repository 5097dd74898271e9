#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "vlab/boundary.hpp"
#include "vlab/disc.hpp"
#include "vlab/exact.hpp"

namespace vlab {

// Staggered polar grid on the unit disc.  Radial nodes sit at
// r_i = (i + 1/2) dr with dr = 1/n_r, so no node lands on r = 0; angles are
// theta_m = 2 pi m / n_theta; boundary samples live on a ghost ring at r = 1.
class PolarMesh {
  public:
    // degree_hint widens the angular-resolution floor: n_theta >= 16 |D|.
    PolarMesh(int n_r, int n_theta, int degree_hint = 1);

    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    double dr() const { return dr_; }
    double dtheta() const { return dtheta_; }

    double radius(int i) const { return (i + 0.5) * dr_; }
    double angle(int m) const { return m * dtheta_; }
    cplx node(int i, int m) const;

    std::size_t size() const { return static_cast<std::size_t>(n_r_) * n_theta_; }
    std::size_t index(int i, int m) const {
        return static_cast<std::size_t>(i) * n_theta_ + m;
    }
    // Successor along the ring, wrapping.
    int next(int m) const { return m + 1 == n_theta_ ? 0 : m + 1; }

  private:
    int n_r_, n_theta_;
    double dr_, dtheta_;
};

// R^2-valued samples at the mesh nodes plus the fixed S^1-valued boundary
// ring.  Interior values are row-major in (i, m).
struct Field2D {
    PolarMesh mesh;
    double eps = 0.0;
    std::vector<cplx> values;
    std::vector<cplx> ring;

    Field2D(PolarMesh m, double eps_in);

    cplx& at(int i, int m) { return values[mesh.index(i, m)]; }
    const cplx& at(int i, int m) const { return values[mesh.index(i, m)]; }

    double min_modulus() const;
    double max_modulus() const;
    // Throws NumericError if any value or ring sample is not finite.
    void require_finite() const;
};

// Interior values from an arbitrary pointwise map, ring from g.
Field2D sample_field(const PolarMesh& mesh, double eps, const BoundaryMap& g,
                     const std::function<cplx(cplx)>& f);

// Samples of the closed-form minimizer; the ring carries its own boundary
// trace (the Blaschke product on the circle).
Field2D sample_field(const PolarMesh& mesh, const BlaschkeMinimizer& exact);

// Componentwise harmonic extension of g: a smooth vortex-free start.
Field2D harmonic_extension_field(const PolarMesh& mesh, double eps, const BoundaryMap& g);

// Unit-modulus field whose phase is the harmonic-extension phase plus a
// band-limited random perturbation vanishing at the boundary; ring from g.
Field2D random_unit_field(const PolarMesh& mesh, double eps, const BoundaryMap& g,
                          std::uint64_t seed);

// mt19937_64 output is pinned by the standard; the shift-scale below gives
// reproducible uniforms where std::uniform_real_distribution would not.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// CSV dump "r,theta,u1,u2": interior nodes row-major, then the ring at r = 1.
void write_field_csv(const Field2D& field, const std::string& path);
Field2D read_field_csv(const std::string& path, double eps);

} // namespace vlab
