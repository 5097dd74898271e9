#pragma once

#include <array>
#include <vector>

#include "vlab/mesh.hpp"
#include "vlab/solve.hpp"

namespace vlab {

using Vec3 = std::array<double, 3>;

// R^3-valued samples on a stack of polar-grid layers over the rescaled slab
// Omega x (0, 1): layer l sits at z = l / (n_z - 1), so the faces are layers
// 0 and n_z - 1.  The lateral boundary ring carries g, independent of z and
// in-plane; the faces are constrained to the plane (third component zero).
struct Field3D {
    PolarMesh mesh;
    double eps = 0.0;
    double thickness = 0.0; // physical h before rescaling
    int n_z = 0;
    std::vector<Vec3> values; // layer-major, then row-major in (i, m)
    std::vector<cplx> ring;

    Field3D(PolarMesh m, double eps_in, double h, int n_z_in);

    std::size_t index(int l, int i, int m) const {
        return (static_cast<std::size_t>(l) * mesh.n_r() + i) * mesh.n_theta() + m;
    }
    Vec3& at(int l, int i, int m) { return values[index(l, i, m)]; }
    const Vec3& at(int l, int i, int m) const { return values[index(l, i, m)]; }

    double max_out_of_plane() const; // max |u_3| over all layers
    double min_modulus() const;
};

struct ThinFilmBreakdown {
    double planar_term = 0.0;   // trapezoid-in-z sum of the per-layer lattice energy
    double vertical_term = 0.0; // (1/h^2) vertical-difference part
    double total() const { return planar_term + vertical_term; }
};

// Rescaled slab functional on the given samples.  Exactly zero vertical part
// for z-independent fields.
ThinFilmBreakdown thin_film_energy(const Field3D& field);

// z-independent lift of a planar field; third component zero everywhere.
Field3D lift_planar(const Field2D& planar, double h, int n_z);

struct ThinFilmResult {
    Field3D field;
    double value = 0.0; // functional at the minimizer
    ThinFilmBreakdown breakdown;
    double initial_value = 0.0;  // functional at the lifted planar start
    double planar_total = 0.0;   // reported energy of the planar solve used to start
    double max_out_of_plane = 0.0;
    IterationReport report;
};

// Minimizes the rescaled slab functional: solves the planar problem first,
// lifts it, seeds a small z-odd out-of-plane perturbation (the in-plane set is
// critical, so an exactly planar start would never leave it), then runs the
// same quasi-Newton descent over the stack with the face constraint enforced
// by projection.  escape_seed is the perturbation amplitude; zero keeps the
// search in the plane.
ThinFilmResult thin_film_minimize(const BoundaryMap& g, double eps, double h,
                                  const PolarMesh& mesh, int n_z,
                                  const SolverConfig& cfg = {},
                                  double escape_seed = 0.01);

// Same descent from a caller-supplied stack (boundary ring must sample g).
ThinFilmResult thin_film_minimize(const BoundaryMap& g, Field3D init,
                                  const SolverConfig& cfg = {});

} // namespace vlab
