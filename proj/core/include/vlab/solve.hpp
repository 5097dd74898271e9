#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vlab/energy.hpp"
#include "vlab/mesh.hpp"

namespace vlab {

struct SolverConfig {
    // Stop when ||grad||_2 <= gradient_tol * (1 + |objective|); the objective
    // carries the 2 pi D / eps scale, so the test tightens automatically as
    // eps shrinks.
    double gradient_tol = 1e-7;
    int max_iterations = 8000;
    int memory = 10; // quasi-Newton history pairs
    double armijo_slope = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    double modulus_guard = 1e-12; // chain-rule floor, must be in [1e-14, 1e-8]
    std::uint64_t seed = 0;
    int multistart = 1;
    // Winding of the fitted core discretization at the origin; nullopt means
    // "use the degree of g".  Set 0 when the data's vortices sit away from
    // the center.
    std::optional<int> core_winding;
    double zone_radius = 0.1;
    double core_radius = 0.1; // reported-energy closure discs

    void validate() const;
};

enum class InitPreset {
    nearest_exact, // Blaschke minimizer at the excess-optimizer zeros
    harmonic,      // componentwise harmonic extension of g
    random,        // unit field with a randomized smooth phase
};

struct IterationReport {
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    bool monotone = true; // every accepted step decreased the objective
    double objective = 0.0;
    double gradient_norm = 0.0;
};

struct MinimizeResult {
    Field2D field;
    EnergyBreakdown breakdown; // reported energy of the final field
    IterationReport report;
};

// Quasi-Newton descent of the discrete functional with the boundary ring held
// at samples of g.  init must carry that ring already.
MinimizeResult minimize(const BoundaryMap& g, double eps, Field2D init,
                        const SolverConfig& cfg = {});
MinimizeResult minimize(const BoundaryMap& g, double eps, const PolarMesh& mesh,
                        InitPreset preset, const SolverConfig& cfg = {});

struct MultistartReport {
    int starts = 0;
    int converged = 0;
    double best_total = 0.0;
    double worst_total = 0.0;
    double field_spread = 0.0; // max pairwise sup distance between final fields
};

// cfg.multistart random initializations (seeds seed, seed+1, ...); returns the
// lowest-energy result and, via report, how much the basins disagreed.
MinimizeResult minimize_multistart(const BoundaryMap& g, double eps, const PolarMesh& mesh,
                                   const SolverConfig& cfg, MultistartReport* report = nullptr);

struct SweepEntry {
    double eps = 0.0;
    EnergyBreakdown breakdown;
    double excess = 0.0; // total - 2 pi |D| / eps
    IterationReport report;
    std::string error; // empty on success
    std::shared_ptr<Field2D> field;
};

// Solves along a strictly decreasing eps schedule, warm-starting each entry
// from the previous field.  Failures are recorded per entry and the sweep
// continues from the last good field.
std::vector<SweepEntry> continuation_sweep(const BoundaryMap& g, std::span<const double> eps_list,
                                           const PolarMesh& mesh, const SolverConfig& cfg = {},
                                           const Field2D* start = nullptr);

} // namespace vlab
