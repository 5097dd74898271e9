#include "vlab/solve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "vlab/errors.hpp"
#include "vlab/excess.hpp"

namespace vlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double dot(std::span<const cplx> a, std::span<const cplx> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    return s;
}

double norm2(std::span<const cplx> a) { return std::sqrt(dot(a, a)); }

} // namespace

void SolverConfig::validate() const {
    if (!(gradient_tol > 0.0)) throw InvalidArgument("SolverConfig: gradient_tol must be > 0");
    if (max_iterations < 1) throw InvalidArgument("SolverConfig: max_iterations must be >= 1");
    if (memory < 1) throw InvalidArgument("SolverConfig: memory must be >= 1");
    if (!(armijo_slope > 0.0 && armijo_slope < 0.5))
        throw InvalidArgument("SolverConfig: armijo_slope must be in (0, 0.5)");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw InvalidArgument("SolverConfig: backtrack must be in (0, 1)");
    if (max_backtracks < 1) throw InvalidArgument("SolverConfig: max_backtracks must be >= 1");
    if (!(modulus_guard >= 1e-14 && modulus_guard <= 1e-8))
        throw InvalidArgument("SolverConfig: modulus_guard outside [1e-14, 1e-8]");
    if (multistart < 1) throw InvalidArgument("SolverConfig: multistart must be >= 1");
    if (!(zone_radius > 0.0 && zone_radius < 0.5))
        throw InvalidArgument("SolverConfig: zone_radius must be in (0, 0.5)");
    if (!(core_radius > 0.0 && core_radius < 1.0))
        throw InvalidArgument("SolverConfig: core_radius must be in (0, 1)");
}

MinimizeResult minimize(const BoundaryMap& g, double eps, Field2D init, const SolverConfig& cfg) {
    cfg.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("minimize: eps must be in (0, 1)");
    const PolarMesh& mesh = init.mesh;
    if (mesh.n_theta() < std::max(64, 16 * std::abs(g.degree)))
        throw InvalidArgument("minimize: n_theta below 16 |D|");
    for (int m = 0; m < mesh.n_theta(); ++m)
        if (std::abs(init.ring[m] - g.value(mesh.angle(m))) > 1e-9)
            throw InvalidArgument("minimize: init boundary ring does not sample g");
    init.eps = eps;
    init.require_finite();

    const int winding = cfg.core_winding.value_or(g.degree);
    const QuadratureScheme scheme(mesh, eps, winding, cfg.zone_radius, cfg.modulus_guard);

    MinimizeResult res{std::move(init), {}, {}};
    Field2D& x = res.field;
    IterationReport& rep = res.report;

    std::vector<cplx> grad, trial_grad;
    double f = scheme.value_and_gradient(x, grad);
    ++rep.evaluations;

    std::deque<std::vector<cplx>> mem_s, mem_y;
    std::vector<double> mem_rho;
    std::vector<cplx> dirn(x.values.size()), q;
    Field2D trial = x;
    int stuck = 0; // iterations since the gradient norm or objective improved
    double best_gnorm = std::numeric_limits<double>::infinity();
    double anchor_f = f;

    auto converged_at = [&](double fv, double gnorm) {
        return gnorm <= cfg.gradient_tol * (1.0 + std::abs(fv));
    };

    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double gnorm = norm2(grad);
        rep.gradient_norm = gnorm;
        rep.objective = f;
        rep.iterations = it;
        if (converged_at(f, gnorm)) {
            rep.converged = true;
            break;
        }

        // two-loop recursion
        q = grad;
        std::vector<double> alpha(mem_s.size());
        for (std::size_t k = mem_s.size(); k-- > 0;) {
            alpha[k] = mem_rho[k] * dot(mem_s[k], q);
            for (std::size_t n = 0; n < q.size(); ++n) q[n] -= alpha[k] * mem_y[k][n];
        }
        if (!mem_s.empty()) {
            const double gamma =
                dot(mem_s.back(), mem_y.back()) / dot(mem_y.back(), mem_y.back());
            for (cplx& v : q) v *= gamma;
        }
        for (std::size_t k = 0; k < mem_s.size(); ++k) {
            const double beta = mem_rho[k] * dot(mem_y[k], q);
            for (std::size_t n = 0; n < q.size(); ++n) q[n] += (alpha[k] - beta) * mem_s[k][n];
        }
        for (std::size_t n = 0; n < q.size(); ++n) dirn[n] = -q[n];

        double slope = dot(grad, dirn);
        if (!(slope < 0.0)) { // curvature went bad: restart from steepest descent
            mem_s.clear();
            mem_y.clear();
            mem_rho.clear();
            for (std::size_t n = 0; n < grad.size(); ++n) dirn[n] = -grad[n];
            slope = -gnorm * gnorm;
        }

        double step = mem_s.empty() ? std::min(1.0, 1.0 / std::max(gnorm, 1e-30)) : 1.0;
        double f_new = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            for (std::size_t n = 0; n < x.values.size(); ++n)
                trial.values[n] = x.values[n] + step * dirn[n];
            f_new = scheme.value_and_gradient(trial, trial_grad);
            ++rep.evaluations;
            if (std::isfinite(f_new) && f_new <= f + cfg.armijo_slope * step * slope) {
                accepted = true;
                break;
            }
            step *= cfg.backtrack;
        }
        if (!accepted) {
            if (gnorm <= 1e3 * cfg.gradient_tol * (1.0 + std::abs(f))) {
                rep.converged = true; // at the rounding floor, close enough to stationary
                break;
            }
            throw NumericError("minimize: line search stalled at gradient norm " +
                               std::to_string(gnorm));
        }
        if (f_new > f) rep.monotone = false;

        std::vector<cplx> s(x.values.size()), y(x.values.size());
        for (std::size_t n = 0; n < s.size(); ++n) {
            s[n] = trial.values[n] - x.values[n];
            y[n] = trial_grad[n] - grad[n];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * norm2(s) * norm2(y)) {
            mem_s.push_back(std::move(s));
            mem_y.push_back(std::move(y));
            mem_rho.push_back(1.0 / sy);
            if (static_cast<int>(mem_s.size()) > cfg.memory) {
                mem_s.pop_front();
                mem_y.pop_front();
                mem_rho.erase(mem_rho.begin());
            }
        }
        x.values.swap(trial.values);
        grad.swap(trial_grad);
        f = f_new;
        rep.objective = f;
        rep.gradient_norm = norm2(grad);
        rep.iterations = it + 1;
        // Stall watch: steps can keep passing the Armijo test while shaving
        // only rounding-level amounts with a frozen gradient norm (lattice
        // pinning of an off-center core does this).  No real movement in
        // either quantity over a long window at a near-floor gradient counts
        // as stationary within evaluation noise.
        const bool g_better = rep.gradient_norm < 0.99 * best_gnorm;
        const bool f_better = anchor_f - f > 1e-10 * (1.0 + std::abs(f));
        if (g_better) best_gnorm = rep.gradient_norm;
        if (g_better || f_better) {
            stuck = 0;
            anchor_f = f;
        } else if (++stuck >= 100 &&
                   rep.gradient_norm <= 1e3 * cfg.gradient_tol * (1.0 + std::abs(f))) {
            rep.converged = true;
            break;
        }
    }

    x.require_finite();
    res.breakdown = energy_report(x, cfg.core_radius).breakdown;
    return res;
}

namespace {

Field2D make_initial(const BoundaryMap& g, double eps, const PolarMesh& mesh, InitPreset preset,
                     const SolverConfig& cfg) {
    switch (preset) {
    case InitPreset::nearest_exact: {
        if (g.degree < 1) break; // no Blaschke class to project onto
        ExcessOptions opt;
        opt.seed = cfg.seed;
        const ExcessResult ex = minimize_excess(g, g.degree, opt);
        std::vector<cplx> zeros;
        zeros.reserve(ex.zeros.size());
        for (const DiscPoint& p : ex.zeros) zeros.push_back(p.z());
        Field2D out = sample_field(mesh, BlaschkeMinimizer(zeros, g.mean_phase, eps));
        for (int m = 0; m < mesh.n_theta(); ++m) out.ring[m] = g.value(mesh.angle(m));
        return out;
    }
    case InitPreset::harmonic:
    case InitPreset::random:
        break;
    }
    if (preset == InitPreset::random) return random_unit_field(mesh, eps, g, cfg.seed);
    return harmonic_extension_field(mesh, eps, g);
}

} // namespace

MinimizeResult minimize(const BoundaryMap& g, double eps, const PolarMesh& mesh,
                        InitPreset preset, const SolverConfig& cfg) {
    return minimize(g, eps, make_initial(g, eps, mesh, preset, cfg), cfg);
}

MinimizeResult minimize_multistart(const BoundaryMap& g, double eps, const PolarMesh& mesh,
                                   const SolverConfig& cfg, MultistartReport* report) {
    cfg.validate();
    std::vector<MinimizeResult> runs;
    runs.reserve(cfg.multistart);
    for (int s = 0; s < cfg.multistart; ++s) {
        SolverConfig one = cfg;
        one.seed = cfg.seed + static_cast<std::uint64_t>(s);
        runs.push_back(minimize(g, eps, random_unit_field(mesh, eps, g, one.seed), one));
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k)
        if (runs[k].breakdown.total < runs[best].breakdown.total) best = k;

    if (report) {
        report->starts = cfg.multistart;
        report->converged = 0;
        report->best_total = runs[best].breakdown.total;
        report->worst_total = runs[best].breakdown.total;
        report->field_spread = 0.0;
        for (const MinimizeResult& r : runs) {
            if (r.report.converged) ++report->converged;
            report->worst_total = std::max(report->worst_total, r.breakdown.total);
        }
        for (std::size_t a = 0; a < runs.size(); ++a)
            for (std::size_t b = a + 1; b < runs.size(); ++b) {
                double sup = 0.0;
                for (std::size_t n = 0; n < runs[a].field.values.size(); ++n)
                    sup = std::max(sup,
                                   std::abs(runs[a].field.values[n] - runs[b].field.values[n]));
                report->field_spread = std::max(report->field_spread, sup);
            }
    }
    return std::move(runs[best]);
}

std::vector<SweepEntry> continuation_sweep(const BoundaryMap& g, std::span<const double> eps_list,
                                           const PolarMesh& mesh, const SolverConfig& cfg,
                                           const Field2D* start) {
    cfg.validate();
    if (eps_list.empty()) throw InvalidArgument("continuation_sweep: empty eps schedule");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0 && eps_list[k] < 1.0))
            throw InvalidArgument("continuation_sweep: eps values must be in (0, 1)");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
            throw InvalidArgument("continuation_sweep: eps schedule must be strictly decreasing");
    }

    Field2D current = start ? *start
                            : make_initial(g, eps_list[0], mesh,
                                           g.degree != 0 ? InitPreset::nearest_exact
                                                         : InitPreset::harmonic,
                                           cfg);
    std::vector<SweepEntry> out;
    out.reserve(eps_list.size());
    for (const double eps : eps_list) {
        SweepEntry entry;
        entry.eps = eps;
        try {
            current.eps = eps;
            MinimizeResult res = minimize(g, eps, current, cfg);
            entry.breakdown = res.breakdown;
            entry.report = res.report;
            entry.excess = res.breakdown.total -
                           (g.degree == 0 ? 0.0 : two_pi * std::abs(g.degree) / eps);
            entry.field = std::make_shared<Field2D>(res.field);
            current = std::move(res.field);
        } catch (const Error& e) {
            entry.error = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace vlab
