#include "vlab/thinfilm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>

#include "vlab/errors.hpp"

namespace vlab {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double mod3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

} // namespace

Field3D::Field3D(PolarMesh m, double eps_in, double h, int n_z_in)
    : mesh(m), eps(eps_in), thickness(h), n_z(n_z_in) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("Field3D: eps must be in (0, 1]");
    if (!(h > 0.0)) throw InvalidArgument("Field3D: thickness must be positive");
    if (n_z < 2) throw InvalidArgument("Field3D: need at least the two face layers");
    values.assign(static_cast<std::size_t>(n_z) * mesh.size(), Vec3{0.0, 0.0, 0.0});
    ring.assign(mesh.n_theta(), cplx(0.0));
}

double Field3D::max_out_of_plane() const {
    double v = 0.0;
    for (const Vec3& u : values) v = std::max(v, std::abs(u[2]));
    return v;
}

double Field3D::min_modulus() const {
    double v = std::numeric_limits<double>::infinity();
    for (const Vec3& u : values) v = std::min(v, mod3(u));
    return v;
}

Field3D lift_planar(const Field2D& planar, double h, int n_z) {
    Field3D out(planar.mesh, planar.eps, h, n_z);
    out.ring = planar.ring;
    for (int l = 0; l < n_z; ++l)
        for (std::size_t n = 0; n < planar.values.size(); ++n)
            out.values[static_cast<std::size_t>(l) * planar.mesh.size() + n] = {
                planar.values[n].real(), planar.values[n].imag(), 0.0};
    return out;
}

namespace {

// Shared assembly: lattice edge terms per layer with trapezoid z-weights plus
// the 1/h^2 vertical differences.  grad may be null (value only); the guard
// floors |u| inside the chain rule exactly as in the planar scheme.
ThinFilmBreakdown assemble(const Field3D& f, std::vector<double>* grad, double guard) {
    const PolarMesh& mesh = f.mesh;
    const int nr = mesh.n_r();
    const int nt = mesh.n_theta();
    const int nz = f.n_z;
    const double dr = mesh.dr();
    const double dth = mesh.dtheta();
    const double dz = 1.0 / (nz - 1);
    const double lambda = 1.0 / (f.eps * f.eps) - 1.0;
    const double inv_h2 = 1.0 / (f.thickness * f.thickness);

    if (grad) grad->assign(3 * f.values.size(), 0.0);

    double planar = 0.0, vertical = 0.0;
    auto pair_term = [&](double coef, const Vec3& a, const Vec3& b, std::size_t na,
                         std::size_t nb, double& acc) {
        const Vec3 d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const double ma = mod3(a), mb = mod3(b);
        const double t = mb - ma;
        acc += coef * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + lambda * t * t);
        if (!grad) return;
        const double fa = lambda * t / std::max(ma, guard);
        const double fb = lambda * t / std::max(mb, guard);
        for (int c = 0; c < 3; ++c) {
            if (na != static_cast<std::size_t>(-1))
                (*grad)[3 * na + c] += -2.0 * coef * (d[c] + fa * a[c]);
            if (nb != static_cast<std::size_t>(-1))
                (*grad)[3 * nb + c] += 2.0 * coef * (d[c] + fb * b[c]);
        }
    };

    for (int l = 0; l < nz; ++l) {
        const double wz = (l == 0 || l == nz - 1) ? 0.5 * dz : dz;
        for (int i = 0; i + 1 < nr; ++i) {
            const double coef = wz * (i + 1) * dth;
            for (int m = 0; m < nt; ++m)
                pair_term(coef, f.at(l, i, m), f.at(l, i + 1, m), f.index(l, i, m),
                          f.index(l, i + 1, m), planar);
        }
        const double bcoef = wz * (1.0 - 0.25 * dr) * 2.0 * dth / dr;
        for (int m = 0; m < nt; ++m) {
            const Vec3 gv{f.ring[m].real(), f.ring[m].imag(), 0.0};
            pair_term(bcoef, f.at(l, nr - 1, m), gv, f.index(l, nr - 1, m),
                      static_cast<std::size_t>(-1), planar);
        }
        for (int i = 0; i < nr; ++i) {
            const double coef = wz * dr / (mesh.radius(i) * dth);
            for (int m = 0; m < nt; ++m)
                pair_term(coef, f.at(l, i, m), f.at(l, i, mesh.next(m)), f.index(l, i, m),
                          f.index(l, i, mesh.next(m)), planar);
        }
    }
    for (int l = 0; l + 1 < nz; ++l)
        for (int i = 0; i < nr; ++i) {
            const double coef = inv_h2 * mesh.radius(i) * dr * dth / dz;
            for (int m = 0; m < nt; ++m)
                pair_term(coef, f.at(l, i, m), f.at(l + 1, i, m), f.index(l, i, m),
                          f.index(l + 1, i, m), vertical);
        }

    if (grad) {
        // Faces stay in the plane: freeze their third component.
        const std::size_t layer = f.mesh.size();
        for (std::size_t n = 0; n < layer; ++n) {
            (*grad)[3 * n + 2] = 0.0;
            (*grad)[3 * ((static_cast<std::size_t>(nz - 1) * layer) + n) + 2] = 0.0;
        }
    }
    return {planar, vertical};
}

} // namespace

ThinFilmBreakdown thin_film_energy(const Field3D& field) {
    if (static_cast<int>(field.ring.size()) != field.mesh.n_theta())
        throw InvalidArgument("thin_film_energy: boundary ring size mismatch");
    return assemble(field, nullptr, 1e-12);
}

ThinFilmResult thin_film_minimize(const BoundaryMap& g, Field3D init, const SolverConfig& cfg) {
    cfg.validate();
    if (init.n_z < 4) throw InvalidArgument("thin_film_minimize: need n_z >= 4");
    const PolarMesh& mesh = init.mesh;
    for (int m = 0; m < mesh.n_theta(); ++m)
        if (std::abs(init.ring[m] - g.value(mesh.angle(m))) > 1e-9)
            throw InvalidArgument("thin_film_minimize: boundary ring does not sample g");
    const std::size_t layer = mesh.size();
    for (std::size_t n = 0; n < layer; ++n)
        if (init.values[n][2] != 0.0 ||
            init.values[static_cast<std::size_t>(init.n_z - 1) * layer + n][2] != 0.0)
            throw InvalidArgument("thin_film_minimize: face layers must be in-plane");

    ThinFilmResult res{std::move(init), 0.0, {}, 0.0, 0.0, 0.0, {}};
    Field3D& x = res.field;
    IterationReport& rep = res.report;

    auto eval = [&](const Field3D& f, std::vector<double>& grad) {
        const ThinFilmBreakdown b = assemble(f, &grad, cfg.modulus_guard);
        return b.total();
    };

    std::vector<double> grad, trial_grad;
    double fv = eval(x, grad);
    ++rep.evaluations;
    res.initial_value = fv;

    std::deque<std::vector<double>> mem_s, mem_y;
    std::vector<double> mem_rho;
    std::vector<double> dirn(grad.size()), q;
    Field3D trial = x;

    auto write_trial = [&](double step) {
        for (std::size_t n = 0; n < x.values.size(); ++n)
            for (int c = 0; c < 3; ++c)
                trial.values[n][c] = x.values[n][c] + step * dirn[3 * n + c];
    };

    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double gnorm = norm2(grad);
        rep.gradient_norm = gnorm;
        rep.objective = fv;
        rep.iterations = it;
        if (gnorm <= cfg.gradient_tol * (1.0 + std::abs(fv))) {
            rep.converged = true;
            break;
        }

        q = grad;
        std::vector<double> alpha(mem_s.size());
        for (std::size_t k = mem_s.size(); k-- > 0;) {
            alpha[k] = mem_rho[k] * dot(mem_s[k], q);
            for (std::size_t n = 0; n < q.size(); ++n) q[n] -= alpha[k] * mem_y[k][n];
        }
        if (!mem_s.empty()) {
            const double gamma =
                dot(mem_s.back(), mem_y.back()) / dot(mem_y.back(), mem_y.back());
            for (double& v : q) v *= gamma;
        }
        for (std::size_t k = 0; k < mem_s.size(); ++k) {
            const double beta = mem_rho[k] * dot(mem_y[k], q);
            for (std::size_t n = 0; n < q.size(); ++n) q[n] += (alpha[k] - beta) * mem_s[k][n];
        }
        for (std::size_t n = 0; n < q.size(); ++n) dirn[n] = -q[n];

        double slope = dot(grad, dirn);
        if (!(slope < 0.0)) {
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
            write_trial(step);
            f_new = eval(trial, trial_grad);
            ++rep.evaluations;
            if (std::isfinite(f_new) && f_new <= fv + cfg.armijo_slope * step * slope) {
                accepted = true;
                break;
            }
            step *= cfg.backtrack;
        }
        if (!accepted) {
            if (gnorm <= 1e3 * cfg.gradient_tol * (1.0 + std::abs(fv))) {
                rep.converged = true;
                break;
            }
            throw NumericError("thin_film_minimize: line search stalled at gradient norm " +
                               std::to_string(gnorm));
        }
        if (f_new > fv) rep.monotone = false;

        std::vector<double> s(dirn.size()), y(dirn.size());
        for (std::size_t n = 0; n < x.values.size(); ++n)
            for (int c = 0; c < 3; ++c)
                s[3 * n + c] = trial.values[n][c] - x.values[n][c];
        for (std::size_t n = 0; n < y.size(); ++n) y[n] = trial_grad[n] - grad[n];
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
        fv = f_new;
        rep.objective = fv;
        rep.gradient_norm = norm2(grad);
        rep.iterations = it + 1;
    }

    res.breakdown = assemble(x, nullptr, cfg.modulus_guard);
    res.value = res.breakdown.total();
    res.max_out_of_plane = x.max_out_of_plane();
    return res;
}

ThinFilmResult thin_film_minimize(const BoundaryMap& g, double eps, double h,
                                  const PolarMesh& mesh, int n_z, const SolverConfig& cfg,
                                  double escape_seed) {
    if (n_z < 4) throw InvalidArgument("thin_film_minimize: need n_z >= 4");
    if (!(escape_seed >= 0.0 && escape_seed < 0.2))
        throw InvalidArgument("thin_film_minimize: escape_seed outside [0, 0.2)");

    const MinimizeResult planar =
        minimize(g, eps, mesh, InitPreset::nearest_exact, cfg);
    Field3D start = lift_planar(planar.field, h, n_z);

    if (escape_seed > 0.0) {
        std::mt19937_64 gen(cfg.seed + 0x7f3du);
        const std::size_t layer = mesh.size();
        std::vector<double> noise(layer);
        for (double& v : noise) v = 2.0 * uniform01(gen) - 1.0;
        for (int l = 1; l + 1 < n_z; ++l) {
            const double shape = std::sin(std::numbers::pi * l / (n_z - 1.0));
            for (std::size_t n = 0; n < layer; ++n)
                start.values[static_cast<std::size_t>(l) * layer + n][2] =
                    escape_seed * shape * noise[n];
        }
    }

    ThinFilmResult res = thin_film_minimize(g, std::move(start), cfg);
    res.planar_total = planar.breakdown.total;
    return res;
}

} // namespace vlab
