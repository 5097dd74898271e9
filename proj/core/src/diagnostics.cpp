#include "vlab/diagnostics.hpp"

#include "vlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace vlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal(double a) {
    a = std::remainder(a, kTwoPi);
    return a;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace

int VortexDetection::total_degree() const {
    int d = 0;
    for (const auto& v : vortices) d += v.degree;
    return d;
}

double default_beta(int degree) {
    const double d = std::abs(degree);
    return std::max(0.75, std::sqrt(d / (d + 1.0)) + 0.02);
}

cplx sample_bilinear(const Field2D& field, cplx z) {
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r();
    const int nt = mesh.n_theta();

    double theta = std::atan2(z.imag(), z.real());
    if (theta < 0.0) theta += kTwoPi;
    const double t = theta / mesh.dtheta();
    int m0 = static_cast<int>(std::floor(t));
    const double wt = t - m0;
    m0 %= nt;
    const int m1 = mesh.next(m0);

    // Node-row coordinate: row i sits at s = i, the boundary ring at
    // s = n_r - 1/2.
    double s = std::abs(z) / mesh.dr() - 0.5;
    s = std::clamp(s, 0.0, nr - 0.5);

    auto row_value = [&](double srow, int m) {
        if (srow >= nr - 1) {
            const double w = (srow - (nr - 1)) / 0.5;
            return (1.0 - w) * field.at(nr - 1, m) + w * field.ring[m];
        }
        const int i0 = static_cast<int>(std::floor(srow));
        const double w = srow - i0;
        return (1.0 - w) * field.at(i0, m) + w * field.at(i0 + 1, m);
    };
    return (1.0 - wt) * row_value(s, m0) + wt * row_value(s, m1);
}

VortexDetection detect_vortices(const Field2D& field, double beta) {
    if (!(beta > 1.0 / std::numbers::sqrt2 && beta < 1.0))
        throw InvalidArgument("detect_vortices: beta must lie in (1/sqrt(2), 1)");
    field.require_finite();

    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r();
    const int nt = mesh.n_theta();

    VortexDetection out;
    out.beta = beta;

    std::vector<int> label(mesh.size(), -1);
    std::vector<std::vector<std::size_t>> components;
    std::vector<std::size_t> stack;

    for (int i = 0; i < nr; ++i) {
        for (int m = 0; m < nt; ++m) {
            const std::size_t seed = mesh.index(i, m);
            if (label[seed] >= 0 || std::abs(field.values[seed]) >= beta) continue;
            const int id = static_cast<int>(components.size());
            components.emplace_back();
            label[seed] = id;
            stack.assign(1, seed);
            while (!stack.empty()) {
                const std::size_t n = stack.back();
                stack.pop_back();
                components[id].push_back(n);
                const int ni = static_cast<int>(n) / nt;
                const int nm = static_cast<int>(n) % nt;
                const std::size_t nbrs[4] = {
                    ni > 0 ? mesh.index(ni - 1, nm) : n,
                    ni + 1 < nr ? mesh.index(ni + 1, nm) : n,
                    mesh.index(ni, mesh.next(nm)),
                    mesh.index(ni, (nm + nt - 1) % nt),
                };
                for (std::size_t nb : nbrs) {
                    if (nb == n || label[nb] >= 0) continue;
                    if (std::abs(field.values[nb]) >= beta) continue;
                    label[nb] = id;
                    stack.push_back(nb);
                }
            }
        }
    }

    const int probe_samples = std::max(256, 2 * nt);
    for (const auto& comp : components) {
        double min_mod = std::numeric_limits<double>::infinity();
        double wsum = 0.0;
        cplx center = 0.0;
        bool near_boundary = false;
        for (std::size_t n : comp) {
            const int i = static_cast<int>(n) / nt;
            const int m = static_cast<int>(n) % nt;
            const double rho = std::abs(field.values[n]);
            min_mod = std::min(min_mod, rho);
            const double w = (beta - rho) * (beta - rho);
            wsum += w;
            center += w * mesh.node(i, m);
            if (i >= nr - 3) near_boundary = true;
        }
        center /= wsum;
        out.boundary_warning = out.boundary_warning || near_boundary;

        double span = 0.0;
        for (std::size_t n : comp) {
            const int i = static_cast<int>(n) / nt;
            const int m = static_cast<int>(n) % nt;
            span = std::max(span, std::abs(mesh.node(i, m) - center));
        }

        Vortex v;
        v.min_modulus = min_mod;
        bool found = false;
        for (int k = 0;; ++k) {
            const double radius = span + mesh.dr() * (1.0 + 0.5 * k);
            if (std::abs(center) + radius > 1.0 - 0.5 * mesh.dr()) break;
            std::vector<cplx> loop(probe_samples);
            double loop_min = std::numeric_limits<double>::infinity();
            for (int s = 0; s < probe_samples; ++s) {
                const cplx p = center + std::polar(radius, kTwoPi * s / probe_samples);
                loop[s] = sample_bilinear(field, p);
                loop_min = std::min(loop_min, std::abs(loop[s]));
            }
            if (loop_min <= beta) continue;
            v.degree = winding_number(loop);
            v.radius = radius;
            found = true;
            break;
        }
        if (!found)
            throw NumericError("detect_vortices: no probe circle with modulus above "
                               "beta fits around a low-modulus component; refine the "
                               "mesh or raise beta");
        v.center = DiscPoint(center);
        out.vortices.push_back(v);
    }

    std::sort(out.vortices.begin(), out.vortices.end(), [](const Vortex& a, const Vortex& b) {
        const double aa = std::atan2(a.center.im, a.center.re);
        const double ab = std::atan2(b.center.im, b.center.re);
        return aa != ab ? aa < ab : a.center.abs() < b.center.abs();
    });
    return out;
}

IdentityResiduals identity_residuals(const Field2D& field) {
    field.require_finite();
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r();
    const int nt = mesh.n_theta();
    const double dr = mesh.dr();
    const double dth = mesh.dtheta();
    const double eps = field.eps;
    const double lambda = 1.0 / (eps * eps) - 1.0;

    // All three residuals skip nodes within a fixed radius of a winding
    // cell.  The core profile rho ~ r^(eps d) defeats second-order stencils:
    // their truncation error there scales like h^(2 eps d - 2) and grows
    // under refinement, swamping the resolved part of the field.
    const WindingMap wm = cell_windings(field);
    std::vector<cplx> cores;
    if (wm.inner_ring != 0) cores.push_back(cplx(0.0, 0.0));
    for (int i = 0; i < nr; ++i)
        for (int m = 0; m < nt; ++m)
            if (wm.at(i, m) != 0)
                cores.push_back(std::polar((i + 1) * dr, (m + 0.5) * dth));
    constexpr double kCoreSkip = 0.15;
    auto near_core = [&](int i, int m) {
        const cplx z = std::polar(mesh.radius(i), mesh.angle(m));
        for (const cplx& c : cores)
            if (std::abs(z - c) < kCoreSkip) return true;
        return false;
    };

    // Finite-volume divergence of the supercurrent per node cell, in two
    // discretizations of the same edge current: u_a x u_b and the
    // phase-difference form 0.5 (rho_a^2 + rho_b^2) darg.
    std::vector<double> div_uv(mesh.size(), 0.0);
    std::vector<double> div_ph(mesh.size(), 0.0);

    auto phase_current = [](cplx a, cplx b) {
        const double m2 = std::norm(a) * std::norm(b);
        if (m2 < 1e-300) return 0.0;
        return 0.5 * (std::norm(a) + std::norm(b)) * std::arg(b / a);
    };
    auto deposit = [&](std::size_t na, std::size_t nb, double flux_uv, double flux_ph) {
        div_uv[na] += flux_uv;
        div_uv[nb] -= flux_uv;
        div_ph[na] += flux_ph;
        div_ph[nb] -= flux_ph;
    };

    for (int i = 0; i + 1 < nr; ++i) {
        const double face = (i + 1) * dr * dth; // radial face at r = (i+1) dr
        for (int m = 0; m < nt; ++m) {
            const cplx a = field.at(i, m);
            const cplx b = field.at(i + 1, m);
            deposit(mesh.index(i, m), mesh.index(i + 1, m), cross(a, b) / dr * face,
                    phase_current(a, b) / dr * face);
        }
    }
    {
        // Outer face of the last cell sits exactly at r = 1.  A plain
        // two-point difference lands the current at r = 1 - dr/4, an O(h)
        // bias with no opposite face to cancel against, so use the
        // second-order one-sided derivative through the boundary ring.
        const double x0 = 1.0, x1 = 1.0 - 0.5 * dr, x2 = 1.0 - 1.5 * dr;
        const double w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2));
        const double w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1));
        for (int m = 0; m < nt; ++m) {
            const cplx a1 = field.at(nr - 1, m);
            const cplx a2 = field.at(nr - 2, m);
            const cplx b = field.ring[m];
            const std::size_t n = mesh.index(nr - 1, m);
            div_uv[n] += (w1 * cross(b, a1) + w2 * cross(b, a2)) * dth;
            div_ph[n] += std::norm(b) * (w1 * std::arg(a1 / b) + w2 * std::arg(a2 / b)) * dth;
        }
    }
    for (int i = 0; i < nr; ++i) {
        const double spacing = mesh.radius(i) * dth;
        for (int m = 0; m < nt; ++m) {
            const cplx a = field.at(i, m);
            const cplx b = field.at(i, mesh.next(m));
            deposit(mesh.index(i, m), mesh.index(i, mesh.next(m)),
                    cross(a, b) / spacing * dr, phase_current(a, b) / spacing * dr);
        }
    }

    IdentityResiduals out;
    double acc_uv = 0.0, acc_ph = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double area = mesh.radius(i) * dr * dth;
        for (int m = 0; m < nt; ++m) {
            if (near_core(i, m)) continue;
            const std::size_t n = mesh.index(i, m);
            acc_uv += div_uv[n] * div_uv[n] / area;
            acc_ph += div_ph[n] * div_ph[n] / area;
        }
    }
    out.el = std::sqrt(acc_uv);
    out.current_div = std::sqrt(acc_ph);

    // Pointwise check of Lap(rho^2) = 2 eps^2 (|grad u|^2 + lambda |grad rho|^2):
    // equality a.e. for minimizers, >= 0 is the subharmonicity bound.
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < nr; ++i) {
        const double r = mesh.radius(i);
        for (int m = 0; m < nt; ++m) {
            if (near_core(i, m)) continue;
            const int mp = mesh.next(m);
            const int mm = (m + nt - 1) % nt;
            const double q0 = std::norm(field.at(i, m));
            const double qp = std::norm(field.at(i + 1, m));
            const double qm = std::norm(field.at(i - 1, m));
            const double lap =
                ((r + 0.5 * dr) * (qp - q0) - (r - 0.5 * dr) * (q0 - qm)) / (r * dr * dr) +
                (std::norm(field.at(i, mp)) - 2.0 * q0 + std::norm(field.at(i, mm))) /
                    (r * r * dth * dth);

            const cplx ur = (field.at(i + 1, m) - field.at(i - 1, m)) / (2.0 * dr);
            const cplx ut = (field.at(i, mp) - field.at(i, mm)) / (2.0 * r * dth);
            const double rr =
                (std::abs(field.at(i + 1, m)) - std::abs(field.at(i - 1, m))) / (2.0 * dr);
            const double rt =
                (std::abs(field.at(i, mp)) - std::abs(field.at(i, mm))) / (2.0 * r * dth);
            const double dens = std::norm(ur) + std::norm(ut) + lambda * (rr * rr + rt * rt);
            worst = std::min(worst, lap - 2.0 * eps * eps * dens);
        }
    }
    out.subharmonicity_min = worst;
    return out;
}

double pohozaev_residual(const Field2D& field) {
    field.require_finite();
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r();
    const int nt = mesh.n_theta();
    const double dr = mesh.dr();
    const double dth = mesh.dtheta();
    const double lambda = 1.0 / (field.eps * field.eps) - 1.0;

    // One-sided derivative at r = 1 through the ghost ring and the last two
    // node rows (offsets dr/2 and 3dr/2): second-order Lagrange weights.
    const double x0 = 1.0, x1 = 1.0 - 0.5 * dr, x2 = 1.0 - 1.5 * dr;
    const double w0 = (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2));
    const double w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1));

    double num = 0.0, den = 0.0;
    for (int m = 0; m < nt; ++m) {
        const cplx g = field.ring[m];
        const cplx ua = field.at(nr - 1, m);
        const cplx ub = field.at(nr - 2, m);
        const cplx dru = w0 * g + w1 * ua + w2 * ub;
        const double drrho = w0 * std::abs(g) + w1 * std::abs(ua) + w2 * std::abs(ub);
        const cplx gtau =
            (field.ring[mesh.next(m)] - field.ring[(m + nt - 1) % nt]) / (2.0 * dth);
        num += (std::norm(dru) - std::norm(gtau) + lambda * drrho * drrho) * dth;
        den += std::norm(gtau) * dth;
    }
    if (den < 1e-300)
        throw NumericError("pohozaev_residual: boundary data has no tangential variation");
    return num / den;
}

double hopf_cr_residual(const Field2D& field, double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("hopf_cr_residual: beta must lie in (0, 1)");
    field.require_finite();
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r();
    const int nt = mesh.n_theta();
    const double dr = mesh.dr();
    const double dth = mesh.dtheta();
    const double lambda = 1.0 / (field.eps * field.eps) - 1.0;

    // chi at the interior nodes where centered stencils exist, from Cartesian
    // derivatives assembled through the polar chain rule.
    std::vector<double> P(mesh.size(), 0.0), Q(mesh.size(), 0.0);
    std::vector<char> valid(mesh.size(), 0);
    for (int i = 1; i + 1 < nr; ++i) {
        const double r = mesh.radius(i);
        for (int m = 0; m < nt; ++m) {
            if (std::abs(field.at(i, m)) <= beta) continue;
            const int mp = mesh.next(m);
            const int mm = (m + nt - 1) % nt;
            const double c = std::cos(mesh.angle(m));
            const double s = std::sin(mesh.angle(m));

            const cplx ur = (field.at(i + 1, m) - field.at(i - 1, m)) / (2.0 * dr);
            const cplx ut = (field.at(i, mp) - field.at(i, mm)) / (2.0 * r * dth);
            const cplx ux = c * ur - s * ut;
            const cplx uy = s * ur + c * ut;
            const double rr =
                (std::abs(field.at(i + 1, m)) - std::abs(field.at(i - 1, m))) / (2.0 * dr);
            const double rt =
                (std::abs(field.at(i, mp)) - std::abs(field.at(i, mm))) / (2.0 * r * dth);
            const double rx = c * rr - s * rt;
            const double ry = s * rr + c * rt;

            const double dot = ux.real() * uy.real() + ux.imag() * uy.imag();
            const std::size_t n = mesh.index(i, m);
            P[n] = std::norm(ux) - std::norm(uy) + lambda * (rx * rx - ry * ry);
            Q[n] = -2.0 * dot - lambda * 2.0 * rx * ry;
            valid[n] = 1;
        }
    }

    double acc = 0.0;
    for (int i = 2; i + 2 < nr; ++i) {
        const double r = mesh.radius(i);
        const double area = r * dr * dth;
        for (int m = 0; m < nt; ++m) {
            const int mp = mesh.next(m);
            const int mm = (m + nt - 1) % nt;
            const std::size_t n = mesh.index(i, m);
            if (!valid[n] || !valid[mesh.index(i + 1, m)] || !valid[mesh.index(i - 1, m)] ||
                !valid[mesh.index(i, mp)] || !valid[mesh.index(i, mm)])
                continue;
            const double c = std::cos(mesh.angle(m));
            const double s = std::sin(mesh.angle(m));
            auto dx = [&](const std::vector<double>& f) {
                const double fr = (f[mesh.index(i + 1, m)] - f[mesh.index(i - 1, m)]) / (2.0 * dr);
                const double ft =
                    (f[mesh.index(i, mp)] - f[mesh.index(i, mm)]) / (2.0 * r * dth);
                return c * fr - s * ft;
            };
            auto dy = [&](const std::vector<double>& f) {
                const double fr = (f[mesh.index(i + 1, m)] - f[mesh.index(i - 1, m)]) / (2.0 * dr);
                const double ft =
                    (f[mesh.index(i, mp)] - f[mesh.index(i, mm)]) / (2.0 * r * dth);
                return s * fr + c * ft;
            };
            const double r1 = dx(P) - dy(Q);
            const double r2 = dy(P) + dx(Q);
            acc += (r1 * r1 + r2 * r2) * area;
        }
    }
    return std::sqrt(acc);
}

double equipartition_ratio(const EnergyBreakdown& b) {
    if (std::abs(b.dirichlet_term) < 1e-300)
        throw NumericError("equipartition_ratio: Dirichlet term vanishes");
    return b.modulus_term / b.dirichlet_term;
}

namespace {

void check_annulus(const VortexConfig& config, Annulus annulus, double dr,
                   const char* who) {
    if (!(annulus.r_in >= 0.0 && annulus.r_in < annulus.r_out && annulus.r_out <= 1.0))
        throw InvalidArgument(std::string(who) + ": need 0 <= r_in < r_out <= 1");
    const double margin = 4.0 * dr;
    for (const DiscPoint& p : config.points) {
        const double a = p.abs();
        if (a > annulus.r_in - margin && a < annulus.r_out + margin)
            throw InvalidArgument(std::string(who) +
                                  ": annulus runs within 4 cells of a vortex point");
    }
}

} // namespace

double modulus_asymptotics_error(const Field2D& field, const VortexConfig& config,
                                 Annulus annulus) {
    field.require_finite();
    check_annulus(config, annulus, field.mesh.dr(), "modulus_asymptotics_error");
    const PolarMesh& mesh = field.mesh;
    double sup = 0.0;
    bool hit = false;
    for (int i = 0; i < mesh.n_r(); ++i) {
        const double r = mesh.radius(i);
        if (r < annulus.r_in || r > annulus.r_out) continue;
        for (int m = 0; m < mesh.n_theta(); ++m) {
            const double rho = std::abs(field.at(i, m));
            if (rho < 1e-300)
                throw NumericError("modulus_asymptotics_error: zero modulus inside "
                                   "the probe annulus");
            const double phi0 = dirichlet_phi0(config, mesh.node(i, m));
            sup = std::max(sup, std::abs(std::log(rho) / field.eps - phi0));
            hit = true;
        }
    }
    if (!hit)
        throw InvalidArgument("modulus_asymptotics_error: annulus contains no mesh nodes");
    return sup;
}

double compare_to_canonical(const Field2D& field, const VortexConfig& config,
                            const BoundaryMap& g, Annulus annulus) {
    field.require_finite();
    check_annulus(config, annulus, field.mesh.dr(), "compare_to_canonical");
    const CanonicalMap u0(config, g);
    const PolarMesh& mesh = field.mesh;
    double sup = 0.0;
    bool hit = false;
    for (int i = 0; i < mesh.n_r(); ++i) {
        const double r = mesh.radius(i);
        if (r < annulus.r_in || r > annulus.r_out) continue;
        for (int m = 0; m < mesh.n_theta(); ++m) {
            const cplx u = field.at(i, m);
            if (std::abs(u) < 1e-300)
                throw NumericError("compare_to_canonical: zero modulus inside the "
                                   "probe annulus");
            const cplx ref = u0(mesh.node(i, m));
            sup = std::max(sup, std::abs(principal(std::arg(u) - std::arg(ref))));
            hit = true;
        }
    }
    if (!hit)
        throw InvalidArgument("compare_to_canonical: annulus contains no mesh nodes");
    return sup;
}

DiagnosticsReport run_diagnostics(const Field2D& field, const BoundaryMap& g) {
    DiagnosticsReport rep;
    rep.mesh_dr = field.mesh.dr();
    rep.detection = detect_vortices(field, default_beta(g.degree));
    rep.identities = identity_residuals(field);
    rep.pohozaev = pohozaev_residual(field);
    rep.hopf_cr = hopf_cr_residual(field, rep.detection.beta);
    rep.equipartition = equipartition_ratio(energy(field));

    const double dr = field.mesh.dr();
    double inner = 0.0;
    for (const Vortex& v : rep.detection.vortices)
        inner = std::max(inner, v.center.abs() + std::max(5.0 * dr, 0.15));
    rep.annulus.r_in = rep.detection.vortices.empty() ? 0.2 : inner;
    rep.annulus.r_out = 1.0;
    rep.phi0_sup_error = quiet_nan();
    rep.canonical_sup_error = quiet_nan();
    if (rep.annulus.r_in < rep.annulus.r_out - 2.0 * dr) {
        VortexConfig cfg;
        for (const Vortex& v : rep.detection.vortices) {
            cfg.points.push_back(v.center);
            cfg.degrees.push_back(v.degree);
        }
        try {
            rep.phi0_sup_error = modulus_asymptotics_error(field, cfg, rep.annulus);
        } catch (const Error&) {
        }
        try {
            rep.canonical_sup_error = compare_to_canonical(field, cfg, g, rep.annulus);
        } catch (const Error&) {
        }
    }
    return rep;
}

} // namespace vlab
