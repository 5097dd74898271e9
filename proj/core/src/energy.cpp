#include "vlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vlab/errors.hpp"

namespace vlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce to (-pi, pi].
double principal(double a) {
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a <= 0.0) a += two_pi;
    return a - std::numbers::pi;
}

} // namespace

bool WindingMap::any() const {
    if (inner_ring != 0) return true;
    return std::any_of(band.begin(), band.end(), [](int w) { return w != 0; });
}

WindingMap cell_windings(const Field2D& field) {
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r(), nt = mesh.n_theta();
    WindingMap out;
    out.n_theta = nt;
    out.band.assign(static_cast<std::size_t>(nr) * nt, 0);

    auto arg_at = [&](int i, int m) {
        return std::arg(i == nr ? field.ring[m] : field.at(i, m));
    };
    for (int i = 0; i < nr; ++i)
        for (int m = 0; m < nt; ++m) {
            const int m1 = mesh.next(m);
            const double a00 = arg_at(i, m), a01 = arg_at(i, m1);
            const double a10 = arg_at(i + 1, m), a11 = arg_at(i + 1, m1);
            // counterclockwise around the plaquette, matching inner_ring
            const double tot = principal(a10 - a00) + principal(a11 - a10) +
                               principal(a01 - a11) + principal(a00 - a01);
            out.band[mesh.index(i, m)] = static_cast<int>(std::lround(tot / two_pi));
        }
    double tot = 0.0;
    for (int m = 0; m < nt; ++m)
        tot += principal(arg_at(0, mesh.next(m)) - arg_at(0, m));
    out.inner_ring = static_cast<int>(std::lround(tot / two_pi));
    return out;
}

namespace {

struct Accum {
    double dirichlet = 0.0, modulus = 0.0, flux = 0.0;
};

// Edge sweep shared by the plain and closure paths.  membership == nullptr
// means every node is outside the vortex regions.  Interior-interior edges of
// a region are dropped; crossing edges keep half weight and contribute the
// normal flux of rho^2 through the dual face (which has exactly the edge's
// plain coefficient).
Accum edge_sweep(const Field2D& field, const std::vector<char>* membership) {
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r(), nt = mesh.n_theta();
    const double dr = mesh.dr(), dth = mesh.dtheta();
    const double lambda = 1.0 / (field.eps * field.eps) - 1.0;

    Accum acc;
    auto inside = [&](int i, int m) {
        return membership && (*membership)[mesh.index(i, m)] != 0;
    };
    auto add_edge = [&](cplx ua, cplx ub, double coef, bool in_a, bool in_b) {
        if (in_a && in_b) return;
        const double ra = std::abs(ua), rb = std::abs(ub);
        const double w = (in_a != in_b) ? 0.5 : 1.0;
        acc.dirichlet += w * coef * std::norm(ub - ua);
        acc.modulus += w * lambda * coef * (rb - ra) * (rb - ra);
        if (in_a != in_b) acc.flux += (in_a ? 1.0 : -1.0) * coef * (rb * rb - ra * ra);
    };

    for (int i = 0; i + 1 < nr; ++i) {
        const double coef = (i + 1) * dth; // rbar dtheta / dr, rbar = (i+1) dr
        for (int m = 0; m < nt; ++m)
            add_edge(field.at(i, m), field.at(i + 1, m), coef, inside(i, m), inside(i + 1, m));
    }
    const double coef_b = (1.0 - dr / 4.0) * 2.0 * dth / dr;
    for (int m = 0; m < nt; ++m)
        add_edge(field.at(nr - 1, m), field.ring[m], coef_b, inside(nr - 1, m), false);
    for (int i = 0; i < nr; ++i) {
        const double coef = dr / (mesh.radius(i) * dth);
        for (int m = 0; m < nt; ++m) {
            const int m1 = mesh.next(m);
            add_edge(field.at(i, m), field.at(i, m1), coef, inside(i, m), inside(i, m1));
        }
    }
    return acc;
}

EnergyBreakdown pack(const Accum& acc, double eps) {
    EnergyBreakdown out;
    out.dirichlet_term = acc.dirichlet;
    out.modulus_term = acc.modulus;
    out.total = out.dirichlet_term + out.modulus_term;
    out.eps = eps;
    return out;
}

} // namespace

EnergyBreakdown plain_energy(const Field2D& field) {
    field.require_finite();
    return pack(edge_sweep(field, nullptr), field.eps);
}

EnergyReport energy_report(const Field2D& field, double core_radius) {
    field.require_finite();
    if (!(core_radius > 0.0 && core_radius < 1.0))
        throw InvalidArgument("energy_report: core_radius must be in (0,1)");
    const PolarMesh& mesh = field.mesh;
    const int nr = mesh.n_r(), nt = mesh.n_theta();
    const double eps = field.eps;

    const WindingMap winds = cell_windings(field);
    std::vector<cplx> centers;
    if (winds.inner_ring != 0) centers.emplace_back(0.0, 0.0);
    for (int i = 0; i < nr; ++i)
        for (int m = 0; m < nt; ++m)
            if (winds.at(i, m) != 0)
                centers.push_back(std::polar((i + 1) * mesh.dr(), (m + 0.5) * mesh.dtheta()));

    EnergyReport report;
    if (centers.empty()) {
        report.breakdown = pack(edge_sweep(field, nullptr), eps);
        return report;
    }

    std::vector<char> in(mesh.size(), 0);
    bool contact = false;
    for (int i = 0; i < nr; ++i)
        for (int m = 0; m < nt; ++m) {
            const cplx z = mesh.node(i, m);
            for (const cplx& c : centers)
                if (std::norm(z - c) <= core_radius * core_radius) {
                    in[mesh.index(i, m)] = 1;
                    if (i == nr - 1) contact = true;
                    break;
                }
        }

    // Merge overlapping core discs to count regions.
    std::vector<std::size_t> parent(centers.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < centers.size(); ++a)
        for (std::size_t b = a + 1; b < centers.size(); ++b)
            if (std::abs(centers[a] - centers[b]) <= 2.0 * core_radius)
                parent[find(a)] = find(b);
    int regions = 0;
    for (std::size_t a = 0; a < centers.size(); ++a)
        if (find(a) == a) ++regions;
    report.region_count = regions;

    if (contact) {
        report.boundary_contact = true;
        report.breakdown = pack(edge_sweep(field, nullptr), eps);
        return report;
    }

    Accum acc = edge_sweep(field, &in);
    report.core_total = acc.flux / (2.0 * eps * eps);
    acc.dirichlet += report.core_total * (1.0 + eps * eps) / 2.0;
    acc.modulus += report.core_total * (1.0 - eps * eps) / 2.0;
    report.breakdown = pack(acc, eps);
    return report;
}

EnergyBreakdown energy(const Field2D& field) {
    return energy_report(field).breakdown;
}

CoreBandForm core_band_form(double r_in, double r_out, int d, double eps) {
    if (d == 0) throw InvalidArgument("core_band_form: winding must be nonzero");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("core_band_form: eps in (0,1]");
    if (!(0.0 < r_in && r_in < r_out))
        throw InvalidArgument("core_band_form: need 0 < r_in < r_out");
    const double s = std::abs(d) * eps;
    const double pa = std::pow(r_in, s), pb = std::pow(r_out, s);
    const double det = pa / pb - pb / pa;
    const double c = two_pi * std::abs(d) / eps;
    const double a1 = pb * pb - pa * pa;   // energy weight of the r^{+s} part
    const double a2 = 1.0 / (pa * pa) - 1.0 / (pb * pb);
    const double i11 = (1.0 / pb) / det, i12 = (-1.0 / pa) / det;
    const double i21 = -pb / det, i22 = pa / det;
    CoreBandForm q;
    q.qaa = c * (a1 * i11 * i11 + a2 * i21 * i21);
    q.qab = c * (a1 * i11 * i12 + a2 * i21 * i22);
    q.qbb = c * (a1 * i12 * i12 + a2 * i22 * i22);
    return q;
}

QuadratureScheme::QuadratureScheme(const PolarMesh& mesh, double eps, int core_winding,
                                   double zone_radius, double modulus_guard)
    : n_r_(mesh.n_r()), n_theta_(mesh.n_theta()), eps_(eps), guard_(modulus_guard),
      winding_(core_winding) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("QuadratureScheme: eps in (0,1]");
    if (!(modulus_guard >= 1e-14 && modulus_guard <= 1e-8))
        throw InvalidArgument("QuadratureScheme: modulus guard outside [1e-14, 1e-8]");
    lambda_ = 1.0 / (eps * eps) - 1.0;
    if (winding_ != 0) {
        if (!(zone_radius > 0.0 && zone_radius < 0.5))
            throw InvalidArgument("QuadratureScheme: zone_radius must be in (0, 0.5)");
        const int k = static_cast<int>(std::floor(zone_radius / mesh.dr() - 0.5));
        zone_k_ = std::clamp(k, 1, n_r_ / 2);
        bands_.reserve(zone_k_);
        for (int j = 1; j <= zone_k_; ++j)
            bands_.push_back(core_band_form(mesh.radius(j - 1), mesh.radius(j), winding_, eps));
    }
}

double QuadratureScheme::value(const Field2D& field) const {
    return accumulate(field, nullptr);
}

double QuadratureScheme::value_and_gradient(const Field2D& field, std::vector<cplx>& grad) const {
    grad.assign(field.values.size(), cplx(0.0, 0.0));
    return accumulate(field, &grad);
}

double QuadratureScheme::accumulate(const Field2D& field, std::vector<cplx>* grad) const {
    if (field.mesh.n_r() != n_r_ || field.mesh.n_theta() != n_theta_)
        throw InvalidArgument("QuadratureScheme: field mesh does not match");
    if (std::abs(field.eps - eps_) > 1e-15)
        throw InvalidArgument("QuadratureScheme: field eps does not match");
    const PolarMesh& mesh = field.mesh;
    const double dr = mesh.dr(), dth = mesh.dtheta();
    const int nt = n_theta_;
    const int k0 = zone_k_ < 0 ? 0 : zone_k_;

    double total = 0.0;
    auto dir = [&](cplx v) {
        const double m = std::abs(v);
        return v / std::max(m, guard_);
    };
    auto pull = [&](std::size_t idx) -> cplx& { return (*grad)[idx]; };

    // plain edge term coef (|du|^2 + lambda (drho)^2) between two interior nodes
    auto plain_pair = [&](std::size_t a, std::size_t b, double coef) {
        const cplx ua = field.values[a], ub = field.values[b];
        const cplx d = ub - ua;
        const double t = std::abs(ub) - std::abs(ua);
        total += coef * (std::norm(d) + lambda_ * t * t);
        if (grad) {
            pull(a) -= 2.0 * coef * (d + lambda_ * t * dir(ua));
            pull(b) += 2.0 * coef * (d + lambda_ * t * dir(ub));
        }
    };

    for (int i = k0; i + 1 < n_r_; ++i) {
        const double coef = (i + 1) * dth;
        for (int m = 0; m < nt; ++m)
            plain_pair(mesh.index(i, m), mesh.index(i + 1, m), coef);
    }
    const double coef_b = (1.0 - dr / 4.0) * 2.0 * dth / dr;
    for (int m = 0; m < nt; ++m) {
        const std::size_t a = mesh.index(n_r_ - 1, m);
        const cplx ua = field.values[a], ub = field.ring[m];
        const cplx d = ub - ua;
        const double t = std::abs(ub) - std::abs(ua);
        total += coef_b * (std::norm(d) + lambda_ * t * t);
        if (grad) pull(a) -= 2.0 * coef_b * (d + lambda_ * t * dir(ua));
    }
    for (int i = k0; i < n_r_; ++i) {
        const double len = (zone_k_ >= 0 && i == zone_k_) ? dr / 2.0 : dr;
        const double coef = len / (mesh.radius(i) * dth);
        for (int m = 0; m < nt; ++m)
            plain_pair(mesh.index(i, m), mesh.index(i, mesh.next(m)), coef);
    }

    if (zone_k_ < 0) return total;

    // Fitted core: band forms on the moduli carry the model's full energy.
    for (int j = 1; j <= zone_k_; ++j) {
        const CoreBandForm& q = bands_[j - 1];
        for (int m = 0; m < nt; ++m) {
            const std::size_t a = mesh.index(j - 1, m), b = mesh.index(j, m);
            const double ra = std::abs(field.values[a]), rb = std::abs(field.values[b]);
            total += (q.qaa * ra * ra + 2.0 * q.qab * ra * rb + q.qbb * rb * rb) / nt;
            if (grad) {
                pull(a) += (2.0 / nt) * (q.qaa * ra + q.qab * rb) * dir(field.values[a]);
                pull(b) += (2.0 / nt) * (q.qab * ra + q.qbb * rb) * dir(field.values[b]);
            }
        }
    }
    // Disc enclosed by the innermost ring.
    const double disc_coef = two_pi * std::abs(winding_) / (eps_ * nt);
    for (int m = 0; m < nt; ++m) {
        const std::size_t a = mesh.index(0, m);
        total += disc_coef * std::norm(field.values[a]);
        if (grad) pull(a) += 2.0 * disc_coef * field.values[a];
    }
    // Radial phase twist at plain weight; the moduli part is already in the
    // band forms, so subtract it from the plain difference.
    for (int j = 1; j <= zone_k_; ++j) {
        const double coef = j * dth;
        for (int m = 0; m < nt; ++m) {
            const std::size_t a = mesh.index(j - 1, m), b = mesh.index(j, m);
            const cplx ua = field.values[a], ub = field.values[b];
            const cplx d = ub - ua;
            const double t = std::abs(ub) - std::abs(ua);
            total += coef * (std::norm(d) - t * t);
            if (grad) {
                pull(a) += -2.0 * coef * d + 2.0 * coef * t * dir(ua);
                pull(b) += 2.0 * coef * d - 2.0 * coef * t * dir(ub);
            }
        }
    }
    // Theta differences detrended by the model twist e^{i d dtheta}; zero on
    // the model, plain-coefficient stiffness for every deviation.
    const cplx omega = std::polar(1.0, winding_ * dth);
    for (int i = 0; i <= zone_k_; ++i) {
        const double len = (i == zone_k_) ? dr / 2.0 : dr;
        const double coef = len / (mesh.radius(i) * dth);
        for (int m = 0; m < nt; ++m) {
            const std::size_t a = mesh.index(i, m), b = mesh.index(i, mesh.next(m));
            const cplx ua = field.values[a], ub = field.values[b];
            const cplx e = ub - omega * ua;
            const double t = std::abs(ub) - std::abs(ua);
            total += coef * (std::norm(e) + lambda_ * t * t);
            if (grad) {
                pull(a) += -2.0 * coef * std::conj(omega) * e - 2.0 * coef * lambda_ * t * dir(ua);
                pull(b) += 2.0 * coef * e + 2.0 * coef * lambda_ * t * dir(ub);
            }
        }
    }
    return total;
}

} // namespace vlab
