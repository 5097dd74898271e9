#include "vlab/mesh.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "vlab/errors.hpp"
#include "vlab/fourier.hpp"
#include "vlab/harmonic.hpp"

namespace vlab {

PolarMesh::PolarMesh(int n_r, int n_theta, int degree_hint) : n_r_(n_r), n_theta_(n_theta) {
    if (n_r < 16) throw InvalidArgument("PolarMesh: n_r must be >= 16");
    const int floor_theta = std::max(64, 16 * std::abs(degree_hint));
    if (n_theta < floor_theta)
        throw InvalidArgument("PolarMesh: n_theta below the angular-resolution floor");
    dr_ = 1.0 / n_r_;
    dtheta_ = 2.0 * std::numbers::pi / n_theta_;
}

cplx PolarMesh::node(int i, int m) const {
    return std::polar(radius(i), angle(m));
}

Field2D::Field2D(PolarMesh m, double eps_in) : mesh(m), eps(eps_in) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("Field2D: eps must be in (0,1]");
    values.assign(mesh.size(), cplx(0.0, 0.0));
    ring.assign(mesh.n_theta(), cplx(1.0, 0.0));
}

double Field2D::min_modulus() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const cplx& v : values) lo = std::min(lo, std::abs(v));
    return lo;
}

double Field2D::max_modulus() const {
    double hi = 0.0;
    for (const cplx& v : values) hi = std::max(hi, std::abs(v));
    return hi;
}

void Field2D::require_finite() const {
    auto ok = [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
    for (const cplx& v : values)
        if (!ok(v)) throw NumericError("field contains a non-finite value");
    for (const cplx& v : ring)
        if (!ok(v)) throw NumericError("boundary ring contains a non-finite value");
}

static std::vector<cplx> ring_samples(const PolarMesh& mesh, const BoundaryMap& g) {
    std::vector<cplx> out(mesh.n_theta());
    for (int m = 0; m < mesh.n_theta(); ++m) out[m] = g.value(mesh.angle(m));
    return out;
}

Field2D sample_field(const PolarMesh& mesh, double eps, const BoundaryMap& g,
                     const std::function<cplx(cplx)>& f) {
    Field2D out(mesh, eps);
    for (int i = 0; i < mesh.n_r(); ++i)
        for (int m = 0; m < mesh.n_theta(); ++m) out.at(i, m) = f(mesh.node(i, m));
    out.ring = ring_samples(mesh, g);
    return out;
}

Field2D sample_field(const PolarMesh& mesh, const BlaschkeMinimizer& exact) {
    Field2D out(mesh, exact.eps());
    for (int i = 0; i < mesh.n_r(); ++i)
        for (int m = 0; m < mesh.n_theta(); ++m) out.at(i, m) = exact(mesh.node(i, m));
    for (int m = 0; m < mesh.n_theta(); ++m)
        out.ring[m] = exact(std::polar(1.0, mesh.angle(m)));
    return out;
}

Field2D harmonic_extension_field(const PolarMesh& mesh, double eps, const BoundaryMap& g) {
    const int m_samp = std::max(mesh.n_theta(), g.min_samples());
    std::vector<double> re(m_samp), im(m_samp);
    for (int j = 0; j < m_samp; ++j) {
        const cplx v = g.value(2.0 * std::numbers::pi * j / m_samp);
        re[j] = v.real();
        im[j] = v.imag();
    }
    const HarmonicFunction hx = harmonic_extension(fourier_analyze(re));
    const HarmonicFunction hy = harmonic_extension(fourier_analyze(im));
    Field2D out(mesh, eps);
    for (int i = 0; i < mesh.n_r(); ++i)
        for (int m = 0; m < mesh.n_theta(); ++m) {
            const cplx z = mesh.node(i, m);
            out.at(i, m) = cplx(hx(z), hy(z));
        }
    out.ring = ring_samples(mesh, g);
    return out;
}

Field2D random_unit_field(const PolarMesh& mesh, double eps, const BoundaryMap& g,
                          std::uint64_t seed) {
    // Band-limited random phase on top of the harmonic-extension phase.
    // Independent node phases would seed lattice-scale defect pairs that relax
    // into rough metastable critical points; smooth randomness still scatters
    // the starts across basins while staying an admissible H^1 init.
    std::mt19937_64 gen(seed);
    constexpr int kModes = 6;
    double ca[kModes + 1], sa[kModes + 1];
    for (int k = 0; k <= kModes; ++k) {
        const double scale = std::numbers::pi / (1.0 + k);
        ca[k] = scale * (2.0 * uniform01(gen) - 1.0);
        sa[k] = scale * (2.0 * uniform01(gen) - 1.0);
    }

    Field2D out(mesh, eps);
    const Field2D base = harmonic_extension_field(mesh, eps, g);
    for (int i = 0; i < mesh.n_r(); ++i) {
        const double r = mesh.radius(i);
        const double taper = 1.0 - r * r; // keeps the ring row consistent with g
        for (int m = 0; m < mesh.n_theta(); ++m) {
            const double th = mesh.angle(m);
            double psi = ca[0] * r;
            double rk = 1.0;
            for (int k = 1; k <= kModes; ++k) {
                rk *= r;
                psi += rk * (ca[k] * std::cos(k * th) + sa[k] * std::sin(k * th));
            }
            const double phase = std::arg(base.at(i, m)) + taper * psi;
            out.at(i, m) = std::polar(1.0, phase);
        }
    }
    out.ring = ring_samples(mesh, g);
    return out;
}

void write_field_csv(const Field2D& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.precision(17);
    out << "r,theta,u1,u2\n";
    const PolarMesh& mesh = field.mesh;
    for (int i = 0; i < mesh.n_r(); ++i)
        for (int m = 0; m < mesh.n_theta(); ++m) {
            const cplx v = field.at(i, m);
            out << mesh.radius(i) << ',' << mesh.angle(m) << ',' << v.real() << ','
                << v.imag() << '\n';
        }
    for (int m = 0; m < mesh.n_theta(); ++m) {
        const cplx v = field.ring[m];
        out << 1.0 << ',' << mesh.angle(m) << ',' << v.real() << ',' << v.imag() << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

Field2D read_field_csv(const std::string& path, double eps) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("r,theta,u1,u2", 0) != 0)
        throw IoError(path + ": missing r,theta,u1,u2 header");

    struct Row {
        double r, theta, u1, u2;
    };
    std::vector<Row> interior, boundary;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Row row{};
        std::istringstream ss(line);
        char c1, c2, c3;
        if (!(ss >> row.r >> c1 >> row.theta >> c2 >> row.u1 >> c3 >> row.u2) || c1 != ',' ||
            c2 != ',' || c3 != ',')
            throw IoError(path + ": malformed row at line " + std::to_string(lineno));
        (std::abs(row.r - 1.0) < 1e-12 ? boundary : interior).push_back(row);
    }
    if (boundary.empty() || interior.empty())
        throw IoError(path + ": field dump lacks interior nodes or the boundary ring");
    const int n_theta = static_cast<int>(boundary.size());
    if (interior.size() % boundary.size() != 0)
        throw IoError(path + ": node count is not a multiple of the ring size");
    const int n_r = static_cast<int>(interior.size() / boundary.size());

    PolarMesh mesh(n_r, n_theta);
    Field2D out(mesh, eps);
    for (int i = 0; i < n_r; ++i)
        for (int m = 0; m < n_theta; ++m) {
            const Row& row = interior[mesh.index(i, m)];
            if (std::abs(row.r - mesh.radius(i)) > 1e-9 ||
                std::abs(row.theta - mesh.angle(m)) > 1e-9)
                throw IoError(path + ": nodes are not a staggered polar grid in row-major order");
            out.at(i, m) = cplx(row.u1, row.u2);
        }
    for (int m = 0; m < n_theta; ++m) {
        const Row& row = boundary[m];
        if (std::abs(row.theta - mesh.angle(m)) > 1e-9)
            throw IoError(path + ": boundary ring is not in angular order");
        out.ring[m] = cplx(row.u1, row.u2);
    }
    out.require_finite();
    return out;
}

} // namespace vlab
