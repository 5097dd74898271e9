#include "vlab/exact.hpp"

#include <cmath>
#include <numbers>

namespace vlab {

double radial_profile(int degree, double eps, double big_r, double r) {
    if (degree < 1) throw InvalidArgument("radial_profile: degree must be >= 1");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("radial_profile: eps must be in (0,1]");
    if (!(big_r > 0.0)) throw InvalidArgument("radial_profile: R must be positive");
    if (r < 0.0 || r > big_r) throw InvalidArgument("radial_profile: r outside [0,R]");
    return std::pow(r / big_r, degree * eps);
}

double exact_energy(int degree, double eps) {
    if (degree < 1) throw InvalidArgument("exact_energy: degree must be >= 1");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("exact_energy: eps must be in (0,1]");
    return 2.0 * std::numbers::pi * degree / eps;
}

BlaschkeMinimizer::BlaschkeMinimizer(std::vector<cplx> zeros, double alpha, double eps)
    : zeros_(std::move(zeros)), alpha_(alpha), eps_(eps) {
    if (!(eps_ > 0.0 && eps_ <= 1.0))
        throw InvalidArgument("BlaschkeMinimizer: eps must be in (0,1]");
    for (const cplx& a : zeros_)
        if (!(std::norm(a) < 1.0))
            throw InvalidArgument("BlaschkeMinimizer: zero outside the open unit disc");
}

cplx BlaschkeMinimizer::operator()(cplx z) const {
    const cplx f = blaschke_eval(std::span<const cplx>(zeros_), alpha_, z);
    const double m = std::abs(f);
    if (m == 0.0) return {0.0, 0.0};
    return std::pow(m, eps_) * f / m;
}

double BlaschkeMinimizer::modulus(cplx z) const {
    const double m = std::abs(blaschke_eval(std::span<const cplx>(zeros_), alpha_, z));
    return std::pow(m, eps_);
}

BlaschkeMinimizer::Jet BlaschkeMinimizer::jet(cplx z) const {
    const cplx f = blaschke_eval(std::span<const cplx>(zeros_), alpha_, z);
    const double m = std::abs(f);
    if (m < 1e-300)
        throw InvalidArgument("BlaschkeMinimizer::jet at a zero");
    // L = log F; L' = sum 1/(z-a) + conj(a)/(1-conj(a) z).
    cplx lp = 0.0;
    for (const cplx& a : zeros_)
        lp += 1.0 / (z - a) + std::conj(a) / (1.0 - std::conj(a) * z);
    // With L' = p + i q: grad(ln|F|) = (p, -q), grad(arg F) = (q, p).
    const double p = lp.real(), q = lp.imag();

    Jet out;
    out.rho = std::pow(m, eps_);
    out.u = out.rho * f / m;
    out.drho_dx = eps_ * out.rho * p;
    out.drho_dy = eps_ * out.rho * (-q);
    // w = rho e^{i phi}: dw = (eps h_x + i phi_x) w etc.
    out.du_dx = (eps_ * p + cplx(0.0, 1.0) * q) * out.u;
    out.du_dy = (eps_ * (-q) + cplx(0.0, 1.0) * p) * out.u;
    out.log_deriv = std::abs(lp);
    return out;
}

double BlaschkeMinimizer::energy_density(cplx z) const {
    const Jet j = jet(z);
    return 2.0 * j.rho * j.rho * j.log_deriv * j.log_deriv;
}

cplx blaschke_minimizer(std::span<const cplx> zeros, double alpha, double eps, cplx z) {
    return BlaschkeMinimizer(std::vector<cplx>(zeros.begin(), zeros.end()), alpha, eps)(z);
}

} // namespace vlab
