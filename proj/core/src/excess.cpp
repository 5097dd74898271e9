#include "vlab/excess.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "vlab/errors.hpp"
#include "vlab/mesh.hpp"

namespace vlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_distinct(const VortexConfig& cfg, const char* who) {
    for (std::size_t i = 0; i < cfg.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.size(); ++j)
            if (std::abs(cfg.points[i].z() - cfg.points[j].z()) <= 1e-9)
                throw InvalidArgument(std::string(who) + ": coincident vortex points");
}

// int_bnd phi0_tilde (g x g_tau) in closed form.  With g's residual modes
// (a_k, b_k) and c_jk = a_j^k this is
//   pi sum_k k (a_k^2 + b_k^2)
//   - 2 pi sum_j d_j sum_k (b_k Re[a_j^k] - a_k Im[a_j^k]);
// the mean parts drop out because phi0_tilde has zero boundary mean.
double boundary_integral(const VortexConfig& cfg, const BoundaryMap& g) {
    double spectral = 0.0;
    const int kmax = g.mode_count();
    auto ak = [&](int k) { return k <= (int)g.cos_coef.size() ? g.cos_coef[k - 1] : 0.0; };
    auto bk = [&](int k) { return k <= (int)g.sin_coef.size() ? g.sin_coef[k - 1] : 0.0; };
    for (int k = 1; k <= kmax; ++k)
        spectral += k * (ak(k) * ak(k) + bk(k) * bk(k));
    double logpart = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const cplx a = cfg.points[j].z();
        cplx pw = a;
        double s = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            s += bk(k) * pw.real() - ak(k) * pw.imag();
            pw *= a;
        }
        logpart += cfg.degrees[j] * s;
    }
    return std::numbers::pi * spectral - two_pi * logpart;
}

} // namespace

double excess_direct(const BoundaryMap& g, std::span<const cplx> zeros, int modes) {
    const int m = std::max(modes, g.min_samples());
    return h_half_seminorm_sq(relative_phase(g, zeros, m));
}

double w_renormalized(const VortexConfig& cfg, const BoundaryMap& g) {
    require_distinct(cfg, "w_renormalized");
    const HarmonicFunction phi = neumann_phi0_tilde(cfg, g);
    double out = boundary_integral(cfg, g);
    for (std::size_t j = 0; j < cfg.size(); ++j)
        out -= two_pi * cfg.degrees[j] * regular_part_R0(phi, cfg.points[j].z());
    for (std::size_t i = 0; i < cfg.size(); ++i)
        for (std::size_t j = 0; j < cfg.size(); ++j)
            if (i != j)
                out -= two_pi * cfg.degrees[i] * cfg.degrees[j] *
                       std::log(std::abs(cfg.points[i].z() - cfg.points[j].z()));
    return out;
}

double w_tilde(const VortexConfig& cfg) {
    require_distinct(cfg, "w_tilde");
    double out = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j)
        for (std::size_t k = 0; k < cfg.size(); ++k) {
            const cplx aj = cfg.points[j].z(), ak = cfg.points[k].z();
            const double dd = cfg.degrees[j] * cfg.degrees[k];
            if (j != k) out -= two_pi * dd * std::log(std::abs(aj - ak));
            out += two_pi * dd * std::log(std::abs(1.0 - std::conj(aj) * ak));
        }
    return out;
}

double excess_via_formula(const BoundaryMap& g, std::span<const cplx> zeros) {
    if (static_cast<int>(zeros.size()) != g.degree)
        throw DegreeMismatch("excess_via_formula: zero count must equal the boundary degree");
    VortexConfig cfg = VortexConfig::unit(zeros);
    const HarmonicFunction phi = neumann_phi0_tilde(cfg, g);
    double out = boundary_integral(cfg, g);
    for (const cplx& b : zeros) out -= two_pi * regular_part_R0(phi, b);
    for (const cplx& bi : zeros)
        for (const cplx& bj : zeros)
            out -= two_pi * std::log(std::abs(1.0 - bi * std::conj(bj)));
    return out;
}

namespace {

std::vector<cplx> params_to_zeros(std::span<const double> p) {
    std::vector<cplx> zs(p.size() / 2);
    for (std::size_t j = 0; j < zs.size(); ++j)
        zs[j] = std::polar(std::tanh(p[2 * j]), p[2 * j + 1]);
    return zs;
}

// Plain Nelder-Mead; returns best vertex, best value, and whether the simplex
// collapsed below the tolerances before the iteration cap.
struct SimplexOutcome {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
};

SimplexOutcome nelder_mead(const std::function<double(std::span<const double>)>& fn,
                           std::vector<double> start, int max_iter, double f_tol,
                           double x_tol) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> xs(n + 1, start);
    for (std::size_t k = 0; k < n; ++k) xs[k + 1][k] += 0.25;
    std::vector<double> fs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) fs[k] = fn(xs[k]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };
    std::vector<double> centroid(n), trial(n);
    SimplexOutcome out;
    for (int it = 0; it < max_iter; ++it) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        double diam = 0.0;
        for (std::size_t k = 0; k <= n; ++k)
            for (std::size_t d = 0; d < n; ++d)
                diam = std::max(diam, std::abs(xs[k][d] - xs[best][d]));
        if (std::abs(fs[worst] - fs[best]) <= f_tol * (1.0 + std::abs(fs[best])) &&
            diam <= x_tol) {
            out.converged = true;
            break;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k <= n; ++k)
            if (k != worst)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[k][d] / n;

        auto blend = [&](double t) {
            for (std::size_t d = 0; d < n; ++d)
                trial[d] = centroid[d] + t * (xs[worst][d] - centroid[d]);
            return fn(trial);
        };
        const double fr = blend(-1.0); // reflection
        const std::vector<double> reflected = trial;
        if (fr < fs[order[0]]) {
            const double fe = blend(-2.0); // expansion
            if (fe < fr) {
                xs[worst] = trial;
                fs[worst] = fe;
            } else {
                xs[worst] = reflected;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = reflected;
            fs[worst] = fr;
        } else {
            const double fc = blend(fr < fs[worst] ? -0.5 : 0.5); // contraction
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = trial;
                fs[worst] = fc;
            } else { // shrink toward the best vertex
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        xs[k][d] = xs[best][d] + 0.5 * (xs[k][d] - xs[best][d]);
                    fs[k] = fn(xs[k]);
                }
            }
        }
    }
    sort_simplex();
    out.x = xs[order[0]];
    out.f = fs[order[0]];
    return out;
}

double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

std::vector<DiscPoint> canonical_zeros(std::span<const double> p) {
    std::vector<cplx> zs = params_to_zeros(p);
    std::vector<DiscPoint> out;
    out.reserve(zs.size());
    for (const cplx& z : zs) out.emplace_back(z);
    std::sort(out.begin(), out.end(), [](const DiscPoint& a, const DiscPoint& b) {
        const double ta = wrap_angle(std::atan2(a.im, a.re));
        const double tb = wrap_angle(std::atan2(b.im, b.re));
        if (ta != tb) return ta < tb;
        return a.abs() < b.abs();
    });
    return out;
}

// Bottleneck distance over zero matchings; D is small, so permutations are fine.
double config_distance(std::span<const DiscPoint> a, std::span<const DiscPoint> b) {
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j)
            worst = std::max(worst, std::abs(a[j].z() - b[perm[j]].z()));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

ExcessResult minimize_excess(const BoundaryMap& g, int degree, const ExcessOptions& opt) {
    if (degree < 1) throw InvalidArgument("minimize_excess: degree must be >= 1");
    if (degree != g.degree)
        throw DegreeMismatch("minimize_excess: degree does not match the boundary data");
    if (opt.starts < 1) throw InvalidArgument("minimize_excess: need at least one start");

    auto objective = [&](std::span<const double> p) {
        const std::vector<cplx> zs = params_to_zeros(p);
        try {
            return opt.route == ExcessRoute::direct
                       ? excess_direct(g, zs, opt.boundary_modes)
                       : excess_via_formula(g, zs);
        } catch (const UndersampledError&) {
            // A zero ran toward the boundary faster than the sampling can
            // resolve; the true objective blows up there too.
            double s = 0.0;
            for (std::size_t j = 0; j < p.size(); j += 2) s += std::abs(p[j]);
            return 1e10 * (1.0 + s);
        }
    };

    std::mt19937_64 gen(opt.seed);
    auto start_params = [&](int s) {
        std::vector<double> p(2 * degree);
        if (s == 0) { // tight cluster at the origin
            for (int j = 0; j < degree; ++j) {
                p[2 * j] = std::atanh(0.05);
                p[2 * j + 1] = two_pi * j / degree;
            }
        } else if (s == 1) { // evenly spread ring
            for (int j = 0; j < degree; ++j) {
                p[2 * j] = std::atanh(0.5);
                p[2 * j + 1] = two_pi * (j + 0.5) / degree;
            }
        } else {
            for (int j = 0; j < degree; ++j) {
                p[2 * j] = std::atanh(0.85 * std::sqrt(uniform01(gen)));
                p[2 * j + 1] = two_pi * uniform01(gen);
            }
        }
        return p;
    };

    struct StartRecord {
        SimplexOutcome outcome;
        std::vector<DiscPoint> zeros;
    };
    std::vector<StartRecord> records;
    records.reserve(opt.starts);
    for (int s = 0; s < opt.starts; ++s) {
        StartRecord rec;
        rec.outcome =
            nelder_mead(objective, start_params(s), opt.max_iterations, opt.f_tol, opt.x_tol);
        rec.zeros = canonical_zeros(rec.outcome.x);
        records.push_back(std::move(rec));
    }

    const auto best_it =
        std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
            return a.outcome.f < b.outcome.f;
        });
    if (!std::any_of(records.begin(), records.end(),
                     [](const auto& r) { return r.outcome.converged; }))
        throw NumericError("minimize_excess: no start converged; best value " +
                           std::to_string(best_it->outcome.f));

    ExcessResult out;
    out.zeros = best_it->zeros;
    out.value = best_it->outcome.f;
    out.route = opt.route;
    out.starts = opt.starts;
    out.boundary_modes = opt.boundary_modes;
    for (const StartRecord& rec : records) {
        if (!rec.outcome.converged) continue;
        ++out.converged_starts;
        out.value_spread = std::max(out.value_spread, rec.outcome.f - out.value);
        if (rec.outcome.f <= out.value + 1e-3 * (1.0 + std::abs(out.value)))
            out.argmin_spread =
                std::max(out.argmin_spread, config_distance(out.zeros, rec.zeros));
    }
    return out;
}

CrossValidation cross_validate(const BoundaryMap& g, int degree, const ExcessOptions& opt) {
    ExcessOptions direct_opt = opt;
    direct_opt.route = ExcessRoute::direct;
    ExcessOptions formula_opt = opt;
    formula_opt.route = ExcessRoute::formula;

    CrossValidation out;
    out.direct = minimize_excess(g, degree, direct_opt);
    out.formula = minimize_excess(g, degree, formula_opt);
    out.value_gap = std::abs(out.direct.value - out.formula.value);
    out.argmin_gap = config_distance(out.direct.zeros, out.formula.zeros);
    return out;
}

} // namespace vlab
