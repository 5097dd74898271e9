#include "vlab/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "vlab/diagnostics.hpp"
#include "vlab/exact.hpp"
#include "vlab/mesh.hpp"
#include "vlab/thinfilm.hpp"

namespace vlab {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError(std::string("config: unknown key '") + item.key() + "' in " +
                              where);
    }
}

template <typename T>
T get_as(const ordered_json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config: bad value for ") + what);
    }
}

cplx get_point(const ordered_json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(std::string("config: ") + what + " must be a [re, im] pair");
    return {get_as<double>(j[0], what), get_as<double>(j[1], what)};
}

BoundaryMap parse_boundary(const ordered_json& b, RunConfig& cfg) {
    if (!b.is_object()) throw ConfigError("config: 'boundary' must be an object");
    const std::string preset = get_as<std::string>(b.value("preset", ordered_json("fourier")),
                                                   "boundary.preset");
    if (preset == "blaschke") {
        check_keys(b, {"preset", "zeros", "alpha"}, "boundary");
        if (!b.contains("zeros") || !b["zeros"].is_array())
            throw ConfigError("config: boundary.zeros must be an array of [re, im] pairs");
        for (const auto& z : b["zeros"]) cfg.zeros.push_back(get_point(z, "boundary.zeros"));
        if (cfg.zeros.empty()) throw ConfigError("config: boundary.zeros is empty");
        cfg.alpha = get_as<double>(b.value("alpha", ordered_json(0.0)), "boundary.alpha");
        cfg.blaschke_data = true;
        try {
            return blaschke_boundary(cfg.zeros, cfg.alpha);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    if (preset != "fourier")
        throw ConfigError("config: boundary.preset must be 'fourier' or 'blaschke'");
    check_keys(b, {"preset", "degree", "cos", "sin", "mean_phase"}, "boundary");
    BoundaryMap g;
    g.degree = get_as<int>(b.value("degree", ordered_json(0)), "boundary.degree");
    if (b.contains("cos"))
        for (const auto& v : b["cos"]) g.cos_coef.push_back(get_as<double>(v, "boundary.cos"));
    if (b.contains("sin"))
        for (const auto& v : b["sin"]) g.sin_coef.push_back(get_as<double>(v, "boundary.sin"));
    g.cos_coef.resize(std::max(g.cos_coef.size(), g.sin_coef.size()), 0.0);
    g.sin_coef.resize(g.cos_coef.size(), 0.0);
    g.mean_phase = get_as<double>(b.value("mean_phase", ordered_json(0.0)), "boundary.mean_phase");
    return g;
}

void parse_solver(const ordered_json& s, SolverConfig& out) {
    check_keys(s,
               {"gradient_tol", "max_iterations", "memory", "armijo_slope", "backtrack",
                "max_backtracks", "modulus_guard", "multistart", "core_winding", "zone_radius",
                "core_radius"},
               "solver");
    if (s.contains("gradient_tol"))
        out.gradient_tol = get_as<double>(s["gradient_tol"], "solver.gradient_tol");
    if (s.contains("max_iterations"))
        out.max_iterations = get_as<int>(s["max_iterations"], "solver.max_iterations");
    if (s.contains("memory")) out.memory = get_as<int>(s["memory"], "solver.memory");
    if (s.contains("armijo_slope"))
        out.armijo_slope = get_as<double>(s["armijo_slope"], "solver.armijo_slope");
    if (s.contains("backtrack")) out.backtrack = get_as<double>(s["backtrack"], "solver.backtrack");
    if (s.contains("max_backtracks"))
        out.max_backtracks = get_as<int>(s["max_backtracks"], "solver.max_backtracks");
    if (s.contains("modulus_guard"))
        out.modulus_guard = get_as<double>(s["modulus_guard"], "solver.modulus_guard");
    if (s.contains("multistart")) out.multistart = get_as<int>(s["multistart"], "solver.multistart");
    if (s.contains("core_winding"))
        out.core_winding = get_as<int>(s["core_winding"], "solver.core_winding");
    if (s.contains("zone_radius"))
        out.zone_radius = get_as<double>(s["zone_radius"], "solver.zone_radius");
    if (s.contains("core_radius"))
        out.core_radius = get_as<double>(s["core_radius"], "solver.core_radius");
    try {
        out.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

void parse_excess(const ordered_json& s, ExcessOptions& out) {
    check_keys(s, {"starts", "boundary_modes", "max_iterations", "f_tol", "x_tol", "route"},
               "excess");
    if (s.contains("starts")) out.starts = get_as<int>(s["starts"], "excess.starts");
    if (s.contains("boundary_modes"))
        out.boundary_modes = get_as<int>(s["boundary_modes"], "excess.boundary_modes");
    if (s.contains("max_iterations"))
        out.max_iterations = get_as<int>(s["max_iterations"], "excess.max_iterations");
    if (s.contains("f_tol")) out.f_tol = get_as<double>(s["f_tol"], "excess.f_tol");
    if (s.contains("x_tol")) out.x_tol = get_as<double>(s["x_tol"], "excess.x_tol");
    if (s.contains("route")) {
        const std::string r = get_as<std::string>(s["route"], "excess.route");
        if (r == "direct")
            out.route = ExcessRoute::direct;
        else if (r == "formula")
            out.route = ExcessRoute::formula;
        else
            throw ConfigError("config: excess.route must be 'direct' or 'formula'");
    }
}

void parse_thinfilm(const ordered_json& s, ThinFilmConfig& out) {
    check_keys(s, {"h_list", "n_z", "escape_seed"}, "thinfilm");
    if (s.contains("h_list"))
        for (const auto& v : s["h_list"]) out.h_list.push_back(get_as<double>(v, "thinfilm.h_list"));
    if (s.contains("n_z")) out.n_z = get_as<int>(s["n_z"], "thinfilm.n_z");
    if (s.contains("escape_seed"))
        out.escape_seed = get_as<double>(s["escape_seed"], "thinfilm.escape_seed");
}

} // namespace

double RunConfig::eps() const {
    if (eps_list.empty()) throw ConfigError("config: no eps given");
    return eps_list.front();
}

void RunConfig::override_seed(std::uint64_t s) {
    solver.seed = s;
    excess.seed = s;
    // keep the echoed config honest about the seed actually used
    ordered_json j = echo.empty() ? ordered_json::object() : ordered_json::parse(echo);
    j["seed"] = s;
    echo = j.dump();
}

RunConfig parse_config_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j,
               {"boundary", "eps", "eps_list", "mesh", "solver", "excess", "init", "diagnostics",
                "thinfilm", "seed", "field"},
               "the top level");

    RunConfig cfg;
    if (!j.contains("boundary")) throw ConfigError("config: missing 'boundary'");
    cfg.g = parse_boundary(j["boundary"], cfg);

    if (j.contains("eps") && j.contains("eps_list"))
        throw ConfigError("config: give either 'eps' or 'eps_list', not both");
    if (j.contains("eps")) cfg.eps_list.push_back(get_as<double>(j["eps"], "eps"));
    if (j.contains("eps_list"))
        for (const auto& v : j["eps_list"]) cfg.eps_list.push_back(get_as<double>(v, "eps_list"));
    for (double e : cfg.eps_list)
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("config: eps values must lie in (0, 1)");

    if (j.contains("mesh")) {
        check_keys(j["mesh"], {"n_r", "n_theta"}, "mesh");
        if (j["mesh"].contains("n_r")) cfg.n_r = get_as<int>(j["mesh"]["n_r"], "mesh.n_r");
        cfg.n_theta = 2 * cfg.n_r;
        if (j["mesh"].contains("n_theta"))
            cfg.n_theta = get_as<int>(j["mesh"]["n_theta"], "mesh.n_theta");
    }
    if (j.contains("solver")) parse_solver(j["solver"], cfg.solver);
    if (j.contains("excess")) parse_excess(j["excess"], cfg.excess);
    if (j.contains("init")) {
        const std::string p = get_as<std::string>(j["init"], "init");
        if (p == "nearest_exact")
            cfg.init = InitPreset::nearest_exact;
        else if (p == "harmonic")
            cfg.init = InitPreset::harmonic;
        else if (p == "random")
            cfg.init = InitPreset::random;
        else
            throw ConfigError("config: init must be nearest_exact, harmonic, or random");
    }
    if (j.contains("diagnostics"))
        cfg.diagnostics = get_as<bool>(j["diagnostics"], "diagnostics");
    if (j.contains("thinfilm")) parse_thinfilm(j["thinfilm"], cfg.thinfilm);
    if (j.contains("seed")) cfg.override_seed(get_as<std::uint64_t>(j["seed"], "seed"));
    if (j.contains("field")) cfg.field_path = get_as<std::string>(j["field"], "field");

    cfg.echo = j.dump();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
}

ordered_json js_resolution(const PolarMesh& mesh) {
    return {{"n_r", mesh.n_r()}, {"n_theta", mesh.n_theta()}};
}

ordered_json js_breakdown(const EnergyBreakdown& b, const PolarMesh& mesh) {
    return {{"dirichlet", b.dirichlet_term},
            {"modulus", b.modulus_term},
            {"total", b.total},
            {"eps", b.eps},
            {"resolution", js_resolution(mesh)}};
}

ordered_json js_report(const IterationReport& r) {
    return {{"iterations", r.iterations},       {"evaluations", r.evaluations},
            {"converged", r.converged},         {"monotone", r.monotone},
            {"objective", r.objective},         {"gradient_norm", r.gradient_norm}};
}

ordered_json js_diagnostics(const DiagnosticsReport& d, const PolarMesh& mesh) {
    ordered_json vortices = ordered_json::array();
    for (const Vortex& v : d.detection.vortices)
        vortices.push_back({{"center", {v.center.re, v.center.im}},
                            {"radius", v.radius},
                            {"degree", v.degree},
                            {"min_modulus", v.min_modulus}});
    return {{"vortices", vortices},
            {"vortex_count", d.detection.vortices.size()},
            {"total_degree", d.detection.total_degree()},
            {"beta", d.detection.beta},
            {"boundary_warning", d.detection.boundary_warning},
            {"residuals",
             {{"euler_lagrange", d.identities.el},
              {"current_divergence", d.identities.current_div},
              {"subharmonicity_min", d.identities.subharmonicity_min},
              {"pohozaev", d.pohozaev},
              {"hopf_cr", d.hopf_cr}}},
            {"equipartition", d.equipartition},
            {"annulus", {d.annulus.r_in, d.annulus.r_out}},
            {"phi0_sup_error", d.phi0_sup_error},
            {"canonical_sup_error", d.canonical_sup_error},
            {"resolution", js_resolution(mesh)}};
}

ordered_json js_excess(const ExcessResult& r) {
    ordered_json zeros = ordered_json::array();
    for (const DiscPoint& p : r.zeros) zeros.push_back({p.re, p.im});
    return {{"zeros", zeros},
            {"value", r.value},
            {"route", r.route == ExcessRoute::direct ? "direct" : "formula"},
            {"starts", r.starts},
            {"converged_starts", r.converged_starts},
            {"value_spread", r.value_spread},
            {"argmin_spread", r.argmin_spread},
            {"resolution", {{"boundary_modes", r.boundary_modes}}}};
}

std::string indexed_name(const char* stem, std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03zu.csv", stem, k);
    return buf;
}

void write_slab_csv(const Field3D& f, const fs::path& path) {
    std::ostringstream out;
    out.precision(17);
    out << "r,theta,z,u1,u2,u3\n";
    const double dz = 1.0 / (f.n_z - 1);
    for (int l = 0; l < f.n_z; ++l)
        for (int i = 0; i < f.mesh.n_r(); ++i)
            for (int m = 0; m < f.mesh.n_theta(); ++m) {
                const Vec3& v = f.at(l, i, m);
                out << f.mesh.radius(i) << ',' << f.mesh.angle(m) << ',' << l * dz << ','
                    << v[0] << ',' << v[1] << ',' << v[2] << '\n';
            }
    write_text_file(path, out.str());
}

int jobs_clamped(int jobs, std::size_t n) {
    return std::max(1, std::min<int>(jobs, static_cast<int>(n)));
}

void cmd_solve(const RunConfig& cfg, const fs::path& out, ordered_json& result) {
    const PolarMesh mesh(cfg.n_r, cfg.n_theta, cfg.g.degree);
    MinimizeResult mr = [&] {
        if (cfg.solver.multistart > 1) {
            MultistartReport msr;
            MinimizeResult r = minimize_multistart(cfg.g, cfg.eps(), mesh, cfg.solver, &msr);
            result["multistart"] = {{"starts", msr.starts},
                                    {"converged", msr.converged},
                                    {"best_total", msr.best_total},
                                    {"worst_total", msr.worst_total},
                                    {"field_spread", msr.field_spread}};
            return r;
        }
        return minimize(cfg.g, cfg.eps(), mesh, cfg.init, cfg.solver);
    }();
    result["energy"] = js_breakdown(mr.breakdown, mesh);
    result["iteration"] = js_report(mr.report);
    write_field_csv(mr.field, (out / "field.csv").string());
    result["field_csv"] = "field.csv";
    if (cfg.diagnostics) result["diagnostics"] = js_diagnostics(run_diagnostics(mr.field, cfg.g), mesh);
}

void cmd_sweep(const RunConfig& cfg, const fs::path& out, ordered_json& result, bool& partial) {
    if (cfg.eps_list.size() < 2)
        throw ConfigError("config: sweep needs an eps_list with at least two entries");
    const PolarMesh mesh(cfg.n_r, cfg.n_theta, cfg.g.degree);
    const std::vector<SweepEntry> entries =
        continuation_sweep(cfg.g, cfg.eps_list, mesh, cfg.solver);

    std::ostringstream table;
    table.precision(17);
    table << "eps,dirichlet,modulus,total,excess,converged,iterations\n";
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const SweepEntry& e = entries[k];
        ordered_json row = {{"eps", e.eps}};
        if (e.error.empty()) {
            row["energy"] = js_breakdown(e.breakdown, mesh);
            row["excess"] = e.excess;
            row["iteration"] = js_report(e.report);
            if (e.field) {
                const std::string name = indexed_name("field", k);
                write_field_csv(*e.field, (out / name).string());
                row["field_csv"] = name;
            }
            table << e.eps << ',' << e.breakdown.dirichlet_term << ',' << e.breakdown.modulus_term
                  << ',' << e.breakdown.total << ',' << e.excess << ',' << e.report.converged
                  << ',' << e.report.iterations << '\n';
        } else {
            row["error"] = e.error;
            partial = true;
        }
        rows.push_back(std::move(row));
    }
    result["sweep"] = std::move(rows);
    write_text_file(out / "sweep.csv", table.str());
    result["sweep_csv"] = "sweep.csv";
}

void cmd_excess(const RunConfig& cfg, ordered_json& result) {
    const CrossValidation cv = cross_validate(cfg.g, cfg.g.degree, cfg.excess);
    result["excess"] = {{"direct", js_excess(cv.direct)},
                        {"formula", js_excess(cv.formula)},
                        {"value_gap", cv.value_gap},
                        {"argmin_gap", cv.argmin_gap}};
}

void cmd_exact(const RunConfig& cfg, const fs::path& out, ordered_json& result) {
    if (!cfg.blaschke_data)
        throw ConfigError("config: the exact command needs boundary.preset = 'blaschke'");
    const PolarMesh mesh(cfg.n_r, cfg.n_theta, static_cast<int>(cfg.zeros.size()));
    const BlaschkeMinimizer exact(cfg.zeros, cfg.alpha, cfg.eps());
    const Field2D field = sample_field(mesh, exact);
    const double analytic = exact_energy(static_cast<int>(cfg.zeros.size()), cfg.eps());
    result["exact"] = {{"degree", cfg.zeros.size()},
                       {"eps", cfg.eps()},
                       {"energy", analytic}};
    result["energy"] = js_breakdown(energy_report(field).breakdown, mesh);
    write_field_csv(field, (out / "field.csv").string());
    result["field_csv"] = "field.csv";
}

void cmd_thinfilm(const RunConfig& cfg, const fs::path& out, ordered_json& result, int jobs,
                  bool& partial) {
    if (cfg.thinfilm.h_list.empty())
        throw ConfigError("config: thinfilm needs a nonempty thinfilm.h_list");
    const PolarMesh mesh(cfg.n_r, cfg.n_theta, cfg.g.degree);
    const std::size_t n = cfg.thinfilm.h_list.size();
    std::vector<std::optional<ThinFilmResult>> results(n);
    std::vector<std::string> errors(n);

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t k; (k = cursor.fetch_add(1)) < n;) {
            try {
                results[k] = thin_film_minimize(cfg.g, cfg.eps(), cfg.thinfilm.h_list[k], mesh,
                                                cfg.thinfilm.n_z, cfg.solver,
                                                cfg.thinfilm.escape_seed);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs_clamped(jobs, n); ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < n; ++k) {
        ordered_json row = {{"h", cfg.thinfilm.h_list[k]}};
        if (results[k]) {
            const ThinFilmResult& r = *results[k];
            row["value"] = r.value;
            row["planar_term"] = r.breakdown.planar_term;
            row["vertical_term"] = r.breakdown.vertical_term;
            row["initial_value"] = r.initial_value;
            row["planar_total"] = r.planar_total;
            row["max_out_of_plane"] = r.max_out_of_plane;
            row["iteration"] = js_report(r.report);
            row["resolution"] = {{"n_r", mesh.n_r()},
                                 {"n_theta", mesh.n_theta()},
                                 {"n_z", cfg.thinfilm.n_z}};
            const std::string name = indexed_name("slab", k);
            write_slab_csv(r.field, out / name);
            row["slab_csv"] = name;
        } else {
            row["error"] = errors[k];
            partial = true;
        }
        rows.push_back(std::move(row));
    }
    result["thinfilm"] = std::move(rows);
}

void cmd_verify(const RunConfig& cfg, ordered_json& result) {
    if (cfg.field_path.empty())
        throw ConfigError("config: verify needs 'field' pointing at a CSV dump");
    const Field2D field = read_field_csv(cfg.field_path, cfg.eps());
    result["energy"] = js_breakdown(energy_report(field).breakdown, field.mesh);
    result["diagnostics"] = js_diagnostics(run_diagnostics(field, cfg.g), field.mesh);
}

} // namespace

int run_command(const std::string& command, RunConfig cfg, const std::string& out_dir,
                int jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    ordered_json result;
    result["schema_version"] = "1";
    result["command"] = command;
    result["config"] = ordered_json::parse(cfg.echo.empty() ? "{}" : cfg.echo);

    const fs::path out(out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) return 4;

    int status = 0;
    bool partial = false;
    try {
        if (command == "solve")
            cmd_solve(cfg, out, result);
        else if (command == "sweep")
            cmd_sweep(cfg, out, result, partial);
        else if (command == "excess")
            cmd_excess(cfg, result);
        else if (command == "exact")
            cmd_exact(cfg, out, result);
        else if (command == "thinfilm")
            cmd_thinfilm(cfg, out, result, jobs, partial);
        else if (command == "verify")
            cmd_verify(cfg, result);
        else
            throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        result["error"] = e.what();
        status = 2;
    } catch (const InvalidArgument& e) {
        result["error"] = e.what();
        status = 2;
    } catch (const IoError& e) {
        result["error"] = e.what();
        status = 4;
    } catch (const std::exception& e) {
        result["error"] = e.what();
        status = 3;
    }
    if (status == 0 && partial) status = 3;

    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    result["timings"] = {{"total_seconds", dt.count()}};
    try {
        write_text_file(out / "result.json", result.dump(2) + "\n");
    } catch (const IoError&) {
        return 4;
    }
    return status;
}

} // namespace vlab
