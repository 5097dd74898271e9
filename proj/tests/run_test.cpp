#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "vlab/run.hpp"

using namespace vlab;
namespace fs = std::filesystem;

namespace {

const char* kSolveConfig = R"({
  "boundary": {"preset": "fourier", "degree": 1},
  "eps": 0.45,
  "mesh": {"n_r": 24, "n_theta": 64},
  "solver": {"gradient_tol": 1e-6, "max_iterations": 3000},
  "diagnostics": true
})";

fs::path fresh_dir(const std::string& stem) {
    const fs::path dir = fs::temp_directory_path() / stem;
    fs::remove_all(dir);
    return dir;
}

nlohmann::json load_result(const fs::path& dir) {
    std::ifstream in(dir / "result.json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

} // namespace

TEST_CASE("config parsing accepts the documented schema") {
    RunConfig cfg = parse_config_text(kSolveConfig);
    CHECK(cfg.g.degree == 1);
    CHECK_FALSE(cfg.blaschke_data);
    REQUIRE(cfg.eps_list.size() == 1);
    CHECK(cfg.eps() == 0.45);
    CHECK(cfg.n_r == 24);
    CHECK(cfg.n_theta == 64);
    CHECK(cfg.solver.gradient_tol == 1e-6);
    CHECK(cfg.solver.max_iterations == 3000);
    CHECK_FALSE(cfg.echo.empty());

    RunConfig blas = parse_config_text(R"({
      "boundary": {"preset": "blaschke", "zeros": [[0.3, 0.0], [0.0, -0.2]], "alpha": 0.1},
      "eps": 0.5
    })");
    CHECK(blas.blaschke_data);
    CHECK(blas.g.degree == 2);
    REQUIRE(blas.zeros.size() == 2);
    CHECK(blas.zeros[1] == cplx(0.0, -0.2));

    // mesh n_theta defaults to twice n_r
    RunConfig m = parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.5,
      "mesh": {"n_r": 40}
    })");
    CHECK(m.n_theta == 80);
}

TEST_CASE("config parsing rejects malformed input") {
    // unknown keys at any level
    CHECK_THROWS_AS(parse_config_text(R"({"boundry": {}, "eps": 0.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1, "wat": 1}, "eps": 0.5})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.5, "solver": {"momentum": 0.9}})"),
                    ConfigError);
    // eps and eps_list together
    CHECK_THROWS_AS(parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.5, "eps_list": [0.5, 0.4]})"),
                    ConfigError);
    // boundary section is mandatory
    CHECK_THROWS_AS(parse_config_text(R"({"eps": 0.5})"), ConfigError);
    // blaschke preset needs zeros
    CHECK_THROWS_AS(parse_config_text(R"({
      "boundary": {"preset": "blaschke", "zeros": []}, "eps": 0.5})"),
                    ConfigError);
    // wrong types
    CHECK_THROWS_AS(parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": "one"}, "eps": 0.5})"),
                    ConfigError);
    // invalid excess route
    CHECK_THROWS_AS(parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.5, "excess": {"route": "sideways"}})"),
                    ConfigError);
    // not JSON at all
    CHECK_THROWS_AS(parse_config_text("energy = high"), ConfigError);
}

TEST_CASE("solve command writes a deterministic result bundle") {
    RunConfig cfg = parse_config_text(kSolveConfig);
    const fs::path dir = fresh_dir("vlab_run_solve");
    REQUIRE(run_command("solve", cfg, dir.string()) == 0);

    CHECK(fs::exists(dir / "field.csv"));
    auto result = load_result(dir);
    CHECK(result.at("schema_version") == "1");
    CHECK(result.at("command") == "solve");
    CHECK(result.at("iteration").at("converged").get<bool>());
    const double total = result.at("energy").at("total").get<double>();
    CHECK(total > 2.0 * std::numbers::pi / 0.45 - 0.2);
    CHECK(total < 2.0 * std::numbers::pi / 0.45 + 0.5);
    CHECK(result.contains("diagnostics"));
    CHECK(result.at("diagnostics").at("vortices").size() == 1);
    CHECK(result.contains("timings"));

    // same config, fresh directory: identical result.json apart from timings
    const fs::path dir2 = fresh_dir("vlab_run_solve2");
    RunConfig cfg2 = parse_config_text(kSolveConfig);
    REQUIRE(run_command("solve", cfg2, dir2.string()) == 0);
    auto a = load_result(dir);
    auto b = load_result(dir2);
    a.erase("timings");
    b.erase("timings");
    CHECK(a == b);

    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("exact command reports the closed-form energy") {
    RunConfig cfg = parse_config_text(R"({
      "boundary": {"preset": "blaschke", "zeros": [[0.0, 0.0]]},
      "eps": 0.5,
      "mesh": {"n_r": 48, "n_theta": 96}
    })");
    const fs::path dir = fresh_dir("vlab_run_exact");
    REQUIRE(run_command("exact", cfg, dir.string()) == 0);
    auto result = load_result(dir);
    CHECK(result.at("exact").at("energy").get<double>() ==
          doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
    const double measured = result.at("energy").at("total").get<double>();
    CHECK(measured == doctest::Approx(4.0 * std::numbers::pi).epsilon(5e-3));
    CHECK(fs::exists(dir / "field.csv"));
    fs::remove_all(dir);

    // exact needs Blaschke data: exit 2 without it
    RunConfig bad = parse_config_text(kSolveConfig);
    const fs::path dir2 = fresh_dir("vlab_run_exact_bad");
    CHECK(run_command("exact", bad, dir2.string()) == 2);
    fs::remove_all(dir2);
}

TEST_CASE("sweep command requires a schedule and writes per-eps rows") {
    RunConfig cfg = parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1, "cos": [0.0, 0.3]},
      "eps_list": [0.5, 0.35],
      "mesh": {"n_r": 24, "n_theta": 64},
      "solver": {"gradient_tol": 1e-6}
    })");
    const fs::path dir = fresh_dir("vlab_run_sweep");
    REQUIRE(run_command("sweep", cfg, dir.string()) == 0);
    auto result = load_result(dir);
    REQUIRE(result.at("sweep").size() == 2);
    CHECK(result.at("sweep")[0].at("eps") == 0.5);
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "field_000.csv"));
    CHECK(fs::exists(dir / "field_001.csv"));
    {
        std::ifstream in(dir / "sweep.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "eps,dirichlet,modulus,total,excess,converged,iterations");
    }
    fs::remove_all(dir);

    RunConfig single = parse_config_text(kSolveConfig);
    const fs::path dir2 = fresh_dir("vlab_run_sweep_bad");
    CHECK(run_command("sweep", single, dir2.string()) == 2);
    fs::remove_all(dir2);
}

TEST_CASE("excess command cross-validates the two routes") {
    RunConfig cfg = parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1, "cos": [0.0, 0.3]},
      "eps": 0.5,
      "excess": {"starts": 4, "boundary_modes": 512}
    })");
    const fs::path dir = fresh_dir("vlab_run_excess");
    REQUIRE(run_command("excess", cfg, dir.string()) == 0);
    auto result = load_result(dir);
    const auto& ex = result.at("excess");
    CHECK(ex.at("direct").at("value").get<double>() ==
          doctest::Approx(0.18 * std::numbers::pi).epsilon(1e-6));
    CHECK(ex.at("value_gap").get<double>() < 1e-8);
    fs::remove_all(dir);
}

TEST_CASE("verify command round-trips a dumped field") {
    // produce a field via solve, then verify the dump in a second run
    RunConfig cfg = parse_config_text(kSolveConfig);
    const fs::path dir = fresh_dir("vlab_run_verify_src");
    REQUIRE(run_command("solve", cfg, dir.string()) == 0);

    std::ostringstream vcfg;
    vcfg << R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.45,
      "field": ")" << (dir / "field.csv").string() << R"("
    })";
    RunConfig v = parse_config_text(vcfg.str());
    const fs::path vdir = fresh_dir("vlab_run_verify");
    REQUIRE(run_command("verify", v, vdir.string()) == 0);
    auto result = load_result(vdir);
    const double total = result.at("energy").at("total").get<double>();
    auto solved = load_result(dir);
    CHECK(total == doctest::Approx(solved.at("energy").at("total").get<double>())
                       .epsilon(1e-12));
    fs::remove_all(dir);
    fs::remove_all(vdir);
}

TEST_CASE("verify surfaces numeric failures with exit 3") {
    // a dump whose modulus sits below the detection threshold everywhere:
    // parseable and finite, but no probe circle can read a degree
    PolarMesh mesh(24, 64);
    BoundaryMap g{.degree = 1, .cos_coef = {}, .sin_coef = {}, .mean_phase = 0.0};
    auto f = sample_field(mesh, 0.45, g, [](cplx) { return cplx(0.1, 0.0); });
    const fs::path dump = fs::temp_directory_path() / "vlab_run_low_modulus.csv";
    write_field_csv(f, dump.string());

    std::ostringstream vcfg;
    vcfg << R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.45,
      "field": ")" << dump.string() << R"("
    })";
    RunConfig v = parse_config_text(vcfg.str());
    const fs::path vdir = fresh_dir("vlab_run_verify_bad");
    CHECK(run_command("verify", v, vdir.string()) == 3);
    // result.json still lands, carrying the error string
    auto result = load_result(vdir);
    CHECK(result.contains("error"));
    fs::remove(dump);
    fs::remove_all(vdir);
}

TEST_CASE("verify maps an unreadable dump to the io exit code") {
    RunConfig v = parse_config_text(R"({
      "boundary": {"preset": "fourier", "degree": 1},
      "eps": 0.45,
      "field": "/nonexistent/vlab_field.csv"
    })");
    const fs::path vdir = fresh_dir("vlab_run_verify_io");
    CHECK(run_command("verify", v, vdir.string()) == 4);
    fs::remove_all(vdir);
}

TEST_CASE("unwritable output directory maps to the io exit code") {
    RunConfig cfg = parse_config_text(kSolveConfig);
    const fs::path file = fs::temp_directory_path() / "vlab_run_blocker";
    std::ofstream(file) << "occupied";
    const fs::path dir = file / "nested"; // cannot create under a regular file
    CHECK(run_command("solve", cfg, dir.string()) == 4);
    fs::remove(file);
}

TEST_CASE("seed override changes the echoed config") {
    RunConfig cfg = parse_config_text(kSolveConfig);
    const std::string before = cfg.echo;
    cfg.override_seed(99);
    CHECK(cfg.solver.seed == 99);
    CHECK(cfg.echo != before);
}
