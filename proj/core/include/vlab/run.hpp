#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlab/boundary.hpp"
#include "vlab/excess.hpp"
#include "vlab/solve.hpp"

namespace vlab {

struct ThinFilmConfig {
    std::vector<double> h_list;
    int n_z = 6;
    double escape_seed = 0.01;
};

// One declarative JSON config drives every command; unknown keys anywhere in
// the file are rejected so a typo cannot silently fall back to a default.
struct RunConfig {
    BoundaryMap g;
    bool blaschke_data = false; // boundary given as Blaschke zeros
    std::vector<cplx> zeros;
    double alpha = 0.0;

    std::vector<double> eps_list; // single entry unless sweeping
    int n_r = 96;
    int n_theta = 192;
    SolverConfig solver;
    ExcessOptions excess;
    InitPreset init = InitPreset::nearest_exact;
    bool diagnostics = true;
    ThinFilmConfig thinfilm;
    std::string field_path; // input dump for `verify`

    std::string echo; // canonical serialization, embedded in result.json

    double eps() const; // first schedule entry
    void override_seed(std::uint64_t s);
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Dispatches one command and writes result.json plus CSV dumps into out_dir.
// Returns the process exit status: 0 success, 2 bad config, 3 numeric failure
// (partial artifacts are still written), 4 I/O failure.
int run_command(const std::string& command, RunConfig cfg, const std::string& out_dir,
                int jobs = 1);

} // namespace vlab
