// io.hpp — batch command dispatch and deterministic artifact emission.
// Exit codes: 0 success, 1 validation error, 2 a verified bound was violated.
#pragma once

#include "spinw1/schema.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spinw1 {

struct RunConfig {
    std::string command;  // w1 | conc-bound | conc-verify | corr-length | ensembles
    std::string input_path;
    std::string out_path;            // empty -> stdout
    std::string format = "json";     // json | csv
    int k = 2;
    double beta = 0.5;
    double delta = 0.0;              // 0 -> delta_fraction * spectral norm (ensembles)
    std::string a_grid = "0.1:1.0:10";
    long instances = 20;
    std::uint64_t seed = 42;
    double tol = 1e-12;
};

// Numbers rendered at 17 significant digits so identical runs emit identical
// bytes.
std::string format_double(double v);

// "start:stop:steps" -> inclusive linear grid.
std::vector<double> parse_grid(const std::string& grid);

struct RunResult {
    int exit_code = 0;
    std::string artifact;  // the emitted document
};

// Runs the command and returns the artifact without touching the filesystem
// (used by the determinism tests).
RunResult run_to_string(const RunConfig& cfg);

// Runs the command and writes the artifact to cfg.out_path (or stdout).
int run_command(const RunConfig& cfg);

}  // namespace spinw1
