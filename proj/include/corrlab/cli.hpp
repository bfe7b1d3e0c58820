#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrlab/common.hpp"

namespace corrlab::cli {

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string out, out_csv, out_ppm, out_dot, meta;

    double tol = 1e-8;
    int grid = 64;
    int d = 3;
    int depth = 40;
    int width = 2000;
    int px = 64;
    int path_steps = 64;
    cplx c{0.0, 0.0};
    cplx center{0.0, 0.0};
    double radius = 4.0;
    unsigned seed = 0;
    std::optional<std::vector<double>> samples;
    bool find_b = false;
    std::string a_file, b_file;
    bool serial = false;
};

struct EmittedFile {
    std::string path;
    std::string fnv1a64_hex;
};

struct RunReport {
    std::string subcommand;
    double elapsed_seconds = 0.0;
    std::vector<EmittedFile> outputs;
    std::string result_json; // subcommand-specific summary
};

// Parses argv; throws Error("UsageError", ...) on invalid input.
RunConfig parse_args(const std::vector<std::string>& argv);

// Dispatches to the owning module; artifacts are written atomically.
RunReport run(const RunConfig& config);

// Full entry point: parse, run, print the report; returns the exit code
// (0 success, 1 domain/io error, 2 usage error) and prints structured error
// JSON on stderr for failures.
int main_entry(int argc, const char* const* argv);

} // namespace corrlab::cli
