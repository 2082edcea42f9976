#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "structpsa/analysis.hpp"
#include "structpsa/structure.hpp"

namespace structpsa::cli {

enum class Command { Abscissa, Radius, Boundary, MinMod, Tridiag, Flow, Sample, Contour };

enum class Format { Json, Csv };

struct RunConfig {
    Command command = Command::Abscissa;
    std::optional<std::string> preset;
    std::optional<std::string> matrix_path;
    double epsilon = 0.5;
    int theta_count = 64;
    std::array<double, 2> theta_range{0.0, 6.283185307179586};
    std::array<double, 2> mu{0.0, 0.0};
    int samples = 1000;
    std::uint64_t seed = 1;
    std::array<double, 5> grid{-1.0, 1.0, -1.0, 1.0, 100.0};
    std::optional<double> tol;
    int max_iter = 200;
    double t_end = 50.0;
    FlowForm flow_form = FlowForm::Gradient;
    double step = 1e-2;
    std::optional<std::string> out_path;
    Format format = Format::Json;
};

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

/// Loads the matrix named by the config (preset or --matrix file).
StructuredMatrix load_matrix(const RunConfig& config);

/// Executes one command; results go to --out or `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and runs. Usage errors exit 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace structpsa::cli
