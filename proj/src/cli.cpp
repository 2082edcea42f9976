#include "structpsa/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "structpsa/analysis.hpp"
#include "structpsa/boundary.hpp"
#include "structpsa/extremal.hpp"
#include "structpsa/io.hpp"
#include "structpsa/tridiag.hpp"

namespace structpsa::cli {

using io::json;

namespace {

const std::map<std::string, Command> kCommands = {
    {"abscissa", Command::Abscissa}, {"radius", Command::Radius}, {"boundary", Command::Boundary},
    {"minmod", Command::MinMod},     {"tridiag", Command::Tridiag}, {"flow", Command::Flow},
    {"sample", Command::Sample},     {"contour", Command::Contour},
};

std::string command_name(Command c) {
    for (const auto& [name, cmd] : kCommands)
        if (cmd == c) return name;
    return "unknown";
}

// CSV rows are written with round-trip precision.
struct Csv {
    std::ostringstream s;
    Csv() { s << std::setprecision(17); }
    template <class... Ts>
    void row(const Ts&... cols) {
        bool first = true;
        ((s << (first ? "" : ",") << cols, first = false), ...);
        s << '\n';
    }
};

int status_exit(Status s) {
    switch (s) {
        case Status::Converged: return kExitOk;
        case Status::MaxIter:
        case Status::Stagnated: return kExitNotConverged;
        case Status::Error: return kExitError;
    }
    return kExitError;
}

struct Output {
    json doc;
    std::string csv;
    int code = kExitOk;
};

IterationOptions options_of(const RunConfig& c) {
    IterationOptions o;
    o.epsilon = c.epsilon;
    o.max_iter = c.max_iter;
    if (c.tol) {
        o.tol_lambda = *c.tol;
        o.tol_residual = std::max(*c.tol * 100.0, 1e-14);
    }
    return o;
}

Output run_iteration(const RunConfig& c, const StructuredMatrix& a) {
    const IterationOptions opts = options_of(c);
    IterationTrace trace = c.command == Command::Abscissa ? compute_abscissa(a, opts) : compute_radius(a, opts);
    Output out;
    out.doc = io::trace_json(trace);
    if (trace.status == Status::Converged && trace.iterations() >= 1) {
        try {
            out.doc["rate"] = io::rate_json(rate_estimate(a, opts, trace));
        } catch (const Error& e) {
            out.doc["rate_error"] = e.what();
        }
    }
    Csv csv;
    csv.row("k", "re", "im");
    for (const auto& it : trace.iterates) csv.row(it.k, it.lambda.real(), it.lambda.imag());
    out.csv = csv.s.str();
    out.code = status_exit(trace.status);
    return out;
}

Output run_boundary(const RunConfig& c, const StructuredMatrix& a) {
    const auto thetas = theta_grid(c.theta_count, c.theta_range[0], c.theta_range[1]);
    const BoundaryTrace bt = trace_boundary(a, options_of(c), thetas);
    Output out;
    out.doc = io::boundary_json(bt);
    Csv csv;
    csv.row("theta", "re", "im", "residual", "status");
    bool all = true;
    for (const auto& p : bt.points) {
        csv.row(p.theta, p.lambda.real(), p.lambda.imag(), p.residual, to_string(p.status));
        all = all && p.status == Status::Converged;
    }
    out.csv = csv.s.str();
    out.code = all ? kExitOk : kExitNotConverged;
    return out;
}

Output run_minmod(const RunConfig& c, const StructuredMatrix& a) {
    const Complex mu(c.mu[0], c.mu[1]);
    MinModulusResult r = min_modulus_shifted(a, options_of(c), mu);
    Output out;
    out.doc = {{"mu", io::complex_json(mu)}, {"point", io::complex_json(r.point)}, {"trace", io::trace_json(r.trace)}};
    Csv csv;
    csv.row("re", "im", "residual", "status");
    csv.row(r.point.real(), r.point.imag(), r.trace.final_residual, to_string(r.trace.status));
    out.csv = csv.s.str();
    out.code = status_exit(r.trace.status);
    return out;
}

Output run_tridiag(const RunConfig& c, const StructuredMatrix& a) {
    const auto& spec = a.spec();
    if (spec.orientation() != Orientation::Diagonal || !(spec == StructureSpec::tridiagonal(a.n())))
        throw Error(ErrorCode::InvalidSpec, "tridiag command needs a tridiagonal Toeplitz matrix (offsets -1, 0, 1)");
    const auto p = tridiag::Problem::make(a.coeff(-1), a.coeff(0), a.coeff(1), a.n(), c.epsilon);
    const auto fp = tridiag::solve_fixed_point(p);
    const Complex lambda = tridiag::closed_form_abscissa(p);
    Output out;
    out.doc = io::fixed_point_json(p, fp);
    out.doc["objective"] = lambda.real();
    out.doc["lambda"] = io::complex_json(lambda);
    out.doc["equation_residual"] = tridiag::fixed_point_equation_residual(p, fp);
    Csv csv;
    csv.row("re", "im", "rho_star", "phi_star");
    csv.row(lambda.real(), lambda.imag(), fp.rho_star, fp.phi_star);
    out.csv = csv.s.str();
    return out;
}

StructuredMatrix random_unit(const StructureSpec& spec, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    StructuredMatrix e(spec);
    for (auto& v : e.coeffs()) {
        const double re = normal(gen);
        const double im = normal(gen);
        v = Complex(re, im);
    }
    return normalized(e);
}

Output run_flow(const RunConfig& c, const StructuredMatrix& a) {
    const FlowTrajectory traj = integrate_flow(a, c.epsilon, random_unit(a.spec(), c.seed), c.t_end, c.step, c.flow_form);
    Output out;
    json states = json::array();
    Csv csv;
    csv.row("t", "re", "im", "rhs_norm");
    double worst_drop = 0.0;
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        const auto& s = traj.states[j];
        states.push_back({{"t", s.t}, {"re", s.lambda.real()}, {"im", s.lambda.imag()}, {"rhs_norm", traj.rhs_norms[j]}});
        csv.row(s.t, s.lambda.real(), s.lambda.imag(), traj.rhs_norms[j]);
        if (j > 0) worst_drop = std::max(worst_drop, traj.states[j - 1].lambda.real() - s.lambda.real());
    }
    out.doc = {{"seed", c.seed}, {"step", c.step}, {"t_end", c.t_end},
               {"form", c.flow_form == FlowForm::Gradient ? "gradient" : "literal"}, {"aborted", traj.aborted},
               {"max_real_decrease", worst_drop}, {"states", std::move(states)}};
    if (!traj.states.empty()) out.doc["terminal"] = io::complex_json(traj.states.back().lambda);
    if (traj.aborted) out.doc["error"] = traj.error;
    out.csv = csv.s.str();
    out.code = traj.aborted ? kExitNotConverged : kExitOk;
    return out;
}

Output run_sample(const RunConfig& c, const StructuredMatrix& a) {
    const auto pts = sample_spectra(a, c.epsilon, c.samples, c.seed);
    Output out;
    json arr = json::array();
    Csv csv;
    csv.row("re", "im");
    for (auto z : pts) {
        arr.push_back({z.real(), z.imag()});
        csv.row(z.real(), z.imag());
    }
    out.doc = {{"rng", kSamplerAlgorithm}, {"seed", c.seed}, {"count", c.samples}, {"points", std::move(arr)}};
    out.csv = csv.s.str();
    return out;
}

Output run_contour(const RunConfig& c, const StructuredMatrix& a) {
    Grid g{c.grid[0], c.grid[1], c.grid[2], c.grid[3], static_cast<int>(c.grid[4])};
    const ContourField f = unstructured_contour(a, g);
    Output out;
    Csv csv;
    csv.row("x", "y", "sigma_min");
    for (int j = 0; j < g.resolution; ++j)
        for (int i = 0; i < g.resolution; ++i) csv.row(g.x(i), g.y(j), f.at(i, j));
    out.doc = {{"grid", {{"x0", g.x0}, {"x1", g.x1}, {"y0", g.y0}, {"y1", g.y1}, {"resolution", g.resolution}}},
               {"level", c.epsilon},
               {"values", f.values}};
    out.csv = csv.s.str();
    return out;
}

}  // namespace

StructuredMatrix load_matrix(const RunConfig& config) {
    if (config.preset && config.matrix_path)
        throw Error(ErrorCode::Parse, "--preset and --matrix are mutually exclusive");
    if (config.preset) return io::preset(*config.preset);
    if (!config.matrix_path) throw Error(ErrorCode::Parse, "one of --preset or --matrix is required");
    std::ifstream in(*config.matrix_path);
    if (!in) throw Error(ErrorCode::Parse, "cannot open " + *config.matrix_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    return io::parse_matrix(std::string_view(text));
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    StructuredMatrix a = [&] {
        try {
            return load_matrix(config);
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            throw;
        }
    }();

    Output result;
    try {
        switch (config.command) {
            case Command::Abscissa:
            case Command::Radius: result = run_iteration(config, a); break;
            case Command::Boundary: result = run_boundary(config, a); break;
            case Command::MinMod: result = run_minmod(config, a); break;
            case Command::Tridiag: result = run_tridiag(config, a); break;
            case Command::Flow: result = run_flow(config, a); break;
            case Command::Sample: result = run_sample(config, a); break;
            case Command::Contour: result = run_contour(config, a); break;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    std::string payload;
    if (config.format == Format::Csv) {
        payload = result.csv;
    } else {
        json doc = {{"schema", io::kSchemaVersion},
                    {"command", command_name(config.command)},
                    {"epsilon", config.epsilon},
                    {"matrix", io::serialize_matrix(a)},
                    {"result", std::move(result.doc)}};
        payload = doc.dump(2) + "\n";
    }

    if (config.out_path) {
        std::ofstream f(*config.out_path);
        if (!f) {
            err << "error: cannot write " << *config.out_path << '\n';
            return kExitError;
        }
        f << payload;
    } else {
        out << payload;
    }
    if (result.code == kExitNotConverged) err << "warning: iteration did not converge\n";
    return result.code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structured pseudospectra of Toeplitz and Hankel matrices"};
    RunConfig cfg;
    std::string command;
    std::string preset, matrix, out_path, format = "json";
    std::vector<double> theta_range, mu, grid;
    double tol = 0.0;

    app.add_option("command", command, "abscissa | radius | boundary | minmod | tridiag | flow | sample | contour")
        ->required()
        ->check(CLI::IsMember({"abscissa", "radius", "boundary", "minmod", "tridiag", "flow", "sample", "contour"}));
    app.add_option("--preset", preset, "example1 | example2 | example3");
    app.add_option("--matrix", matrix, "matrix-spec JSON file");
    app.add_option("--epsilon", cfg.epsilon, "perturbation budget (Frobenius norm)");
    app.add_option("--theta-count", cfg.theta_count, "number of directions for boundary");
    app.add_option("--theta-range", theta_range, "lo,hi in radians")->delimiter(',')->expected(2);
    app.add_option("--mu", mu, "re,im of the exterior shift for minmod")->delimiter(',')->expected(2);
    app.add_option("--samples", cfg.samples, "Monte-Carlo sample count");
    app.add_option("--seed", cfg.seed, "RNG seed");
    app.add_option("--grid", grid, "x0,x1,y0,y1,res for contour")->delimiter(',')->expected(5);
    app.add_option("--tol", tol, "eigenvalue step tolerance (relative)");
    app.add_option("--max-iter", cfg.max_iter, "iteration cap");
    app.add_option("--t-end", cfg.t_end, "flow end time");
    app.add_option("--step", cfg.step, "flow step");
    std::string flow_form = "gradient";
    app.add_option("--flow-form", flow_form, "gradient | literal")->check(CLI::IsMember({"gradient", "literal"}));
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    cfg.command = kCommands.at(command);
    if (!preset.empty()) cfg.preset = preset;
    if (!matrix.empty()) cfg.matrix_path = matrix;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (tol > 0.0) cfg.tol = tol;
    cfg.format = format == "csv" ? Format::Csv : Format::Json;
    cfg.flow_form = flow_form == "literal" ? FlowForm::Literal : FlowForm::Gradient;
    if (theta_range.size() == 2) cfg.theta_range = {theta_range[0], theta_range[1]};
    if (mu.size() == 2) cfg.mu = {mu[0], mu[1]};
    if (grid.size() == 5) cfg.grid = {grid[0], grid[1], grid[2], grid[3], grid[4]};
    if (!(cfg.epsilon >= 0.0)) {
        err << "usage error: --epsilon must be non-negative\n";
        return kExitUsage;
    }

    try {
        return run(cfg, out, err);
    } catch (const Error& e) {
        // matrix loading failures are input errors
        return e.code() == ErrorCode::Parse || e.code() == ErrorCode::InvalidSpec || e.code() == ErrorCode::SpecMismatch
                   ? kExitUsage
                   : kExitError;
    }
}

}  // namespace structpsa::cli
