#include "structpsa/io.hpp"

#include <charconv>
#include <cmath>
#include <map>

namespace structpsa::io {

namespace {

[[noreturn]] void fail(std::string_view field, const std::string& msg) {
    throw Error(ErrorCode::Parse, std::string(field) + ": " + msg);
}

double parse_decimal(std::string_view s, std::string_view field) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        fail(field, "cannot parse '" + std::string(s) + "' as a real number");
    return v;
}

}  // namespace

double parse_real(const json& value, std::string_view field) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) fail(field, "expected a number or a string");
    const std::string s = value.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s, field);
    const double num = parse_decimal(std::string_view(s).substr(0, slash), field);
    const double den = parse_decimal(std::string_view(s).substr(slash + 1), field);
    if (den == 0.0) fail(field, "zero denominator in '" + s + "'");
    return num / den;
}

StructuredMatrix parse_matrix(const json& doc) {
    if (!doc.is_object()) fail("<root>", "expected a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) fail("n", "missing or not an integer");
    const int n = doc["n"].get<int>();

    Orientation orientation = Orientation::Diagonal;
    if (doc.contains("orientation")) {
        if (!doc["orientation"].is_string()) fail("orientation", "expected a string");
        const auto o = doc["orientation"].get<std::string>();
        if (o == "diagonal") orientation = Orientation::Diagonal;
        else if (o == "antidiagonal") orientation = Orientation::Antidiagonal;
        else fail("orientation", "expected \"diagonal\" or \"antidiagonal\", got \"" + o + "\"");
    }

    if (!doc.contains("coeffs") || !doc["coeffs"].is_array()) fail("coeffs", "missing or not an array");
    std::map<int, Complex> coeffs;
    const auto& arr = doc["coeffs"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "coeffs[" + std::to_string(i) + "]";
        const auto& c = arr[i];
        if (!c.is_object()) fail(where, "expected an object");
        if (!c.contains("offset") || !c["offset"].is_number_integer()) fail(where + ".offset", "missing or not an integer");
        const int off = c["offset"].get<int>();
        const double re = c.contains("re") ? parse_real(c["re"], where + ".re") : 0.0;
        const double im = c.contains("im") ? parse_real(c["im"], where + ".im") : 0.0;
        if (!coeffs.emplace(off, Complex(re, im)).second) fail(where + ".offset", "duplicate offset " + std::to_string(off));
    }

    std::vector<int> offsets;
    std::vector<Complex> values;
    for (const auto& [off, v] : coeffs) {
        offsets.push_back(off);
        values.push_back(v);
    }
    try {
        return StructuredMatrix(StructureSpec(n, orientation, std::move(offsets)), std::move(values));
    } catch (const Error& e) {
        fail("<structure>", e.what());
    }
}

StructuredMatrix parse_matrix(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    return parse_matrix(doc);
}

json serialize_matrix(const StructuredMatrix& t) {
    json coeffs = json::array();
    const auto& spec = t.spec();
    for (std::size_t k = 0; k < spec.size(); ++k)
        coeffs.push_back({{"offset", spec.offsets()[k]}, {"re", t.coeffs()[k].real()}, {"im", t.coeffs()[k].imag()}});
    return {{"n", spec.n()},
            {"orientation", spec.orientation() == Orientation::Diagonal ? "diagonal" : "antidiagonal"},
            {"coeffs", std::move(coeffs)}};
}

StructuredMatrix preset(std::string_view name) {
    const Complex s(-0.1, 0.1), d(-0.3, 0.4), t(2.0, 1.0);
    if (name == "example1") return StructuredMatrix(StructureSpec::tridiagonal(12), {s, d, t});
    if (name == "example3")
        return StructuredMatrix(StructureSpec::tridiagonal(12, Orientation::Antidiagonal), {s, d, t});
    if (name == "example2") {
        const double v = 10.0 / 19.0;
        return StructuredMatrix(StructureSpec(30, Orientation::Diagonal, {-2, 1}), {v, v});
    }
    throw Error(ErrorCode::Parse, "unknown preset '" + std::string(name) + "'");
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json trace_json(const IterationTrace& trace) {
    json iters = json::array();
    for (const auto& it : trace.iterates)
        iters.push_back({{"k", it.k}, {"re", it.lambda.real()}, {"im", it.lambda.imag()}, {"gap", it.triple.gap}});
    json warnings = trace.warnings;
    return {{"status", to_string(trace.status)},
            {"iterations", trace.iterations()},
            {"objective", trace.objective},
            {"lambda", complex_json(trace.lambda())},
            {"final_residual", trace.final_residual},
            {"perturbation", serialize_matrix(trace.last().perturbation)},
            {"iterates", std::move(iters)},
            {"warnings", std::move(warnings)}};
}

json rate_json(const RateEstimate& r) {
    return {{"rho", r.rho},
            {"sigma_gap", r.sigma_gap},
            {"const_c", r.const_c},
            {"r_bound", r.r_bound},
            {"r_empirical", r.r_empirical},
            {"r_empirical_lambda", r.r_empirical_lambda},
            {"rate_samples", r.rate_samples},
            {"group_inverse_norm", r.group_inverse_norm},
            {"group_inverse_bound", r.group_inverse_bound}};
}

json boundary_json(const BoundaryTrace& b) {
    json pts = json::array();
    for (const auto& p : b.points) {
        json j = {{"theta", p.theta},         {"re", p.lambda.real()},  {"im", p.lambda.imag()},
                  {"residual", p.residual},   {"status", to_string(p.status)}, {"iterations", p.iterations}};
        if (!p.message.empty()) j["message"] = p.message;
        pts.push_back(std::move(j));
    }
    json hull = json::array();
    for (auto z : b.hull) hull.push_back(complex_json(z));
    return {{"points", std::move(pts)}, {"hull", std::move(hull)}};
}

json fixed_point_json(const tridiag::Problem& p, const tridiag::FixedPoint& fp) {
    return {{"r_index", p.r_index},
            {"a", p.a},
            {"b", p.b},
            {"rho_star", fp.rho_star},
            {"phi_star", fp.phi_star},
            {"branch", fp.branch == tridiag::Branch::Plus ? "plus" : "minus"},
            {"rho_plus", fp.rho_plus},
            {"rho_minus", fp.rho_minus},
            {"sigma_hat", complex_json(fp.sigma_hat)},
            {"delta_hat", complex_json(fp.delta_hat)},
            {"tau_hat", complex_json(fp.tau_hat)},
            {"ordering_ok", fp.ordering_ok},
            {"r_preserved", fp.r_preserved},
            {"special_case", fp.special_case}};
}

}  // namespace structpsa::io
