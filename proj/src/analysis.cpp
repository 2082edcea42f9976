#include "structpsa/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace structpsa {

Matrix group_inverse(const Matrix& c, std::optional<double> null_tol) {
    if (c.rows() != c.cols() || c.rows() < 2)
        throw Error(ErrorCode::DimensionMismatch, "group inverse needs a square matrix of size >= 2");
    const Eigen::Index n = c.rows();
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double tol = null_tol.value_or(1e-10 * s(0));
    if (s(n - 1) > tol) throw Error(ErrorCode::NotSingular, "smallest singular value above the null tolerance");
    if (s(n - 2) <= tol) throw Error(ErrorCode::MultipleZero, "null space has dimension > 1");

    const Vector x = svd.matrixV().col(n - 1);
    const Vector y = svd.matrixU().col(n - 1);
    const Complex yx = y.dot(x);
    if (std::abs(yx) <= 1e-14)
        throw Error(ErrorCode::MultipleZero, "zero eigenvalue is defective (y^* x = 0)");
    const Vector w = x / yx;

    Vector xi = Vector::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) xi(i) = 1.0 / s(i);
    const Matrix core = svd.matrixV() * xi.asDiagonal() * svd.matrixU().adjoint();
    const Matrix p = Matrix::Identity(n, n) - w * y.adjoint();
    return p * core * p;
}

GroupInverseResiduals group_inverse_residuals(const Matrix& c, const Matrix& g) {
    return {(c * g - g * c).norm(), (g * c * g - g).norm(), (c * g * c - c).norm()};
}

namespace {

// Geometric mean of the last `count` ratios e_{k+1}/e_k over errors above floor.
std::pair<double, int> geometric_rate(const std::vector<double>& errors, double floor, int count) {
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (errors[k] > floor && errors[k + 1] > floor) ratios.push_back(errors[k + 1] / errors[k]);
        else if (errors[k + 1] <= floor) break;
    }
    if (ratios.empty()) return {0.0, 0};
    const std::size_t take = std::min<std::size_t>(count, ratios.size());
    double log_sum = 0.0;
    for (std::size_t i = ratios.size() - take; i < ratios.size(); ++i) log_sum += std::log(ratios[i]);
    return {std::exp(log_sum / take), static_cast<int>(take)};
}

}  // namespace

RateEstimate rate_estimate(const StructuredMatrix& a, const IterationOptions& opts, const IterationTrace& trace) {
    if (trace.status != Status::Converged || trace.iterates.size() < 2)
        throw Error(ErrorCode::InvalidSpec, "rate estimate needs a converged trace");
    const IterationRecord& last = trace.last();
    const int n = a.n();

    Matrix c = materialize(a) + opts.epsilon * materialize(last.perturbation);
    c.diagonal().array() -= last.lambda;
    Eigen::JacobiSVD<Matrix> svd(c);

    RateEstimate est;
    est.rho = 1.0 / last.triple.gap;
    est.sigma_gap = svd.singularValues()(n - 2);
    est.const_c = 2.0 * n / last.triple.gap;
    est.r_bound = 4.0 * est.const_c * est.rho * est.rho * opts.epsilon / est.sigma_gap;

    const Matrix g = group_inverse(c);
    est.group_inverse_norm = norm2(g);
    est.group_inverse_bound = est.rho * est.rho / est.sigma_gap;

    // Errors at roundoff level carry no rate information.
    const double floor = 1e3 * opts.tol_lambda * (1.0 + std::abs(last.lambda));
    const auto target = trace.target;
    auto objective = [target](Complex z) { return target == Target::Rightmost ? z.real() : std::abs(z); };
    std::vector<double> obj_err, lam_err;
    for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
        obj_err.push_back(std::abs(objective(trace.iterates[k].lambda) - objective(last.lambda)));
        lam_err.push_back(std::abs(trace.iterates[k].lambda - last.lambda));
    }
    std::tie(est.r_empirical, est.rate_samples) = geometric_rate(obj_err, floor, 5);
    est.r_empirical_lambda = geometric_rate(lam_err, floor, 5).first;
    return est;
}

namespace {

RPEigentriple rightmost_triple(const Matrix& op, std::optional<Complex> prev) {
    auto pairs = eig_all(op);
    std::vector<Complex> spectrum;
    for (const auto& p : pairs) spectrum.push_back(p.value);
    return rp_normalize(pairs[select_rightmost(spectrum, prev)]);
}

FlowEvaluation evaluate_at(const StructuredMatrix& e, const RPEigentriple& triple, FlowForm form) {
    StructuredMatrix l = normalized(project_s_rank_one(triple.y, triple.x, e.spec()));
    const Complex align = inner(e, l);
    StructuredMatrix rhs = l - (form == FlowForm::Gradient ? Complex(align.real()) : align) * e;
    return FlowEvaluation{std::move(rhs), triple, align};
}

}  // namespace

FlowState make_flow_state(const StructuredMatrix& a, double epsilon, const StructuredMatrix& e0) {
    const RPEigentriple t = rightmost_triple(materialize(a) + epsilon * materialize(e0), std::nullopt);
    return FlowState{e0, 0.0, t.lambda};
}

FlowEvaluation evaluate_flow(const FlowState& state, const StructuredMatrix& a, double epsilon, FlowForm form) {
    const RPEigentriple t = rightmost_triple(materialize(a) + epsilon * materialize(state.e), state.lambda);
    return evaluate_at(state.e, t, form);
}

FlowTrajectory integrate_flow(const StructuredMatrix& a, double epsilon, const StructuredMatrix& e0, double t_end,
                              double step, FlowForm form) {
    if (!(step > 0.0) || !(t_end >= 0.0)) throw Error(ErrorCode::InvalidSpec, "step must be positive, t_end >= 0");
    const double n0 = frobenius(e0);
    if (std::abs(n0 - 1.0) > 1e-10) throw Error(ErrorCode::InvalidSpec, "initial perturbation must have unit norm");

    const Matrix a_dense = materialize(a);
    FlowTrajectory out;
    const int steps = static_cast<int>(std::llround(t_end / step));
    try {
        StructuredMatrix e = e0;
        RPEigentriple triple = rightmost_triple(a_dense + epsilon * materialize(e), std::nullopt);
        for (int j = 0;; ++j) {
            FlowEvaluation ev = evaluate_at(e, triple, form);
            out.states.push_back(FlowState{e, j * step, triple.lambda});
            out.rhs_norms.push_back(frobenius(ev.rhs));
            if (j == steps) break;
            e += step * ev.rhs;
            e = normalized(e);
            triple = rightmost_triple(a_dense + epsilon * materialize(e), triple.lambda);
        }
    } catch (const Error& err) {
        if (err.code() != ErrorCode::DefectivePair && err.code() != ErrorCode::ZeroProjection) throw;
        out.aborted = true;
        out.error = err.what();
    }
    return out;
}

DerivativeCheck derivative_check(const StructuredMatrix& a, const RPEigentriple& triple, const StructuredMatrix& e,
                                 std::vector<double> steps) {
    using LComplex = std::complex<long double>;
    using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix e_dense = materialize(e);
    const LMatrix a_long = materialize(a).cast<LComplex>();
    const LMatrix e_long = e_dense.cast<LComplex>();

    auto continued = [&](const LMatrix& m, LComplex near) {
        Eigen::ComplexEigenSolver<LMatrix> solver(m, false);
        if (solver.info() != Eigen::Success) throw Error(ErrorCode::SolverError, "extended-precision eigensolver failed");
        const auto& values = solver.eigenvalues();
        LComplex best = values(0);
        for (Eigen::Index i = 1; i < values.size(); ++i)
            if (std::abs(values(i) - near) < std::abs(best - near)) best = values(i);
        return best;
    };

    DerivativeCheck out;
    out.predicted_complex = triple.y.dot(e_dense * triple.x) / triple.gap;
    out.predicted = out.predicted_complex.real();
    out.steps = std::move(steps);
    const LComplex base = continued(a_long, LComplex(triple.lambda));
    for (double t : out.steps) {
        const LComplex moved = continued(a_long + static_cast<long double>(t) * e_long, base);
        const LComplex q = (moved - base) / static_cast<long double>(t);
        out.observed.emplace_back(static_cast<double>(q.real()), static_cast<double>(q.imag()));
    }
    return out;
}

}  // namespace structpsa
