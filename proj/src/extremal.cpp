#include "structpsa/extremal.hpp"

#include <cmath>
#include <string>

namespace structpsa {

void IterationOptions::validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0)
        throw Error(ErrorCode::InvalidSpec, "epsilon must be finite and non-negative");
    if (!(tol_lambda > 0.0) || !(tol_residual > 0.0))
        throw Error(ErrorCode::InvalidSpec, "tolerances must be positive");
    if (max_iter < 1) throw Error(ErrorCode::InvalidSpec, "max_iter must be >= 1");
    if (stagnation_window < 1) throw Error(ErrorCode::InvalidSpec, "stagnation_window must be >= 1");
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Converged: return "Converged";
        case Status::MaxIter: return "MaxIter";
        case Status::Stagnated: return "Stagnated";
        case Status::Error: return "Error";
    }
    return "Unknown";
}

StructuredMatrix extremal_direction(const RPEigentriple& triple, const StructureSpec& spec, Target target) {
    StructuredMatrix e = normalized(project_s_rank_one(triple.y, triple.x, spec));
    if (target == Target::Rightmost) return e;
    if (triple.lambda == Complex{})
        throw Error(ErrorCode::PhaseUndefined, "eigenvalue is zero, arg undefined");
    const Complex phase = triple.lambda / std::abs(triple.lambda);
    return (target == Target::LargestModulus ? phase : -phase) * e;
}

namespace {

Matrix shifted_operator(const StructuredMatrix& a, Complex shift) {
    Matrix m = materialize(a);
    if (shift != Complex{}) m.diagonal().array() -= shift;
    return m;
}

std::size_t select_target(std::span<const Complex> spectrum, std::optional<Complex> prev, Target target) {
    switch (target) {
        case Target::Rightmost: return select_rightmost(spectrum, prev);
        case Target::LargestModulus: return select_largest_modulus(spectrum, prev);
        case Target::SmallestModulus: return select_smallest_modulus(spectrum, prev);
    }
    return 0;
}

double objective_of(Complex lambda, Target target) {
    return target == Target::Rightmost ? lambda.real() : std::abs(lambda);
}

// Selected RP triple of `op`.
RPEigentriple extreme_triple(const Matrix& op, std::optional<Complex> prev, Target target,
                             std::vector<Complex>* spectrum_out = nullptr) {
    auto pairs = eig_all(op);
    std::vector<Complex> spectrum;
    spectrum.reserve(pairs.size());
    for (const auto& p : pairs) spectrum.push_back(p.value);
    const std::size_t k = select_target(spectrum, prev, target);
    if (spectrum_out) *spectrum_out = std::move(spectrum);
    return rp_normalize(pairs[k]);
}

StepResult generic_step(const Matrix& op, const StructureSpec& spec, const IterationOptions& opts,
                        const RPEigentriple& prev, Target target, std::optional<Complex> phase = std::nullopt) {
    StructuredMatrix e(spec);
    Matrix b = op;
    if (opts.epsilon > 0.0) {
        e = normalized(project_s_rank_one(prev.y, prev.x, spec));
        if (target != Target::Rightmost) {
            Complex ph;
            if (phase) {
                ph = *phase;
            } else {
                if (prev.lambda == Complex{})
                    throw Error(ErrorCode::PhaseUndefined, "previous eigenvalue is zero, arg undefined");
                ph = prev.lambda / std::abs(prev.lambda);
            }
            e *= (target == Target::LargestModulus ? ph : -ph);
        }
        b += opts.epsilon * materialize(e);
    }
    RPEigentriple t = extreme_triple(b, prev.lambda, target);
    return StepResult{t.lambda, std::move(t), std::move(e)};
}

}  // namespace

StepResult abscissa_step(const StructuredMatrix& a, const IterationOptions& opts, const RPEigentriple& prev) {
    return generic_step(materialize(a), a.spec(), opts, prev, Target::Rightmost);
}

StepResult radius_step(const StructuredMatrix& a, const IterationOptions& opts, const RPEigentriple& prev,
                       std::optional<Complex> phase) {
    return generic_step(materialize(a), a.spec(), opts, prev, Target::LargestModulus, phase);
}

double fixed_point_residual(const StructuredMatrix& a, const IterationOptions& opts, const RPEigentriple& triple,
                            Target target, Complex shift) {
    Matrix b = shifted_operator(a, shift);
    if (opts.epsilon > 0.0) b += opts.epsilon * materialize(extremal_direction(triple, a.spec(), target));
    const Vector bx = b * triple.x;
    const Complex rq = triple.y.dot(bx) / triple.y.dot(triple.x);
    const double right = (bx - rq * triple.x).norm();
    // y^* B - l y^*  <=>  B^* y - conj(l) y
    const double left = (b.adjoint() * triple.y - std::conj(rq) * triple.y).norm();
    return std::max(right, left);
}

IterationTrace run_extremal_iteration(const StructuredMatrix& a, const IterationOptions& opts, Target target,
                                      Complex shift, const std::optional<WarmStart>& warm) {
    opts.validate();
    const auto& spec = a.spec();
    const Matrix op = shifted_operator(a, shift);

    IterationTrace trace;
    trace.target = target;

    std::vector<Complex> spectrum;
    IterationRecord first{0, {}, {}, StructuredMatrix(spec)};
    if (warm) {
        if (!(warm->perturbation.spec() == spec))
            throw Error(ErrorCode::SpecMismatch, "warm-start perturbation has a different structure");
        first.perturbation = warm->perturbation;
        Matrix b0 = op;
        if (opts.epsilon > 0.0) b0 += opts.epsilon * materialize(warm->perturbation);
        first.triple = extreme_triple(b0, warm->lambda, target, &spectrum);
    } else {
        first.triple = extreme_triple(op, std::nullopt, target, &spectrum);
        const std::size_t idx = select_target(spectrum, std::nullopt, target);
        const double norm_op = norm2(op);
        if (eigen_gap(spectrum, idx) <= 1e-10 * norm_op)
            trace.warnings.push_back("extreme eigenvalue of the unperturbed matrix is not simple");
    }
    first.lambda = first.triple.lambda;
    trace.iterates.push_back(std::move(first));

    int stagnant = 0;
    trace.status = Status::MaxIter;
    for (int k = 1; k <= opts.max_iter; ++k) {
        const IterationRecord& prev = trace.iterates.back();
        StepResult step = generic_step(op, spec, opts, prev.triple, target);
        const double residual = fixed_point_residual(a, opts, step.triple, target, shift);
        const double change = std::abs(step.lambda - prev.lambda);
        const bool small_step = change <= opts.tol_lambda * (1.0 + std::abs(step.lambda));

        trace.iterates.push_back(IterationRecord{k, step.lambda, std::move(step.triple), std::move(step.perturbation)});
        trace.final_residual = residual;

        if (small_step && residual <= opts.tol_residual) {
            trace.status = Status::Converged;
            break;
        }
        stagnant = small_step ? stagnant + 1 : 0;
        if (stagnant >= opts.stagnation_window) {
            trace.status = Status::Stagnated;
            break;
        }
    }
    trace.objective = objective_of(trace.lambda(), target);
    return trace;
}

IterationTrace compute_abscissa(const StructuredMatrix& a, const IterationOptions& opts,
                                const std::optional<WarmStart>& warm) {
    return run_extremal_iteration(a, opts, Target::Rightmost, {}, warm);
}

IterationTrace compute_radius(const StructuredMatrix& a, const IterationOptions& opts) {
    return run_extremal_iteration(a, opts, Target::LargestModulus);
}

MinModulusResult min_modulus_shifted(const StructuredMatrix& a, const IterationOptions& opts, Complex mu) {
    const double scale = 1.0 + std::abs(mu) + norm2(materialize(a));
    IterationTrace trace;
    try {
        trace = run_extremal_iteration(a, opts, Target::SmallestModulus, mu);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::PhaseUndefined)
            throw Error(ErrorCode::InsideSet, "shift point lies in the structured pseudospectrum");
        throw;
    }
    if (std::abs(trace.lambda()) <= 1e-10 * scale)
        throw Error(ErrorCode::InsideSet, "minimal modulus collapsed to zero; shift point is inside the set");
    const Complex point = trace.lambda() + mu;
    return MinModulusResult{point, std::move(trace)};
}

}  // namespace structpsa
