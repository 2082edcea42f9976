#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structpsa/eigen.hpp"
#include "structpsa/structure.hpp"

namespace structpsa {

struct IterationOptions {
    double epsilon = 0.0;
    double tol_lambda = 1e-12;    ///< relative: |l_k - l_{k-1}| <= tol_lambda (1 + |l_k|)
    double tol_residual = 1e-10;  ///< absolute fixed-point residual
    int max_iter = 200;
    int stagnation_window = 5;

    /// Throws InvalidSpec on non-positive tolerances or a bad epsilon.
    void validate() const;
};

enum class Status { Converged, MaxIter, Stagnated, Error };

std::string_view to_string(Status s);

/// Which extreme point of the structured pseudospectrum an iteration chases.
enum class Target {
    Rightmost,        ///< max Re, perturbation y x^*|_T
    LargestModulus,   ///< max |.|, perturbation e^{i arg l} y x^*|_T
    SmallestModulus,  ///< min |.|, perturbation -e^{i arg l} y x^*|_T
};

struct IterationRecord {
    int k = 0;
    Complex lambda;
    RPEigentriple triple;
    /// Unit-Frobenius E_k with lambda an eigenvalue of A + eps E_k. Zero for
    /// k = 0 on a cold start, and whenever eps = 0.
    StructuredMatrix perturbation;
};

struct IterationTrace {
    Target target = Target::Rightmost;
    std::vector<IterationRecord> iterates;  ///< k = 0, 1, ..., K
    Status status = Status::Error;
    double final_residual = 0.0;
    double objective = 0.0;  ///< Re l_K, |l_K|, or |l_K| by target
    std::vector<std::string> warnings;

    const IterationRecord& last() const { return iterates.back(); }
    Complex lambda() const { return iterates.back().lambda; }
    int iterations() const { return static_cast<int>(iterates.size()) - 1; }
};

struct StepResult {
    Complex lambda;
    RPEigentriple triple;
    StructuredMatrix perturbation;
};

/// Starting perturbation (unit Frobenius, same structure as A) and the point
/// it is expected to reach, expressed in the frame of the iteration.
struct WarmStart {
    Complex lambda;
    StructuredMatrix perturbation;
};

/// The unit perturbation the iteration derives from `triple`:
/// s * y x^*|_T with s = 1, e^{i arg l} or -e^{i arg l} depending on `target`.
/// Throws ZeroProjection, and PhaseUndefined for the modulus targets at l = 0.
StructuredMatrix extremal_direction(const RPEigentriple& triple, const StructureSpec& spec, Target target);

/// One step of the rightmost iteration: E = y x^*|_T from `prev`, then the
/// rightmost eigentriple of A + eps E closest to prev.lambda.
StepResult abscissa_step(const StructuredMatrix& a, const IterationOptions& opts, const RPEigentriple& prev);

/// Largest-modulus step. `phase` defaults to e^{i arg prev.lambda}.
StepResult radius_step(const StructuredMatrix& a, const IterationOptions& opts, const RPEigentriple& prev,
                       std::optional<Complex> phase = std::nullopt);

/// max(||B x - l x||, ||y^* B - l y^*||) with B = A - shift I + eps E(x, y),
/// l the Rayleigh quotient y^* B x / y^* x.
double fixed_point_residual(const StructuredMatrix& a, const IterationOptions& opts, const RPEigentriple& triple,
                            Target target = Target::Rightmost, Complex shift = {});

/// Locally rightmost point of the structured eps-pseudospectrum.
IterationTrace compute_abscissa(const StructuredMatrix& a, const IterationOptions& opts,
                                const std::optional<WarmStart>& warm = std::nullopt);

/// Locally largest-modulus point of the structured eps-pseudospectrum.
IterationTrace compute_radius(const StructuredMatrix& a, const IterationOptions& opts);

/// Iteration on the operator A - shift I; perturbations stay in the structure of A.
IterationTrace run_extremal_iteration(const StructuredMatrix& a, const IterationOptions& opts, Target target,
                                      Complex shift = {}, const std::optional<WarmStart>& warm = std::nullopt);

struct MinModulusResult {
    Complex point;  ///< boundary point lambda_min + mu
    IterationTrace trace;
};

/// Point of the structured pseudospectrum of A closest (locally) to an
/// exterior point mu. Throws InsideSet when mu turns out to be inside.
MinModulusResult min_modulus_shifted(const StructuredMatrix& a, const IterationOptions& opts, Complex mu);

}  // namespace structpsa
