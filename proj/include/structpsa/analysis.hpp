#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "structpsa/extremal.hpp"

namespace structpsa {

/// Local convergence diagnostics at a converged fixed point.
struct RateEstimate {
    double rho = 0.0;        ///< 1 / (y^* x), eigenvalue condition number
    double sigma_gap = 0.0;  ///< sigma_{n-1}(B - lambda I)
    double const_c = 0.0;    ///< Lipschitz constant of the normalized projection, 2n / (y^* x)
    double r_bound = 0.0;    ///< 4 const_c rho^2 eps / sigma_gap
    /// Geometric-mean ratio of successive objective errors |obj_k - obj*|.
    double r_empirical = 0.0;
    /// Same, on the eigenvalue distance |lambda_k - lambda*|.
    double r_empirical_lambda = 0.0;
    int rate_samples = 0;
    double group_inverse_norm = 0.0;  ///< ||(B - lambda I)^#||_2
    double group_inverse_bound = 0.0; ///< rho^2 / sigma_gap
};

struct FlowState {
    StructuredMatrix e;  ///< unit Frobenius
    double t = 0.0;
    Complex lambda;      ///< rightmost eigenvalue of A + eps E
};

/// Group inverse of a singular matrix with a simple zero eigenvalue, built
/// from the SVD. `null_tol` defaults to 1e-10 ||C||_2. Throws NotSingular or
/// MultipleZero.
Matrix group_inverse(const Matrix& c, std::optional<double> null_tol = std::nullopt);

/// Residual norms of CG - GC, GCG - G and CGC - C.
struct GroupInverseResiduals {
    double commute = 0.0;
    double outer = 0.0;
    double inner = 0.0;
    double max() const { return std::max({commute, outer, inner}); }
};
GroupInverseResiduals group_inverse_residuals(const Matrix& c, const Matrix& g);

/// Rate bound and measured rate for a converged trace of A (no shift).
/// Throws InvalidSpec when the trace did not converge.
RateEstimate rate_estimate(const StructuredMatrix& a, const IterationOptions& opts, const IterationTrace& trace);

/// Coefficient of E in the flow right-hand side L - c E, L = y x^*|_T.
///   Gradient: c = Re<E, L>. Equilibria are E = +-L; E = L is the stable one.
///   Literal:  c = <E, L>. Every E = e^{i phi} L is an equilibrium, so the
///             flow can stop at a rotated copy of L short of the fixed point.
/// Both keep ||E||_F = 1 and Re lambda nondecreasing.
enum class FlowForm { Gradient, Literal };

/// Initial flow state: rightmost eigenvalue of A + eps E0.
FlowState make_flow_state(const StructuredMatrix& a, double epsilon, const StructuredMatrix& e0);

struct FlowEvaluation {
    StructuredMatrix rhs;
    RPEigentriple triple;
    Complex alignment;  ///< <E, y x^*|_T>
};

/// L - c E at the rightmost eigentriple of A + eps E that is closest to
/// state.lambda.
FlowEvaluation evaluate_flow(const FlowState& state, const StructuredMatrix& a, double epsilon,
                             FlowForm form = FlowForm::Gradient);

inline StructuredMatrix flow_rhs(const FlowState& state, const StructuredMatrix& a, double epsilon,
                                 FlowForm form = FlowForm::Gradient) {
    return evaluate_flow(state, a, epsilon, form).rhs;
}

struct FlowTrajectory {
    std::vector<FlowState> states;
    std::vector<double> rhs_norms;  ///< ||rhs||_F at each state
    bool aborted = false;
    std::string error;
};

/// Explicit Euler with renormalization to the unit sphere after every step.
/// A DefectivePair mid-flow stops integration and returns the partial trajectory.
FlowTrajectory integrate_flow(const StructuredMatrix& a, double epsilon, const StructuredMatrix& e0, double t_end,
                              double step, FlowForm form = FlowForm::Gradient);

struct DerivativeCheck {
    double predicted = 0.0;            ///< Re(y^* E x) / (y^* x)
    Complex predicted_complex;         ///< y^* E x / (y^* x)
    std::vector<double> steps;
    std::vector<Complex> observed;     ///< (lambda(t) - lambda) / t
};

/// First-order eigenvalue derivative along E against forward differences of
/// the continued eigenvalue of A + tE. The differences are taken in long double
/// so rounding stays below the O(t) truncation error down to t ~ 1e-8.
DerivativeCheck derivative_check(const StructuredMatrix& a, const RPEigentriple& triple, const StructuredMatrix& e,
                                 std::vector<double> steps = {1e-4, 1e-5, 1e-6});

}  // namespace structpsa
