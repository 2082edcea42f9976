#pragma once

#include <vector>

#include "structpsa/structure.hpp"

/// Closed-form machinery for tridiagonal Toeplitz matrices T(s, d, t)
/// (s sub-diagonal, d diagonal, t super-diagonal): spectrum, eigenvectors,
/// the projected rank-one y x^*|_S and the scalar fixed-point system whose
/// solution gives the rightmost point of the structured pseudospectrum.
namespace structpsa::tridiag {

/// Principal square root, arg in (-pi, pi]: sqrt(-4) = 2i regardless of the
/// sign of a zero imaginary part.
Complex principal_sqrt(Complex z);

/// d + 2 sqrt|st| e^{i(arg s + arg t)/2} cos(h pi/(n+1)), h = 1..n.
std::vector<Complex> spectrum(Complex s, Complex d, Complex t, int n);

/// Eigenvectors of T(sigma, ., tau) for eigenvalue index r (1-based), in the
/// closed form (unnormalized): x_k = e^{ik phi} |sigma/tau|^{k/2} sin(k pi r/(n+1)),
/// y_k = e^{ik phi} |tau/sigma|^{k/2} sin(k pi r/(n+1)), phi = (arg sigma - arg tau)/2.
struct Eigvecs {
    Vector x;
    Vector y;
};
Eigvecs eigvecs_raw(Complex sigma, Complex tau, int r, int n);

/// eigvecs_raw scaled to unit 2-norm (RP-compatible: y^* x > 0).
Eigvecs eigvecs(Complex sigma, Complex tau, int r, int n);

/// Closed form of y x^*|_S for the unnormalized eigenvectors and its Frobenius norm.
struct ProjectedRankOne {
    Complex sigma1;
    Complex delta1;
    Complex tau1;
    double norm_f;
};
ProjectedRankOne projected_rank_one(Complex sigma, Complex tau, int r, int n);

/// a = eps sqrt(n)/(n-1) cos(pi r/(n+1)), b = n/(n-1) cos^2(pi r/(n+1)).
struct Coefficients {
    double a;
    double b;
};
Coefficients coefficients(double epsilon, int r, int n);

/// Epsilon-scaled perturbation entries (eps*sigma_hat, eps*delta_hat, eps*tau_hat)
/// for given (rho, phi). eps is recovered from a and b as |a| sqrt((n-1)/b).
struct Hatted {
    Complex sigma;
    Complex delta;
    Complex tau;
};
Hatted hatted_perturbation(double rho, double phi, double a, double b, int n);

/// G(rho) = a(1 - rho^2) / (2 rho sqrt(rho + b(1 + rho^2))).
double g_of_rho(double rho, double a, double b);

struct FPair {
    Complex plus;
    Complex minus;
};
/// F_pm(rho) = G/tau0 +- sqrt(G^2 + sigma0 tau0/rho)/tau0 with the principal root.
FPair f_pm(double rho, Complex sigma0, Complex tau0, double a, double b);

/// Left and right sides of the rationalized modulus equation |F(rho)| = 1.
double f1(double rho, double a, double b);
double f2(double rho, Complex sigma0, Complex tau0);

enum class Branch { Plus, Minus };

struct Problem {
    Complex sigma0;
    Complex delta0;
    Complex tau0;
    int n = 0;
    double epsilon = 0.0;
    int r_index = 1;  ///< 1 or n
    double a = 0.0;
    double b = 0.0;

    /// Fills r_index from the unperturbed spectrum and a, b from (eps, r, n).
    static Problem make(Complex sigma0, Complex delta0, Complex tau0, int n, double epsilon);

    /// sigma0 tau0 != 0 and (arg sigma0 + arg tau0)/2 != +-pi/2.
    bool admissible() const;
};

struct FixedPoint {
    double rho_star = 0.0;
    double phi_star = 0.0;
    Branch branch = Branch::Plus;
    Complex sigma_hat;  ///< eps-scaled
    Complex delta_hat;  ///< eps-scaled
    Complex tau_hat;    ///< eps-scaled
    double rho_plus = 0.0;
    double rho_minus = 0.0;
    bool ordering_ok = true;   ///< root ordering matches the case tables
    bool r_preserved = true;   ///< the same extreme eigenvalue is rightmost after perturbation
    bool special_case = false; ///< Re(sigma0 tau0) = -|sigma0||tau0| or equal moduli
};

/// Solves the scalar fixed-point system by bracketing f1 = f2 on a log grid
/// and bisection. Throws NoRoot or AmbiguousBranch.
FixedPoint solve_fixed_point(const Problem& p);

/// Max-|residual| of both relations |(s0+es)/(t0+et)| = rho and
/// e^{i(arg(s0+es) - arg(t0+et))/2} = e^{i phi}.
double fixed_point_equation_residual(const Problem& p, const FixedPoint& fp);

/// Rightmost eigenvalue of T(sigma0 + eps s^, delta0 + eps d^, tau0 + eps t^).
Complex closed_form_abscissa(const Problem& p);

/// Asymptotic eigenvalue condition number for ratio m = min/max of |sigma0|, |tau0|.
double condition_asymptotic(Complex sigma0, Complex tau0, int n, int h);

/// T(s, d, t) as a tridiagonal StructuredMatrix.
StructuredMatrix make_tridiagonal(Complex s, Complex d, Complex t, int n);

}  // namespace structpsa::tridiag
