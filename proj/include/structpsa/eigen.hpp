#pragma once

#include <optional>
#include <span>
#include <vector>

#include "structpsa/structure.hpp"

namespace structpsa {

/// Raw output of the dense eigensolver for one eigenvalue.
struct Eigenpair {
    Complex value;
    Vector right;  ///< M x = lambda x, unit 2-norm
    Vector left;   ///< y^* M = lambda y^*, unit 2-norm
};

/// Eigentriple with RP-compatible vectors: ||x|| = ||y|| = 1 and y^* x real positive.
struct RPEigentriple {
    Complex lambda;
    Vector x;
    Vector y;
    double gap = 0.0;  ///< y^* x
};

/// All eigenvalues with right and left eigenvectors (LAPACK zgeev).
/// Throws SolverError on non-finite input or backend failure.
std::vector<Eigenpair> eig_all(const Matrix& m);

/// Eigenvalues only.
std::vector<Complex> eigenvalues(const Matrix& m);

inline constexpr double kDefectiveGap = 1e-12;

/// Phase-fixes x (largest-magnitude component real positive) and rotates y so
/// y^* x > 0. Throws DefectivePair if |y_raw^* x_raw| / (|x_raw| |y_raw|) <= 1e-12.
RPEigentriple rp_normalize(Complex lambda, const Vector& x_raw, const Vector& y_raw);

inline RPEigentriple rp_normalize(const Eigenpair& p) { return rp_normalize(p.value, p.right, p.left); }

/// Default tie tolerance 1e-10 * (1 + max |lambda|).
double default_tie_tolerance(std::span<const Complex> spectrum);

/// Index of a rightmost eigenvalue. Among values within `tie_tol` of the max
/// real part: closest to `prev`; without `prev` the largest imaginary part;
/// remaining ties go to the smallest index.
std::size_t select_rightmost(std::span<const Complex> spectrum, std::optional<Complex> prev = std::nullopt,
                             std::optional<double> tie_tol = std::nullopt);

/// As select_rightmost with |lambda| in place of Re lambda.
std::size_t select_largest_modulus(std::span<const Complex> spectrum, std::optional<Complex> prev = std::nullopt,
                                   std::optional<double> tie_tol = std::nullopt);

/// As select_rightmost with -|lambda| in place of Re lambda.
std::size_t select_smallest_modulus(std::span<const Complex> spectrum, std::optional<Complex> prev = std::nullopt,
                                    std::optional<double> tie_tol = std::nullopt);

/// ||y x^*|_S||_F / (y^* x): worst first-order eigenvalue sensitivity under
/// unit-Frobenius perturbations in the structure.
double structured_condition(const RPEigentriple& triple, const StructureSpec& spec);

/// Smallest distance from spectrum[index] to any other eigenvalue.
double eigen_gap(std::span<const Complex> spectrum, std::size_t index);

/// Largest singular value.
double norm2(const Matrix& m);

}  // namespace structpsa
