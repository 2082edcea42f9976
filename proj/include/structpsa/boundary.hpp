#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structpsa/extremal.hpp"

namespace structpsa {

struct BoundaryPoint {
    double theta = 0.0;
    Complex lambda;
    double residual = 0.0;
    Status status = Status::Error;
    int iterations = 0;
    /// Unit perturbation attaining lambda, in the unrotated frame.
    std::optional<StructuredMatrix> perturbation;
    std::string message;  ///< error text when status == Error
};

struct BoundaryTrace {
    std::vector<BoundaryPoint> points;
    std::vector<Complex> hull;  ///< counterclockwise convex hull of the converged points
};

struct RotatedResult {
    Complex lambda;  ///< boundary point, unrotated
    double residual = 0.0;
    IterationTrace trace;  ///< in the rotated frame
    StructuredMatrix perturbation;  ///< unit perturbation in the unrotated frame
};

/// Rightmost point of e^{-i theta} A rotated back by e^{i theta}: a locally
/// extreme boundary point in direction theta. `warm` is expressed in the
/// unrotated frame (a nearby boundary point and its perturbation).
RotatedResult rotated_extreme(const StructuredMatrix& a, const IterationOptions& opts, double theta,
                              const std::optional<WarmStart>& warm = std::nullopt);

/// Sweeps thetas in order, warm-starting from the previous converged point.
/// Failures are recorded per point; the next point then starts cold.
BoundaryTrace trace_boundary(const StructuredMatrix& a, const IterationOptions& opts, const std::vector<double>& thetas);

/// n equispaced angles in [lo, hi) (or [lo, hi] when `closed`).
std::vector<double> theta_grid(int count, double lo = 0.0, double hi = 6.283185307179586, bool closed = false);

/// Counterclockwise convex hull by monotone chain, collinear points dropped.
/// Throws Degenerate for fewer than 3 points or when all are collinear.
std::vector<Complex> convex_hull(std::vector<Complex> points);

/// Signed distance of z outside a CCW convex polygon (<= 0 inside).
double hull_excess(const std::vector<Complex>& hull, Complex z);

struct Grid {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    int resolution = 100;  ///< points per axis
    double x(int i) const { return resolution == 1 ? x0 : x0 + (x1 - x0) * i / (resolution - 1); }
    double y(int j) const { return resolution == 1 ? y0 : y0 + (y1 - y0) * j / (resolution - 1); }
};

struct ContourField {
    Grid grid;
    std::vector<double> values;  ///< row-major: values[j * res + i] = sigma_min(A - (x_i + i y_j) I)
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.resolution + i]; }
};

/// sigma_min(A - zI) on a rectangular grid; the epsilon level set is the
/// unstructured 2-norm pseudospectrum boundary. `threads` <= 0 uses the default.
ContourField unstructured_contour(const StructuredMatrix& a, const Grid& grid, int threads = 0);

double sigma_min(const Matrix& m);

inline constexpr const char* kSamplerAlgorithm = "mt19937_64/seed_seq(seed_lo,seed_hi,index)/normal";

/// For each sample draws i.i.d. standard complex Gaussian coefficients on the
/// structure, scales to Frobenius norm epsilon and collects all eigenvalues of
/// A + E. Deterministic for a fixed seed, independent of thread count.
std::vector<Complex> sample_spectra(const StructuredMatrix& a, double epsilon, int count, std::uint64_t seed,
                                    int threads = 0);

/// Worker count: `requested` if positive, else STRUCTPSA_THREADS, else hardware concurrency.
int thread_count(int requested = 0);

}  // namespace structpsa
