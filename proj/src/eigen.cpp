#include "structpsa/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

namespace structpsa {

std::vector<Eigenpair> eig_all(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "eigensolver needs a square matrix");
    if (!m.allFinite()) throw Error(ErrorCode::SolverError, "matrix has non-finite entries");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return {};

    Matrix a = m;  // zgeev overwrites its input
    Vector w(n);
    Matrix vl(n, n), vr(n, n);
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'V', 'V', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                                    n, reinterpret_cast<lapack_complex_double*>(w.data()),
                                    reinterpret_cast<lapack_complex_double*>(vl.data()), n,
                                    reinterpret_cast<lapack_complex_double*>(vr.data()), n);
    if (info != 0) throw Error(ErrorCode::SolverError, "zgeev returned info = " + std::to_string(info));

    std::vector<Eigenpair> out;
    out.reserve(n);
    for (lapack_int k = 0; k < n; ++k) {
        Eigenpair p{w(k), vr.col(k), vl.col(k)};
        p.right.normalize();
        p.left.normalize();
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Complex> eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "eigensolver needs a square matrix");
    if (!m.allFinite()) throw Error(ErrorCode::SolverError, "matrix has non-finite entries");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return {};
    Matrix a = m;
    Vector w(n);
    lapack_complex_double dummy;
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                                    n, reinterpret_cast<lapack_complex_double*>(w.data()), &dummy, 1, &dummy, 1);
    if (info != 0) throw Error(ErrorCode::SolverError, "zgeev returned info = " + std::to_string(info));
    return {w.data(), w.data() + n};
}

RPEigentriple rp_normalize(Complex lambda, const Vector& x_raw, const Vector& y_raw) {
    const double nx = x_raw.norm();
    const double ny = y_raw.norm();
    if (!(nx > 0.0) || !(ny > 0.0)) throw Error(ErrorCode::DefectivePair, "zero eigenvector");
    Vector x = x_raw / nx;
    Vector y = y_raw / ny;

    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    const Complex px = x(imax) / std::abs(x(imax));
    x /= px;
    x(imax) = std::abs(x(imax));

    const Complex g = y.dot(x);  // y^* x
    if (std::abs(g) <= kDefectiveGap)
        throw Error(ErrorCode::DefectivePair,
                    "left/right eigenvectors nearly orthogonal (|y*x| = " + std::to_string(std::abs(g)) + ")");
    y *= g / std::abs(g);
    const double gap = std::real(y.dot(x));
    return RPEigentriple{lambda, std::move(x), std::move(y), gap};
}

double default_tie_tolerance(std::span<const Complex> spectrum) {
    double m = 0.0;
    for (auto z : spectrum) m = std::max(m, std::abs(z));
    return 1e-10 * (1.0 + m);
}

namespace {

template <class Score>
std::size_t select_extreme(std::span<const Complex> spectrum, std::optional<Complex> prev,
                           std::optional<double> tie_tol, Score score) {
    if (spectrum.empty()) throw Error(ErrorCode::DimensionMismatch, "empty spectrum");
    const double tol = tie_tol.value_or(default_tie_tolerance(spectrum));
    double best = -std::numeric_limits<double>::infinity();
    for (auto z : spectrum) best = std::max(best, score(z));

    std::size_t pick = spectrum.size();
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        if (score(spectrum[k]) < best - tol) continue;
        if (pick == spectrum.size()) {
            pick = k;
            continue;
        }
        // strict comparisons keep the smallest index on exact ties
        if (prev) {
            if (std::abs(spectrum[k] - *prev) < std::abs(spectrum[pick] - *prev)) pick = k;
        } else if (spectrum[k].imag() > spectrum[pick].imag()) {
            pick = k;
        }
    }
    return pick;
}

}  // namespace

std::size_t select_rightmost(std::span<const Complex> spectrum, std::optional<Complex> prev,
                             std::optional<double> tie_tol) {
    return select_extreme(spectrum, prev, tie_tol, [](Complex z) { return z.real(); });
}

std::size_t select_largest_modulus(std::span<const Complex> spectrum, std::optional<Complex> prev,
                                   std::optional<double> tie_tol) {
    return select_extreme(spectrum, prev, tie_tol, [](Complex z) { return std::abs(z); });
}

std::size_t select_smallest_modulus(std::span<const Complex> spectrum, std::optional<Complex> prev,
                                    std::optional<double> tie_tol) {
    return select_extreme(spectrum, prev, tie_tol, [](Complex z) { return -std::abs(z); });
}

double structured_condition(const RPEigentriple& triple, const StructureSpec& spec) {
    if (!(triple.gap > 0.0)) throw Error(ErrorCode::DefectivePair, "non-positive y*x");
    const double proj = frobenius(project_s_rank_one(triple.y, triple.x, spec));
    if (!(proj > kZeroProjectionFloor))
        throw Error(ErrorCode::ZeroProjection, "eigenprojection is orthogonal to the structure");
    return proj / triple.gap;
}

double eigen_gap(std::span<const Complex> spectrum, std::size_t index) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        if (k != index) g = std::min(g, std::abs(spectrum[k] - spectrum[index]));
    return g;
}

double norm2(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace structpsa
