#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "structpsa/error.hpp"

namespace structpsa {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Orientation { Diagonal, Antidiagonal };

/// Sparsity pattern of a banded Toeplitz (Diagonal) or Hankel (Antidiagonal)
/// class.
///
/// Offsets use 0-based indices (i, j):
///   Diagonal:      offset = j - i          (+1 is the superdiagonal)
///   Antidiagonal:  offset = i + j - (n-1)  (0 is the main antidiagonal)
/// Both give n - |offset| entries per structure diagonal, so every Frobenius
/// formula is shared between the two orientations.
class StructureSpec {
public:
    StructureSpec(int n, Orientation orientation, std::vector<int> offsets);

    static StructureSpec tridiagonal(int n, Orientation o = Orientation::Diagonal) {
        return StructureSpec(n, o, {-1, 0, 1});
    }
    /// Every offset in [-(n-1), n-1]: the full Toeplitz (or Hankel) class.
    static StructureSpec full(int n, Orientation o = Orientation::Diagonal);

    int n() const noexcept { return n_; }
    Orientation orientation() const noexcept { return orientation_; }
    std::span<const int> offsets() const noexcept { return offsets_; }
    std::size_t size() const noexcept { return offsets_.size(); }

    /// Number of matrix entries on structure diagonal `offset`.
    int length(int offset) const noexcept { return n_ - (offset < 0 ? -offset : offset); }
    bool contains(int offset) const noexcept;
    /// Position of `offset` in offsets(), or -1.
    int index_of(int offset) const noexcept;

    /// Offset of entry (i, j) under this orientation (whether or not it is in the pattern).
    int offset_of(int i, int j) const noexcept {
        return orientation_ == Orientation::Diagonal ? j - i : i + j - (n_ - 1);
    }

    friend bool operator==(const StructureSpec&, const StructureSpec&) = default;

private:
    int n_;
    Orientation orientation_;
    std::vector<int> offsets_;
};

/// An element of the structure subspace: one coefficient per offset of the spec.
class StructuredMatrix {
public:
    explicit StructuredMatrix(StructureSpec spec);
    StructuredMatrix(StructureSpec spec, std::vector<Complex> coeffs);

    const StructureSpec& spec() const noexcept { return spec_; }
    int n() const noexcept { return spec_.n(); }

    /// Coefficients in the order of spec().offsets().
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    /// Coefficient on structure diagonal `offset`; throws SpecMismatch if absent.
    Complex coeff(int offset) const;
    void set_coeff(int offset, Complex value);

    StructuredMatrix& operator+=(const StructuredMatrix& other);
    StructuredMatrix& operator-=(const StructuredMatrix& other);
    StructuredMatrix& operator*=(Complex scale);

    friend StructuredMatrix operator+(StructuredMatrix a, const StructuredMatrix& b) { return a += b; }
    friend StructuredMatrix operator-(StructuredMatrix a, const StructuredMatrix& b) { return a -= b; }
    friend StructuredMatrix operator*(Complex s, StructuredMatrix a) { return a *= s; }
    friend StructuredMatrix operator*(StructuredMatrix a, Complex s) { return a *= s; }

    friend bool operator==(const StructuredMatrix&, const StructuredMatrix&) = default;

private:
    StructureSpec spec_;
    std::vector<Complex> coeffs_;
};

/// Frobenius-nearest element of the subspace: per-diagonal arithmetic mean.
StructuredMatrix project_s(const Matrix& m, const StructureSpec& spec);

/// Projection of the rank-one matrix y x^* without forming it densely.
StructuredMatrix project_s_rank_one(const Vector& y, const Vector& x, const StructureSpec& spec);

inline constexpr double kZeroProjectionFloor = 1e-300;

/// project_s scaled to unit Frobenius norm. Throws ZeroProjection below `floor`.
StructuredMatrix project_t(const Matrix& m, const StructureSpec& spec,
                           double floor = kZeroProjectionFloor);

/// Normalizes an already-projected matrix; same ZeroProjection rule as project_t.
StructuredMatrix normalized(const StructuredMatrix& t, double floor = kZeroProjectionFloor);

Matrix materialize(const StructuredMatrix& t);

double frobenius(const StructuredMatrix& t);

/// Frobenius inner product trace(E^* F).
Complex inner(const StructuredMatrix& e, const StructuredMatrix& f);

}  // namespace structpsa
