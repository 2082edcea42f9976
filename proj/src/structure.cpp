#include "structpsa/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace structpsa {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SpecMismatch: return "SpecMismatch";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::ZeroProjection: return "ZeroProjection";
        case ErrorCode::SolverError: return "SolverError";
        case ErrorCode::DefectivePair: return "DefectivePair";
        case ErrorCode::PhaseUndefined: return "PhaseUndefined";
        case ErrorCode::InsideSet: return "InsideSet";
        case ErrorCode::NotSingular: return "NotSingular";
        case ErrorCode::MultipleZero: return "MultipleZero";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::AmbiguousBranch: return "AmbiguousBranch";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

StructureSpec::StructureSpec(int n, Orientation orientation, std::vector<int> offsets)
    : n_(n), orientation_(orientation), offsets_(std::move(offsets)) {
    if (n_ < 2) throw Error(ErrorCode::InvalidSpec, "dimension must be >= 2, got " + std::to_string(n_));
    if (offsets_.empty()) throw Error(ErrorCode::InvalidSpec, "offset set is empty");
    std::sort(offsets_.begin(), offsets_.end());
    if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
        throw Error(ErrorCode::InvalidSpec, "duplicate offset");
    if (offsets_.front() < -(n_ - 1) || offsets_.back() > n_ - 1)
        throw Error(ErrorCode::InvalidSpec, "offset outside [-(n-1), n-1]");
}

StructureSpec StructureSpec::full(int n, Orientation o) {
    std::vector<int> offs(2 * n - 1);
    std::iota(offs.begin(), offs.end(), -(n - 1));
    return StructureSpec(n, o, std::move(offs));
}

bool StructureSpec::contains(int offset) const noexcept {
    return std::binary_search(offsets_.begin(), offsets_.end(), offset);
}

int StructureSpec::index_of(int offset) const noexcept {
    auto it = std::lower_bound(offsets_.begin(), offsets_.end(), offset);
    if (it == offsets_.end() || *it != offset) return -1;
    return static_cast<int>(it - offsets_.begin());
}

StructuredMatrix::StructuredMatrix(StructureSpec spec)
    : spec_(std::move(spec)), coeffs_(spec_.size(), Complex{}) {}

StructuredMatrix::StructuredMatrix(StructureSpec spec, std::vector<Complex> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != spec_.size())
        throw Error(ErrorCode::SpecMismatch, "coefficient count " + std::to_string(coeffs_.size()) +
                                                 " does not match " + std::to_string(spec_.size()) +
                                                 " offsets");
}

Complex StructuredMatrix::coeff(int offset) const {
    int k = spec_.index_of(offset);
    if (k < 0) throw Error(ErrorCode::SpecMismatch, "offset " + std::to_string(offset) + " not in structure");
    return coeffs_[k];
}

void StructuredMatrix::set_coeff(int offset, Complex value) {
    int k = spec_.index_of(offset);
    if (k < 0) throw Error(ErrorCode::SpecMismatch, "offset " + std::to_string(offset) + " not in structure");
    coeffs_[k] = value;
}

StructuredMatrix& StructuredMatrix::operator+=(const StructuredMatrix& other) {
    if (!(spec_ == other.spec_)) throw Error(ErrorCode::SpecMismatch, "sum of matrices with different structure");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    return *this;
}

StructuredMatrix& StructuredMatrix::operator-=(const StructuredMatrix& other) {
    if (!(spec_ == other.spec_)) throw Error(ErrorCode::SpecMismatch, "difference of matrices with different structure");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    return *this;
}

StructuredMatrix& StructuredMatrix::operator*=(Complex scale) {
    for (auto& c : coeffs_) c *= scale;
    return *this;
}

namespace {

// Calls f(i, j) for every entry on structure diagonal `offset`.
template <class F>
void for_each_on_diagonal(const StructureSpec& spec, int offset, F&& f) {
    const int n = spec.n();
    if (spec.orientation() == Orientation::Diagonal) {
        const int i0 = offset < 0 ? -offset : 0;
        for (int i = i0; i < n && i + offset < n; ++i) f(i, i + offset);
    } else {
        // i + j = offset + n - 1
        const int s = offset + n - 1;
        const int i0 = std::max(0, s - (n - 1));
        const int i1 = std::min(n - 1, s);
        for (int i = i0; i <= i1; ++i) f(i, s - i);
    }
}

}  // namespace

StructuredMatrix project_s(const Matrix& m, const StructureSpec& spec) {
    if (m.rows() != spec.n() || m.cols() != spec.n())
        throw Error(ErrorCode::DimensionMismatch, "matrix is " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()) + ", structure has n = " +
                                                      std::to_string(spec.n()));
    StructuredMatrix out(spec);
    auto c = out.coeffs();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const int off = spec.offsets()[k];
        Complex sum{};
        for_each_on_diagonal(spec, off, [&](int i, int j) { sum += m(i, j); });
        c[k] = sum / static_cast<double>(spec.length(off));
    }
    return out;
}

StructuredMatrix project_s_rank_one(const Vector& y, const Vector& x, const StructureSpec& spec) {
    if (y.size() != spec.n() || x.size() != spec.n())
        throw Error(ErrorCode::DimensionMismatch, "vector length does not match structure dimension");
    StructuredMatrix out(spec);
    auto c = out.coeffs();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const int off = spec.offsets()[k];
        Complex sum{};
        for_each_on_diagonal(spec, off, [&](int i, int j) { sum += y(i) * std::conj(x(j)); });
        c[k] = sum / static_cast<double>(spec.length(off));
    }
    return out;
}

StructuredMatrix normalized(const StructuredMatrix& t, double floor) {
    const double nrm = frobenius(t);
    if (!(nrm > floor))
        throw Error(ErrorCode::ZeroProjection, "structured projection has Frobenius norm " + std::to_string(nrm));
    return (1.0 / nrm) * t;
}

StructuredMatrix project_t(const Matrix& m, const StructureSpec& spec, double floor) {
    return normalized(project_s(m, spec), floor);
}

Matrix materialize(const StructuredMatrix& t) {
    const auto& spec = t.spec();
    Matrix m = Matrix::Zero(spec.n(), spec.n());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const Complex v = t.coeffs()[k];
        for_each_on_diagonal(spec, spec.offsets()[k], [&](int i, int j) { m(i, j) = v; });
    }
    return m;
}

double frobenius(const StructuredMatrix& t) {
    // Scaled sum of squares; avoids overflow for huge coefficients.
    double scale = 0.0;
    for (auto c : t.coeffs()) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    const auto& spec = t.spec();
    for (std::size_t k = 0; k < spec.size(); ++k)
        acc += spec.length(spec.offsets()[k]) * std::norm(t.coeffs()[k] / scale);
    return scale * std::sqrt(acc);
}

Complex inner(const StructuredMatrix& e, const StructuredMatrix& f) {
    if (!(e.spec() == f.spec())) throw Error(ErrorCode::SpecMismatch, "inner product of different structures");
    const auto& spec = e.spec();
    Complex acc{};
    for (std::size_t k = 0; k < spec.size(); ++k)
        acc += static_cast<double>(spec.length(spec.offsets()[k])) * std::conj(e.coeffs()[k]) * f.coeffs()[k];
    return acc;
}

}  // namespace structpsa
