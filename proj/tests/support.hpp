#pragma once

#include <cmath>
#include <random>

#include "structpsa/structure.hpp"

namespace support {

using structpsa::Complex;
using structpsa::Matrix;
using structpsa::StructuredMatrix;
using structpsa::StructureSpec;
using structpsa::Vector;

inline Complex gauss(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    const double re = n(g);
    const double im = n(g);
    return {re, im};
}

inline Matrix random_matrix(int n, std::mt19937_64& g) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = gauss(g);
    return m;
}

inline Vector random_vector(int n, std::mt19937_64& g) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(g);
    return v;
}

inline StructuredMatrix random_structured(const StructureSpec& spec, std::mt19937_64& g) {
    StructuredMatrix t(spec);
    for (auto& c : t.coeffs()) c = gauss(g);
    return t;
}

// Dense ||M||_F, independent of the coefficient formula.
inline double dense_frobenius(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace support
