#include <doctest.h>

#include <algorithm>

#include "structpsa/eigen.hpp"
#include "structpsa/io.hpp"
#include "structpsa/tridiag.hpp"
#include "support.hpp"

using namespace structpsa;

namespace {

bool has_value(const std::vector<Complex>& values, Complex z, double tol) {
    return std::any_of(values.begin(), values.end(), [&](Complex v) { return std::abs(v - z) <= tol; });
}

}  // namespace

TEST_CASE("eig_all on a diagonal matrix") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = Complex(0, 2);
    m(2, 2) = -3.0;
    for (const auto& p : eig_all(m)) {
        int hot = -1;
        for (int i = 0; i < 3; ++i)
            if (std::abs(p.right(i)) > 0.5) hot = i;
        REQUIRE(hot >= 0);
        CHECK(std::abs(p.value - m(hot, hot)) < 1e-15);
        CHECK(std::abs(std::abs(p.right(hot)) - 1.0) < 1e-15);
        CHECK(std::abs(std::abs(p.left(hot)) - 1.0) < 1e-15);
    }
}

TEST_CASE("eigenvalues of T(1,0,1)") {
    const auto v = eigenvalues(materialize(StructuredMatrix(StructureSpec::tridiagonal(3), {1.0, 0.0, 1.0})));
    CHECK(has_value(v, std::sqrt(2.0), 1e-14));
    CHECK(has_value(v, 0.0, 1e-14));
    CHECK(has_value(v, -std::sqrt(2.0), 1e-14));
}

TEST_CASE("eig_all residuals on random matrices") {
    std::mt19937_64 g(1);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix m = support::random_matrix(8, g);
        const double nm = norm2(m);
        for (const auto& p : eig_all(m)) {
            CHECK((m * p.right - p.value * p.right).norm() <= 1e-12 * nm);
            CHECK((p.left.adjoint() * m - p.value * p.left.adjoint()).norm() <= 1e-12 * nm);
            CHECK(std::abs(p.right.norm() - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("eig_all rejects non-finite input") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eig_all(m), Error);
    CHECK_THROWS_AS(eigenvalues(m), Error);
}

TEST_CASE("rp_normalize") {
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    const auto t = rp_normalize(2.0, Complex(0, 1) * e1, e1);
    CHECK((t.x - e1).norm() < 1e-15);
    CHECK((t.y - e1).norm() < 1e-15);
    CHECK(std::abs(t.gap - 1.0) < 1e-15);

    Vector e2 = Vector::Zero(3);
    e2(1) = 1.0;
    CHECK_THROWS_AS(rp_normalize(0.0, e1, e2), Error);

    // Hermitian matrix: y = x, gap = 1
    std::mt19937_64 g(4);
    Matrix h = support::random_matrix(5, g);
    h = (h + h.adjoint()).eval();
    for (const auto& p : eig_all(h)) {
        const auto r = rp_normalize(p);
        CHECK((r.x - r.y).norm() < 1e-12);
        CHECK(std::abs(r.gap - 1.0) < 1e-12);
    }
}

TEST_CASE("rp_normalize on Example 1 matches the closed-form eigenvectors") {
    const auto a = io::preset("example1");
    const auto pairs = eig_all(materialize(a));
    std::vector<Complex> spec;
    for (const auto& p : pairs) spec.push_back(p.value);
    const auto triple = rp_normalize(pairs[select_rightmost(spec)]);

    const auto v = tridiag::eigvecs(a.coeff(-1), a.coeff(1), 1, a.n());
    const double closed_gap = std::abs(v.y.dot(v.x)) / (v.x.norm() * v.y.norm());
    CHECK(triple.gap == doctest::Approx(closed_gap).epsilon(1e-8));
    CHECK(triple.lambda.real() == doctest::Approx(-0.12508076372412).epsilon(1e-12));

    // structured condition via the closed-form projection
    const auto pr = tridiag::projected_rank_one(a.coeff(-1), a.coeff(1), 1, a.n());
    const auto raw = tridiag::eigvecs_raw(a.coeff(-1), a.coeff(1), 1, a.n());
    const double closed = pr.norm_f / std::abs(raw.y.dot(raw.x));
    CHECK(structured_condition(triple, a.spec()) == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("selection rules") {
    const std::vector<Complex> pair{{1, 1}, {1, -1}};
    CHECK(select_rightmost(pair, Complex(1, 0.9)) == 0);
    CHECK(select_rightmost(pair) == 0);
    CHECK(select_rightmost(std::vector<Complex>{{1, -1}, {1, 1}}) == 1);
    CHECK(select_rightmost(std::vector<Complex>{2.0, 1.0, 0.0}) == 0);
    CHECK(select_rightmost(std::vector<Complex>{0.0, 1.0, 2.0}) == 2);

    CHECK(select_largest_modulus(std::vector<Complex>{{3, 0}, {0, -3}}, Complex(0, -2.9)) == 1);
    CHECK(select_largest_modulus(std::vector<Complex>{2.0, 1.0}) == 0);
    CHECK(select_largest_modulus(std::vector<Complex>{{0.5, -2}, {0.5, 2}}) == 1);

    CHECK(select_smallest_modulus(std::vector<Complex>{2.0, {0, -0.5}, 3.0}) == 1);
    CHECK(select_smallest_modulus(std::vector<Complex>{{0, -0.5}, {0, 0.5}}) == 1);

    // values within the tie tolerance are ties
    CHECK(select_rightmost(std::vector<Complex>{{1.0 + 1e-13, -1}, {1, 1}}) == 1);
    CHECK(select_rightmost(std::vector<Complex>{{1.0 + 1e-13, -1}, {1, 1}}, std::nullopt, 0.0) == 0);
}

TEST_CASE("structured condition") {
    // circulant, full structure: y x^* is itself Toeplitz, so the condition is 1
    const auto full = StructureSpec::full(4);
    std::mt19937_64 g(31);
    std::vector<Complex> c(4);
    for (auto& v : c) v = support::gauss(g);
    Matrix circ(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) circ(i, j) = c[(j - i + 4) % 4];
    for (const auto& p : eig_all(circ)) CHECK(structured_condition(rp_normalize(p), full) == doctest::Approx(1.0));

    // diagonal, full structure: y x^* = e_k e_k^* projects to a diagonal of norm 1/sqrt(n)
    Matrix m = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) m(i, i) = double(i);
    for (const auto& p : eig_all(m)) CHECK(structured_condition(rp_normalize(p), full) == doctest::Approx(0.5));

    const auto sym = materialize(StructuredMatrix(StructureSpec::tridiagonal(5), {1.0, 0.0, 1.0}));
    for (const auto& p : eig_all(sym)) CHECK(structured_condition(rp_normalize(p), StructureSpec::tridiagonal(5)) <= 1.0 + 1e-12);
}

TEST_CASE("eigen_gap and norm2") {
    const std::vector<Complex> s{0.0, 1.0, {0, 3}};
    CHECK(eigen_gap(s, 0) == doctest::Approx(1.0));
    CHECK(eigen_gap(s, 2) == doctest::Approx(3.0));
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 3.0;
    CHECK(norm2(m) == doctest::Approx(3.0));
}
