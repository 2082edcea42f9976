#include <doctest.h>

#include <algorithm>

#include "structpsa/extremal.hpp"
#include "structpsa/io.hpp"
#include "structpsa/tridiag.hpp"
#include "support.hpp"

using namespace structpsa;

namespace {

IterationOptions with_eps(double eps) {
    IterationOptions o;
    o.epsilon = eps;
    return o;
}

double max_real(const StructuredMatrix& a) {
    double m = -1e300;
    for (auto z : eigenvalues(materialize(a))) m = std::max(m, z.real());
    return m;
}

double spectral_radius(const StructuredMatrix& a) {
    double m = 0.0;
    for (auto z : eigenvalues(materialize(a))) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TEST_CASE("options validation") {
    IterationOptions o;
    o.epsilon = -1.0;
    CHECK_THROWS_AS(o.validate(), Error);
    o.epsilon = 0.1;
    o.tol_lambda = 0.0;
    CHECK_THROWS_AS(o.validate(), Error);
    o.tol_lambda = 1e-12;
    o.max_iter = 0;
    CHECK_THROWS_AS(o.validate(), Error);
}

TEST_CASE("abscissa of Example 1") {
    const auto a = io::preset("example1");
    const auto trace = compute_abscissa(a, with_eps(0.5));
    REQUIRE(trace.status == Status::Converged);
    CHECK(trace.iterates[0].lambda.real() == doctest::Approx(-0.12508076372412).epsilon(1e-12));
    CHECK(std::abs(trace.iterates[1].lambda.real() - 0.41270494888923) <= 1e-6);
    CHECK(std::abs(trace.objective - 0.45327293912930) <= 1e-8);
    CHECK(trace.iterations() <= 25);
    CHECK(trace.final_residual <= 1e-10);
    CHECK(std::abs(frobenius(trace.last().perturbation) - 1.0) < 1e-12);
    CHECK(frobenius(trace.iterates[0].perturbation) == 0.0);

    // Re lambda_k is increasing along the iteration
    for (std::size_t k = 1; k < trace.iterates.size(); ++k)
        CHECK(trace.iterates[k].lambda.real() >= trace.iterates[k - 1].lambda.real() - 1e-12);

    const auto p = tridiag::Problem::make(a.coeff(-1), a.coeff(0), a.coeff(1), a.n(), 0.5);
    CHECK(std::abs(tridiag::closed_form_abscissa(p).real() - trace.objective) <= 1e-8);
}

TEST_CASE("abscissa_step from the unperturbed triple") {
    const auto a = io::preset("example1");
    const auto t0 = compute_abscissa(a, with_eps(0.0));
    const auto step = abscissa_step(a, with_eps(0.5), t0.last().triple);
    CHECK(std::abs(step.lambda.real() - 0.41270494888923) <= 1e-6);

    // a fixed point is reproduced by one more step
    const auto trace = compute_abscissa(a, with_eps(0.5));
    const auto again = abscissa_step(a, with_eps(0.5), trace.last().triple);
    CHECK(std::abs(again.lambda - trace.lambda()) <= 1e-10);
    CHECK(frobenius(again.perturbation - trace.last().perturbation) <= 1e-8);
}

TEST_CASE("eps = 0 reduces to the spectrum") {
    std::mt19937_64 g(2);
    const auto a = support::random_structured(StructureSpec(7, Orientation::Diagonal, {-2, 0, 1}), g);
    const auto t = compute_abscissa(a, with_eps(0.0));
    CHECK(t.status == Status::Converged);
    CHECK(t.iterations() == 1);
    CHECK(t.objective == doctest::Approx(max_real(a)).epsilon(1e-12));
    for (const auto& it : t.iterates) CHECK(std::abs(it.lambda - t.iterates[0].lambda) < 1e-12);

    const auto r = compute_radius(a, with_eps(0.0));
    CHECK(r.objective == doctest::Approx(spectral_radius(a)).epsilon(1e-12));
}

TEST_CASE("fixed_point_residual") {
    const auto a = io::preset("example1");
    const auto trace = compute_abscissa(a, with_eps(0.5));
    CHECK(fixed_point_residual(a, with_eps(0.5), trace.last().triple) <= 1e-10);

    const auto t0 = compute_abscissa(a, with_eps(0.0));
    CHECK(fixed_point_residual(a, with_eps(0.0), t0.last().triple) <= 1e-12 * 3.0);

    std::mt19937_64 g(6);
    RPEigentriple junk{0.0, support::random_vector(12, g).normalized(), support::random_vector(12, g).normalized(), 1.0};
    CHECK(fixed_point_residual(a, with_eps(0.5), junk) > 1e-2);
}

TEST_CASE("radius on a scalar diagonal structure") {
    const int n = 4;
    const Complex d(0.6, 0.8);
    const StructuredMatrix a(StructureSpec(n, Orientation::Diagonal, {0}), {d});
    const auto t = compute_radius(a, with_eps(0.3));
    REQUIRE(t.status == Status::Converged);
    CHECK(t.objective == doctest::Approx(1.0 + 0.3 / std::sqrt(double(n))).epsilon(1e-12));
}

TEST_CASE("radius on a real symmetric matrix with positive rightmost eigenvalue matches the abscissa") {
    const auto a = StructuredMatrix(StructureSpec::tridiagonal(6), {1.0, 2.0, 1.0});
    const auto ab = compute_abscissa(a, with_eps(0.2));
    const auto ra = compute_radius(a, with_eps(0.2));
    CHECK(ab.status == Status::Converged);
    CHECK(ra.status == Status::Converged);
    CHECK(std::abs(ab.lambda() - ra.lambda()) <= 1e-9);

    const auto t0 = compute_abscissa(a, with_eps(0.0));
    const auto s1 = abscissa_step(a, with_eps(0.2), t0.last().triple);
    const auto s2 = radius_step(a, with_eps(0.2), t0.last().triple);
    CHECK(std::abs(s1.lambda - s2.lambda) <= 1e-12);
}

TEST_CASE("radius of Example 2 is monotone and converges") {
    const auto a = io::preset("example2");
    const auto t = compute_radius(a, with_eps(0.5));
    REQUIRE(t.status == Status::Converged);
    CHECK(t.final_residual <= 1e-10);
    for (std::size_t k = 1; k < t.iterates.size(); ++k)
        CHECK(std::abs(t.iterates[k].lambda) >= std::abs(t.iterates[k - 1].lambda) - 1e-10);
    CHECK(fixed_point_residual(a, with_eps(0.5), t.last().triple, Target::LargestModulus) <= 1e-10);
}

TEST_CASE("abscissa is monotone in epsilon") {
    const auto a = io::preset("example1");
    double prev = -1e300;
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.5}) {
        const auto t = compute_abscissa(a, with_eps(eps));
        REQUIRE(t.status == Status::Converged);
        CHECK(t.objective >= prev - 1e-12);
        prev = t.objective;
    }
}

TEST_CASE("warm start at the fixed point converges immediately") {
    const auto a = io::preset("example1");
    const auto cold = compute_abscissa(a, with_eps(0.5));
    const auto warm = compute_abscissa(a, with_eps(0.5), WarmStart{cold.lambda(), cold.last().perturbation});
    CHECK(warm.status == Status::Converged);
    CHECK(warm.iterations() <= 2);
    CHECK(std::abs(warm.lambda() - cold.lambda()) <= 1e-10);

    StructuredMatrix wrong(StructureSpec::tridiagonal(5));
    CHECK_THROWS_AS(compute_abscissa(a, with_eps(0.5), WarmStart{0.0, wrong}), Error);
}

TEST_CASE("max_iter cap reports MaxIter") {
    auto o = with_eps(0.5);
    o.max_iter = 3;
    const auto t = compute_abscissa(io::preset("example1"), o);
    CHECK(t.status == Status::MaxIter);
    CHECK(t.iterations() == 3);
}

TEST_CASE("min_modulus_shifted") {
    SUBCASE("eps = 0 gives the eigenvalue nearest mu") {
        const StructuredMatrix a(StructureSpec::tridiagonal(5), {1.0, 0.0, 1.0});
        const auto r = min_modulus_shifted(a, with_eps(0.0), 1.5);
        CHECK(std::abs(r.point - std::sqrt(3.0)) < 1e-12);
    }
    SUBCASE("scalar diagonal structure: disk geometry") {
        const int n = 4;
        const Complex d(1.0, 0.0);
        const StructuredMatrix a(StructureSpec(n, Orientation::Diagonal, {0}), {d});
        const double eps = 0.4;
        const Complex mu(1.0, 2.0);
        const auto r = min_modulus_shifted(a, with_eps(eps), mu);
        REQUIRE(r.trace.status == Status::Converged);
        const Complex want = d + eps / std::sqrt(double(n)) * (mu - d) / std::abs(mu - d);
        CHECK(std::abs(r.point - want) < 1e-12);
    }
    SUBCASE("mu inside the set") {
        const StructuredMatrix a(StructureSpec(4, Orientation::Diagonal, {0}), {Complex(1.0)});
        CHECK_THROWS_AS(min_modulus_shifted(a, with_eps(0.4), 1.0), Error);
    }
    SUBCASE("Example 1 from an exterior shift") {
        const auto a = io::preset("example1");
        const auto r = min_modulus_shifted(a, with_eps(0.5), Complex(0.2, 3.0));
        REQUIRE(r.trace.status == Status::Converged);
        CHECK(fixed_point_residual(a, with_eps(0.5), r.trace.last().triple, Target::SmallestModulus, Complex(0.2, 3.0)) <=
              1e-8);
    }
}

TEST_CASE("extremal_direction phase") {
    const auto a = io::preset("example1");
    const auto t = compute_abscissa(a, with_eps(0.0)).last().triple;
    const auto base = extremal_direction(t, a.spec(), Target::Rightmost);
    const auto large = extremal_direction(t, a.spec(), Target::LargestModulus);
    const auto small = extremal_direction(t, a.spec(), Target::SmallestModulus);
    const Complex ph = t.lambda / std::abs(t.lambda);
    CHECK(frobenius(large - ph * base) < 1e-14);
    CHECK(frobenius(small + ph * base) < 1e-14);

    RPEigentriple zero = t;
    zero.lambda = 0.0;
    CHECK_THROWS_AS(extremal_direction(zero, a.spec(), Target::LargestModulus), Error);
}
