#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "structpsa/boundary.hpp"
#include "structpsa/io.hpp"
#include "support.hpp"

using namespace structpsa;

namespace {

IterationOptions with_eps(double eps) {
    IterationOptions o;
    o.epsilon = eps;
    return o;
}

}  // namespace

TEST_CASE("rotated_extreme") {
    const auto a = io::preset("example1");
    const auto r0 = rotated_extreme(a, with_eps(0.5), 0.0);
    CHECK(std::abs(r0.lambda.real() - 0.45327293912930) <= 1e-8);

    // the perturbation reproduces lambda in the unrotated frame
    const auto values = eigenvalues(materialize(a) + 0.5 * materialize(r0.perturbation));
    double best = 1e300;
    for (auto z : values) best = std::min(best, std::abs(z - r0.lambda));
    CHECK(best < 1e-10);

    // theta = pi/2 maximizes the imaginary part
    const auto up = rotated_extreme(a, with_eps(0.5), std::numbers::pi / 2);
    REQUIRE(up.trace.status == Status::Converged);
    const auto sweep = trace_boundary(a, with_eps(0.5), theta_grid(32));
    for (const auto& p : sweep.points)
        if (p.status == Status::Converged) CHECK(p.lambda.imag() <= up.lambda.imag() + 1e-8);
}

TEST_CASE("theta grid") {
    const auto open = theta_grid(4);
    CHECK(open.size() == 4);
    CHECK(open[1] == doctest::Approx(std::numbers::pi / 2));
    const auto closed = theta_grid(3, 0.0, 1.0, true);
    CHECK(closed.back() == 1.0);
    CHECK(theta_grid(0).empty());
}

TEST_CASE("convex hull") {
    const std::vector<Complex> square{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}, {0, 0}, {1, 0}};
    const auto h = convex_hull(square);
    REQUIRE(h.size() == 4);
    CHECK(h[0] == Complex(-1, -1));
    CHECK(h[1] == Complex(1, -1));
    CHECK(h[2] == Complex(1, 1));
    CHECK(h[3] == Complex(-1, 1));

    std::vector<Complex> circle;
    for (int k = 0; k < 17; ++k) circle.push_back(std::polar(2.0, 2 * std::numbers::pi * k / 17));
    CHECK(convex_hull(circle).size() == 17);

    CHECK_THROWS_AS(convex_hull({0.0, 1.0, 2.0}), Error);
    CHECK_THROWS_AS(convex_hull({0.0, 1.0}), Error);

    std::mt19937_64 g(41);
    std::vector<Complex> cloud;
    for (int k = 0; k < 100; ++k) cloud.push_back(support::gauss(g));
    const auto hull = convex_hull(cloud);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Complex p = hull[i], q = hull[(i + 1) % hull.size()];
        for (auto z : cloud) {
            const double cross = (q - p).real() * (z - p).imag() - (q - p).imag() * (z - p).real();
            CHECK(cross >= -1e-14);
        }
    }
}

TEST_CASE("hull_excess") {
    const std::vector<Complex> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    CHECK(hull_excess(sq, 0.0) == doctest::Approx(-1.0));
    CHECK(hull_excess(sq, 3.0) == doctest::Approx(2.0));
    CHECK(hull_excess(sq, Complex(2, 2)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("unstructured contour") {
    const StructuredMatrix d(StructureSpec(3, Orientation::Diagonal, {0}), {Complex(0.5, 0.0)});
    SUBCASE("normal matrix") {
        Matrix m = Matrix::Zero(3, 3);
        m(0, 0) = 1.0;
        m(1, 1) = Complex(0, 1);
        m(2, 2) = -1.0;
        for (Complex z : {Complex(0.3, 0.2), Complex(2, 0), Complex(-0.5, 0.9)}) {
            Matrix s = m;
            s.diagonal().array() -= z;
            const double want = std::min({std::abs(z - 1.0), std::abs(z - Complex(0, 1)), std::abs(z + 1.0)});
            CHECK(sigma_min(s) == doctest::Approx(want).epsilon(1e-13));
        }
        const auto f = unstructured_contour(d, Grid{0.0, 1.0, -0.5, 0.5, 5}, 2);
        CHECK(f.at(2, 2) < 1e-15);
        CHECK(f.at(0, 2) == doctest::Approx(0.5));
        for (double v : f.values) CHECK(v >= 0.0);
    }
    SUBCASE("thread count does not change the field") {
        const auto a = io::preset("example1");
        const Grid g{-1.0, 1.0, -1.0, 1.0, 13};
        CHECK(unstructured_contour(a, g, 1).values == unstructured_contour(a, g, 4).values);
    }
    SUBCASE("invalid grid") {
        CHECK_THROWS_AS(unstructured_contour(d, Grid{0, 1, 0, 1, 0}), Error);
        CHECK_THROWS_AS(unstructured_contour(d, Grid{0, std::numeric_limits<double>::infinity(), 0, 1, 3}), Error);
    }
}

TEST_CASE("sample_spectra") {
    const auto a = io::preset("example1");
    SUBCASE("eps = 0 repeats the spectrum") {
        const auto s = sample_spectra(a, 0.0, 3, 7);
        REQUIRE(s.size() == 36);
        for (int i = 0; i < 12; ++i) {
            CHECK(s[i] == s[12 + i]);
            CHECK(s[i] == s[24 + i]);
        }
    }
    SUBCASE("deterministic and thread independent") {
        const auto s1 = sample_spectra(a, 0.5, 20, 99, 1);
        const auto s2 = sample_spectra(a, 0.5, 20, 99, 3);
        CHECK(s1 == s2);
        CHECK(s1 != sample_spectra(a, 0.5, 20, 100, 1));
    }
    SUBCASE("rejects count < 1") { CHECK_THROWS_AS(sample_spectra(a, 0.5, 0, 1), Error); }
}

TEST_CASE("boundary sweep is order independent at convergence") {
    const auto a = io::preset("example1");
    auto thetas = theta_grid(16);
    const auto fwd = trace_boundary(a, with_eps(0.5), thetas);
    std::reverse(thetas.begin(), thetas.end());
    const auto bwd = trace_boundary(a, with_eps(0.5), thetas);
    for (std::size_t i = 0; i < fwd.points.size(); ++i) {
        const auto& p = fwd.points[i];
        const auto& q = bwd.points[fwd.points.size() - 1 - i];
        if (p.status == Status::Converged && q.status == Status::Converged) CHECK(std::abs(p.lambda - q.lambda) < 1e-8);
    }
}

TEST_CASE("thread_count") {
    CHECK(thread_count(3) == 3);
    CHECK(thread_count() >= 1);
}
