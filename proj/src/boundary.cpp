#include "structpsa/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace structpsa {

RotatedResult rotated_extreme(const StructuredMatrix& a, const IterationOptions& opts, double theta,
                              const std::optional<WarmStart>& warm) {
    const Complex back = std::polar(1.0, theta);
    const Complex fwd = std::conj(back);
    const StructuredMatrix rotated = fwd * a;

    std::optional<WarmStart> frame_warm;
    if (warm) frame_warm = WarmStart{fwd * warm->lambda, fwd * warm->perturbation};

    IterationTrace trace = compute_abscissa(rotated, opts, frame_warm);
    const Complex lambda = back * trace.lambda();
    const double residual = trace.final_residual;
    StructuredMatrix e = back * trace.last().perturbation;
    return RotatedResult{lambda, residual, std::move(trace), std::move(e)};
}

BoundaryTrace trace_boundary(const StructuredMatrix& a, const IterationOptions& opts, const std::vector<double>& thetas) {
    BoundaryTrace out;
    std::optional<WarmStart> warm;
    for (double theta : thetas) {
        BoundaryPoint pt;
        pt.theta = theta;
        try {
            // The warm start can stay on a branch that stopped being extreme in
            // this direction; a cold run from the rightmost eigenvalue of
            // e^{-i theta} A competes, and the larger support value wins.
            RotatedResult r = rotated_extreme(a, opts, theta);
            if (warm) {
                try {
                    RotatedResult w = rotated_extreme(a, opts, theta, warm);
                    const Complex fwd = std::polar(1.0, -theta);
                    const bool w_ok = w.trace.status == Status::Converged;
                    const bool r_ok = r.trace.status == Status::Converged;
                    if ((w_ok && !r_ok) || (w_ok == r_ok && (fwd * w.lambda).real() > (fwd * r.lambda).real()))
                        r = std::move(w);
                } catch (const Error&) {
                }
            }
            pt.lambda = r.lambda;
            pt.residual = r.residual;
            pt.status = r.trace.status;
            pt.iterations = r.trace.iterations();
            if (pt.status == Status::Converged && opts.epsilon > 0.0) {
                warm = WarmStart{r.lambda, r.perturbation};
            } else {
                warm.reset();
            }
            pt.perturbation = std::move(r.perturbation);
        } catch (const Error& e) {
            pt.status = Status::Error;
            pt.message = e.what();
            warm.reset();
        }
        out.points.push_back(std::move(pt));
    }

    std::vector<Complex> conv;
    for (const auto& p : out.points)
        if (p.status == Status::Converged) conv.push_back(p.lambda);
    try {
        out.hull = convex_hull(std::move(conv));
    } catch (const Error&) {
        out.hull.clear();
    }
    return out;
}

std::vector<double> theta_grid(int count, double lo, double hi, bool closed) {
    std::vector<double> out;
    if (count <= 0) return out;
    const int denom = closed && count > 1 ? count - 1 : count;
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / denom);
    return out;
}

namespace {

double cross(Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Complex p, Complex q, Complex z) {
    const Complex d = q - p;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - p);
    const double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (p + t * d));
}

}  // namespace

std::vector<Complex> convex_hull(std::vector<Complex> points) {
    auto less = [](Complex u, Complex v) { return u.real() < v.real() || (u.real() == v.real() && u.imag() < v.imag()); };
    std::sort(points.begin(), points.end(), less);
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) throw Error(ErrorCode::Degenerate, "convex hull needs at least 3 distinct points");

    std::vector<Complex> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw Error(ErrorCode::Degenerate, "all points are collinear");
    return hull;
}

double hull_excess(const std::vector<Complex>& hull, Complex z) {
    if (hull.size() < 3) throw Error(ErrorCode::Degenerate, "hull has fewer than 3 vertices");
    bool inside = true;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Complex p = hull[i];
        const Complex q = hull[(i + 1) % hull.size()];
        if (cross(p, q, z) < 0.0) inside = false;
        dist = std::min(dist, segment_distance(p, q, z));
    }
    return inside ? -dist : dist;
}

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STRUCTPSA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

template <class F>
void parallel_for(int count, int threads, F&& body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += threads) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

double sigma_min(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

ContourField unstructured_contour(const StructuredMatrix& a, const Grid& grid, int threads) {
    if (grid.resolution < 1 || !std::isfinite(grid.x0) || !std::isfinite(grid.x1) || !std::isfinite(grid.y0) ||
        !std::isfinite(grid.y1))
        throw Error(ErrorCode::InvalidSpec, "contour grid must be finite with resolution >= 1");
    const Matrix base = materialize(a);
    ContourField field{grid, std::vector<double>(static_cast<std::size_t>(grid.resolution) * grid.resolution)};
    parallel_for(grid.resolution, thread_count(threads), [&](int j) {
        Matrix shifted = base;
        for (int i = 0; i < grid.resolution; ++i) {
            shifted.diagonal() = base.diagonal().array() - Complex(grid.x(i), grid.y(j));
            field.values[static_cast<std::size_t>(j) * grid.resolution + i] = sigma_min(shifted);
        }
    });
    return field;
}

std::vector<Complex> sample_spectra(const StructuredMatrix& a, double epsilon, int count, std::uint64_t seed,
                                    int threads) {
    if (count < 1) throw Error(ErrorCode::InvalidSpec, "sample count must be >= 1");
    const int n = a.n();
    const Matrix base = materialize(a);
    std::vector<Complex> out(static_cast<std::size_t>(count) * n);
    parallel_for(count, thread_count(threads), [&](int i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i)};
        std::mt19937_64 gen(seq);
        std::normal_distribution<double> normal;
        StructuredMatrix e(a.spec());
        for (auto& c : e.coeffs()) {
            const double re = normal(gen);
            const double im = normal(gen);
            c = Complex(re, im) / std::sqrt(2.0);
        }
        Matrix m = base;
        const double nrm = frobenius(e);
        if (epsilon > 0.0 && nrm > 0.0) m += (epsilon / nrm) * materialize(e);
        const auto values = eigenvalues(m);
        std::copy(values.begin(), values.end(), out.begin() + static_cast<std::ptrdiff_t>(i) * n);
    });
    return out;
}

}  // namespace structpsa
