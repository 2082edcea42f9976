#include "structpsa/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace structpsa::tridiag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpecialCaseTol = 1e-12;
constexpr int kGridPoints = 2001;

double arg(Complex z) { return std::arg(z); }

}  // namespace

Complex principal_sqrt(Complex z) {
    if (z.imag() == 0.0 && z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
    return std::sqrt(z);
}

std::vector<Complex> spectrum(Complex s, Complex d, Complex t, int n) {
    std::vector<Complex> out(n, d);
    if (s == Complex{} || t == Complex{}) return out;
    const Complex base = 2.0 * std::sqrt(std::abs(s * t)) * std::polar(1.0, (arg(s) + arg(t)) / 2.0);
    for (int h = 1; h <= n; ++h) out[h - 1] = d + base * std::cos(h * kPi / (n + 1));
    return out;
}

Eigvecs eigvecs_raw(Complex sigma, Complex tau, int r, int n) {
    const double ratio = std::abs(sigma / tau);
    const double phi = (arg(sigma) - arg(tau)) / 2.0;
    Eigvecs v{Vector(n), Vector(n)};
    for (int k = 1; k <= n; ++k) {
        const double sn = std::sin(k * kPi * r / (n + 1));
        const Complex ph = std::polar(1.0, k * phi);
        v.x(k - 1) = ph * std::pow(ratio, k / 2.0) * sn;
        v.y(k - 1) = ph * std::pow(ratio, -k / 2.0) * sn;
    }
    return v;
}

Eigvecs eigvecs(Complex sigma, Complex tau, int r, int n) {
    Eigvecs v = eigvecs_raw(sigma, tau, r, n);
    v.x.normalize();
    v.y.normalize();
    return v;
}

ProjectedRankOne projected_rank_one(Complex sigma, Complex tau, int r, int n) {
    const double ratio = std::abs(sigma / tau);
    const double phi = (arg(sigma) - arg(tau)) / 2.0;
    const double c = std::cos(kPi * r / (n + 1));
    const double common = (n + 1.0) / (2.0 * (n - 1.0)) * c;
    ProjectedRankOne p;
    p.sigma1 = std::polar(1.0, phi) * std::sqrt(1.0 / ratio) * common;
    p.delta1 = (n + 1.0) / (2.0 * n);
    p.tau1 = std::polar(1.0, -phi) * std::sqrt(ratio) * common;
    p.norm_f = (n + 1.0) / 2.0 * std::sqrt(1.0 / n + (ratio + 1.0 / ratio) * c * c / (n - 1.0));
    return p;
}

Coefficients coefficients(double epsilon, int r, int n) {
    const double c = std::cos(kPi * r / (n + 1));
    return {epsilon * std::sqrt(static_cast<double>(n)) / (n - 1) * c, static_cast<double>(n) / (n - 1) * c * c};
}

Hatted hatted_perturbation(double rho, double phi, double a, double b, int n) {
    const double den = std::sqrt(rho + b * (1.0 + rho * rho));
    const double eps = b > 0.0 ? std::abs(a) * std::sqrt((n - 1.0) / b) : 0.0;
    return Hatted{a * std::polar(1.0, phi) / den, eps * std::sqrt(rho / n) / den, a * rho * std::polar(1.0, -phi) / den};
}

double g_of_rho(double rho, double a, double b) {
    return a * (1.0 - rho * rho) / (2.0 * rho * std::sqrt(rho + b * (1.0 + rho * rho)));
}

FPair f_pm(double rho, Complex sigma0, Complex tau0, double a, double b) {
    const double g = g_of_rho(rho, a, b);
    const Complex root = principal_sqrt(g * g + sigma0 * tau0 / rho);
    return {(g + root) / tau0, (g - root) / tau0};
}

double f1(double rho, double a, double b) {
    const double u = 1.0 - rho * rho;
    return a * a * u * u / (b * rho * rho + rho + b);
}

double f2(double rho, Complex sigma0, Complex tau0) {
    const double s2 = std::norm(sigma0);
    const double t2 = std::norm(tau0);
    const double num = t2 * rho * rho - s2;
    return num * num / (t2 * rho * rho + 2.0 * std::real(sigma0 * tau0) * rho + s2);
}

Problem Problem::make(Complex sigma0, Complex delta0, Complex tau0, int n, double epsilon) {
    Problem p{sigma0, delta0, tau0, n, epsilon, 1, 0.0, 0.0};
    if (sigma0 != Complex{} && tau0 != Complex{}) {
        // lambda_1 - lambda_n is a positive multiple of e^{i(arg s + arg t)/2}
        const double c = std::cos((arg(sigma0) + arg(tau0)) / 2.0);
        p.r_index = c < -kSpecialCaseTol ? n : 1;
    }
    const auto [a, b] = coefficients(epsilon, p.r_index, n);
    p.a = a;
    p.b = b;
    return p;
}

bool Problem::admissible() const {
    if (sigma0 == Complex{} || tau0 == Complex{}) return false;
    return std::abs(std::cos((arg(sigma0) + arg(tau0)) / 2.0)) > kSpecialCaseTol;
}

namespace {

double bisect(double lo, double hi, double a, double b, Complex s0, Complex t0) {
    auto h = [&](double r) { return f1(r, a, b) - f2(r, s0, t0); };
    double hlo = h(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if (hm == 0.0) return mid;
        if ((hlo < 0.0) == (hm < 0.0)) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> modulus_roots(const Problem& p) {
    const double q = std::abs(p.sigma0) / std::abs(p.tau0);
    const double lo = std::min(1.0, q) / 10.0;
    const double hi = std::max(1.0, q) * 10.0;
    std::vector<double> roots;
    double prev_r = lo;
    double prev_h = f1(lo, p.a, p.b) - f2(lo, p.sigma0, p.tau0);
    for (int i = 1; i < kGridPoints; ++i) {
        const double r = lo * std::pow(hi / lo, static_cast<double>(i) / (kGridPoints - 1));
        const double h = f1(r, p.a, p.b) - f2(r, p.sigma0, p.tau0);
        if (prev_h == 0.0) {
            roots.push_back(prev_r);
        } else if ((prev_h < 0.0) != (h < 0.0) && h != 0.0) {
            roots.push_back(bisect(prev_r, r, p.a, p.b, p.sigma0, p.tau0));
        }
        prev_r = r;
        prev_h = h;
    }
    // Equal moduli: f1 and f2 touch at rho = 1 without a sign change.
    const double sm = std::abs(p.sigma0), tm = std::abs(p.tau0);
    if (std::abs(sm - tm) <= kSpecialCaseTol * std::max(sm, tm) &&
        std::none_of(roots.begin(), roots.end(), [](double r) { return std::abs(r - 1.0) < 1e-10; }))
        roots.push_back(1.0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

Complex perturbed_phase(const Problem& p, const Hatted& h) {
    const Complex s = p.sigma0 + h.sigma;
    const Complex t = p.tau0 + h.tau;
    return std::polar(1.0, (arg(s) - arg(t)) / 2.0);
}

FixedPoint finish(const Problem& p, FixedPoint fp) {
    const Hatted h = hatted_perturbation(fp.rho_star, fp.phi_star, p.a, p.b, p.n);
    fp.sigma_hat = h.sigma;
    fp.delta_hat = h.delta;
    fp.tau_hat = h.tau;
    const auto lam = spectrum(p.sigma0 + h.sigma, p.delta0 + h.delta, p.tau0 + h.tau, p.n);
    const double re1 = lam.front().real(), ren = lam.back().real();
    fp.r_preserved = p.r_index == 1 ? re1 >= ren : ren >= re1;
    return fp;
}

}  // namespace

FixedPoint solve_fixed_point(const Problem& p) {
    if (p.n < 2) throw Error(ErrorCode::InvalidSpec, "dimension must be >= 2");
    if (p.sigma0 == Complex{} || p.tau0 == Complex{})
        throw Error(ErrorCode::NoRoot, "sigma0 * tau0 = 0 violates the tridiagonal assumptions");

    const double sm = std::abs(p.sigma0), tm = std::abs(p.tau0);
    const double q = sm / tm;
    FixedPoint fp;

    if (p.epsilon == 0.0) {
        fp.rho_star = fp.rho_plus = fp.rho_minus = q;
        fp.phi_star = (arg(p.sigma0) - arg(p.tau0)) / 2.0;
        fp.branch = p.r_index == 1 ? Branch::Plus : Branch::Minus;
        return finish(p, fp);
    }

    // Spectrum on a vertical segment: rho_+ = rho_- = |sigma0|/|tau0|.
    if (std::abs(std::real(p.sigma0 * p.tau0) + sm * tm) <= kSpecialCaseTol * sm * tm) {
        fp.special_case = true;
        fp.rho_star = fp.rho_plus = fp.rho_minus = q;
        fp.phi_star = std::arg(f_pm(q, p.sigma0, p.tau0, p.a, p.b).plus);
        fp.branch = Branch::Plus;
        return finish(p, fp);
    }
    fp.special_case = std::abs(sm - tm) <= kSpecialCaseTol * std::max(sm, tm);

    const auto roots = modulus_roots(p);
    if (roots.empty()) throw Error(ErrorCode::NoRoot, "no positive root of the modulus equation in the search interval");

    auto closest = [&](bool plus) {
        double best = roots.front(), dist = std::numeric_limits<double>::infinity();
        for (double r : roots) {
            const auto f = f_pm(r, p.sigma0, p.tau0, p.a, p.b);
            const double d = std::abs(std::abs(plus ? f.plus : f.minus) - 1.0);
            if (d < dist) {
                dist = d;
                best = r;
            }
        }
        return std::pair{best, dist};
    };
    const auto [rp, dp] = closest(true);
    const auto [rm, dm] = closest(false);
    fp.rho_plus = rp;
    fp.rho_minus = rm;

    constexpr double kModulusTol = 1e-8;
    auto try_branch = [&](Branch br) -> std::optional<FixedPoint> {
        const bool plus = br == Branch::Plus;
        if ((plus ? dp : dm) > kModulusTol) return std::nullopt;
        FixedPoint cand = fp;
        cand.branch = br;
        cand.rho_star = plus ? rp : rm;
        const auto f = f_pm(cand.rho_star, p.sigma0, p.tau0, p.a, p.b);
        cand.phi_star = std::arg(plus ? f.plus : f.minus);
        const Hatted h = hatted_perturbation(cand.rho_star, cand.phi_star, p.a, p.b, p.n);
        if (std::abs(perturbed_phase(p, h) - std::polar(1.0, cand.phi_star)) > 1e-8) return std::nullopt;
        return cand;
    };

    const Branch preferred = p.r_index == 1 ? Branch::Plus : Branch::Minus;
    const Branch other = preferred == Branch::Plus ? Branch::Minus : Branch::Plus;
    auto sol = try_branch(preferred);
    if (!sol) sol = try_branch(other);
    if (!sol) throw Error(ErrorCode::AmbiguousBranch, "phase condition fails on both branches");

    if (!fp.special_case) {
        const bool r1 = p.r_index == 1;
        const bool small = sm < tm;
        if (r1 && small) sol->ordering_ok = rm < rp && rp < 1.0;
        else if (r1) sol->ordering_ok = 1.0 < rp && rp < rm;
        else if (small) sol->ordering_ok = rp < rm && rm < 1.0;
        else sol->ordering_ok = 1.0 < rm && rm < rp;
    }
    return finish(p, *sol);
}

double fixed_point_equation_residual(const Problem& p, const FixedPoint& fp) {
    const Complex s = p.sigma0 + fp.sigma_hat;
    const Complex t = p.tau0 + fp.tau_hat;
    const double modulus = std::abs(std::abs(s / t) - fp.rho_star);
    const double phase = std::abs(std::polar(1.0, (arg(s) - arg(t)) / 2.0) - std::polar(1.0, fp.phi_star));
    return std::max(modulus, phase);
}

Complex closed_form_abscissa(const Problem& p) {
    const FixedPoint fp = solve_fixed_point(p);
    const auto lam = spectrum(p.sigma0 + fp.sigma_hat, p.delta0 + fp.delta_hat, p.tau0 + fp.tau_hat, p.n);
    return *std::max_element(lam.begin(), lam.end(), [](Complex u, Complex v) { return u.real() < v.real(); });
}

double condition_asymptotic(Complex sigma0, Complex tau0, int n, int h) {
    const double s = std::abs(sigma0), t = std::abs(tau0);
    const double m = std::min(s, t) / std::max(s, t);
    if (m >= 1.0 - 1e-15) return 1.0;
    return (1.0 - std::cos(2.0 * h * kPi / (n + 1))) / (n + 1) * std::pow(1.0 / m, (n - 1) / 2.0);
}

StructuredMatrix make_tridiagonal(Complex s, Complex d, Complex t, int n) {
    return StructuredMatrix(StructureSpec::tridiagonal(n), {s, d, t});
}

}  // namespace structpsa::tridiag
