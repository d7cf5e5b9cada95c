// kernel.cpp - free fractional heat kernel by radial Fourier inversion
#include "fsk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsk/bessel.hpp"
#include "fsk/quadrature.hpp"

namespace fsk {

namespace {

using std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

double sinc(double x) {
    return (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

// Truncation radius for the envelope u^m e^{-c u^alpha}: smallest U past the
// peak with envelope(U) <= tol * peak.
double truncation_radius(double m, double c, double alpha, double tol) {
    const double u_peak = (m > 0.0) ? std::pow(m / (alpha * c), 1.0 / alpha) : 0.0;
    const double log_peak =
        (m > 0.0) ? m * std::log(u_peak) - c * std::pow(u_peak, alpha) : 0.0;
    const double target = std::log(tol) + log_peak;
    auto log_env = [&](double u) { return (m > 0.0 ? m * std::log(u) : 0.0) - c * std::pow(u, alpha); };
    double lo = std::max(u_peak, 1.0), hi = lo * 2.0;
    while (log_env(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (log_env(mid) > target ? lo : hi) = mid;
    }
    return hi;
}

// Panel edges on [0, U]: width capped at half a Bessel period pi/rho, first
// panel subdivided geometrically (the integrand has an algebraic corner at 0
// when alpha < 1).
std::vector<double> radial_edges(double U, double rho, int max_panels) {
    double width = U / 16.0;
    if (rho > 0.0) width = std::min(width, pi / rho);
    int n = static_cast<int>(std::ceil(U / width));
    n = std::clamp(n, 8, std::max(8, max_panels / 2));
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(n) + 13);
    const double first = U / n;
    for (int j = 12; j >= 1; --j) edges.push_back(first * std::pow(2.0, -j));
    for (int k = 1; k <= n; ++k) edges.push_back(U * k / n);
    edges.insert(edges.begin(), 0.0);
    return edges;
}

struct ScaledIntegral {
    AdaptiveResult quad;
    double prefactor;   // dimensionless constant multiplying the integral
    double bessel_err;  // absolute error contribution of J0 evaluation (d = 2)
};

// Scaled radial integral I_d(theta, rho); kernel = |z|^{-d/alpha} * prefactor * I.
ScaledIntegral radial_integral(double alpha, int d, double theta, double rho,
                               const QuadratureSpec& spec) {
    const double c = std::cos(theta);
    const std::complex<double> w = std::polar(1.0, theta);
    std::function<std::complex<double>(double)> f;
    double m = 0.0, prefactor = 0.0;
    switch (d) {
        case 1:
            m = 0.0;
            prefactor = 1.0 / pi;
            f = [=](double u) { return std::exp(-w * std::pow(u, alpha)) * std::cos(u * rho); };
            break;
        case 2:
            m = 1.0;
            prefactor = 1.0 / (2.0 * pi);
            f = [=](double u) {
                return std::exp(-w * std::pow(u, alpha)) * u * bessel_j0(u * rho);
            };
            break;
        case 3:
            m = 2.0;
            prefactor = 1.0 / (2.0 * pi * pi);
            f = [=](double u) {
                return std::exp(-w * std::pow(u, alpha)) * u * u * sinc(u * rho);
            };
            break;
        default:
            throw std::invalid_argument("kernel_free: d must be 1, 2 or 3");
    }
    const double U = truncation_radius(m, c, alpha, spec.truncation_tol);
    ScaledIntegral out;
    out.quad = integrate_adaptive(f, radial_edges(U, rho, spec.max_panels),
                                  spec.panel_tol / prefactor, spec.max_panels);
    out.prefactor = prefactor;
    // J0 carries ~5e-10 absolute accuracy; weight it by the integrand mass.
    out.bessel_err = (d == 2 && rho > 0.0)
                         ? 5e-10 * std::tgamma(2.0 / alpha) / (alpha * std::pow(c, 2.0 / alpha))
                         : 0.0;
    return out;
}

// alpha = 2 only: the cosine/sine integrands extend evenly to the full line and
// the contour shifts exactly by i*rho/(2w), turning the kernel into
// exp(-rho^2/(4w)) times the non-cancelling integral Q = int_R exp(-w v^2) dv.
// Used when the real-axis integral would cancel below the precision budget.
KernelResult gauss_shifted(const KernelQuery& q, const QuadratureSpec& spec) {
    const double theta = q.z.theta();
    const double c = std::cos(theta);
    const std::complex<double> w = std::polar(1.0, theta);
    const double rho = q.r / std::sqrt(q.z.modulus());

    const double V = std::sqrt(-std::log(spec.truncation_tol) / c);
    std::vector<double> edges;
    const int n0 = 64;
    for (int k = 0; k <= n0; ++k) edges.push_back(V * k / n0);
    auto f = [&](double v) { return std::exp(-w * v * v); };
    AdaptiveResult half = integrate_adaptive(f, edges, spec.panel_tol / 2.0, spec.max_panels);
    const std::complex<double> Q = 2.0 * half.value; // even integrand
    const double errQ = 2.0 * half.abs_err;

    const std::complex<double> E = std::exp(-(rho * rho / 4.0) * std::conj(w));
    const double scale = std::pow(q.z.modulus(), -static_cast<double>(q.d) / 2.0);

    std::complex<double> value;
    double err;
    switch (q.d) {
        case 1:
            value = E * Q / (2.0 * pi);
            err = std::abs(E) * errQ / (2.0 * pi);
            break;
        case 2: // symbol factorization: K_2(r) = K_1(r) K_1(0)
            value = E * Q * Q / (4.0 * pi * pi);
            err = std::abs(E) * 2.0 * std::abs(Q) * errQ / (4.0 * pi * pi);
            break;
        case 3:
            value = E * Q / (8.0 * pi * pi * w);
            err = std::abs(E) * errQ / (8.0 * pi * pi);
            break;
        default:
            throw std::invalid_argument("kernel_free: d must be 1, 2 or 3");
    }
    KernelResult out;
    out.value = scale * value;
    out.abs_err = scale * err;
    out.panels = half.panels;
    out.status = half.converged ? KernelStatus::ok : KernelStatus::precision_exhausted;
    return out;
}

} // namespace

void KernelQuery::validate() const {
    if (!(alpha > 0.0) || alpha > 2.0)
        throw std::invalid_argument("KernelQuery: alpha must lie in (0, 2]");
    if (d < 1 || d > 3) throw std::invalid_argument("KernelQuery: d must be 1, 2 or 3");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("KernelQuery: r must be finite and >= 0");
}

void QuadratureSpec::validate() const {
    if (!(truncation_tol > 0.0) || !(truncation_tol < 1.0))
        throw std::invalid_argument("QuadratureSpec: truncation_tol must lie in (0, 1)");
    if (!(panel_tol > 0.0) || !(panel_tol < 1.0))
        throw std::invalid_argument("QuadratureSpec: panel_tol must lie in (0, 1)");
    if (max_panels < 1) throw std::invalid_argument("QuadratureSpec: max_panels must be >= 1");
}

KernelResult kernel_free(const KernelQuery& q, const QuadratureSpec& spec) {
    q.validate();
    spec.validate();

    const double rho = q.r * std::pow(q.z.modulus(), -1.0 / q.alpha);
    const double theta = q.z.theta();

    if (q.alpha == 2.0 && rho * rho * std::cos(theta) / 4.0 > 9.0)
        return gauss_shifted(q, spec);

    ScaledIntegral si = radial_integral(q.alpha, q.d, theta, rho, spec);
    const double scale = std::pow(q.z.modulus(), -static_cast<double>(q.d) / q.alpha);

    KernelResult out;
    out.value = scale * si.prefactor * si.quad.value;
    out.abs_err = scale * (si.prefactor * si.quad.abs_err + si.bessel_err);
    out.panels = si.quad.panels;
    out.status = si.quad.converged ? KernelStatus::ok : KernelStatus::precision_exhausted;
    return out;
}

std::complex<double> kernel_poisson(int d, std::complex<double> z, double r) {
    if (d < 1) throw std::invalid_argument("kernel_poisson: d must be >= 1");
    if (!(z.real() > 0.0)) throw std::invalid_argument("kernel_poisson: Re z must be positive");
    const std::complex<double> base = z * z + r * r;
    if (base.imag() == 0.0 && base.real() <= 0.0)
        throw std::logic_error("kernel_poisson: branch point reached; impossible for Re z > 0");
    const double cd = std::tgamma((d + 1) / 2.0) / std::pow(pi, (d + 1) / 2.0);
    return cd * z / std::pow(base, (d + 1) / 2.0);
}

std::complex<double> kernel_gauss(int d, std::complex<double> z, double r) {
    if (d < 1) throw std::invalid_argument("kernel_gauss: d must be >= 1");
    if (!(z.real() > 0.0)) throw std::invalid_argument("kernel_gauss: Re z must be positive");
    return std::pow(4.0 * pi * z, -d / 2.0) * std::exp(-r * r / (4.0 * z));
}

std::complex<double> kernel_at_origin(double alpha, int d, std::complex<double> z) {
    if (!(alpha > 0.0)) throw std::invalid_argument("kernel_at_origin: alpha must be positive");
    if (d < 1) throw std::invalid_argument("kernel_at_origin: d must be >= 1");
    if (!(z.real() > 0.0)) throw std::invalid_argument("kernel_at_origin: Re z must be positive");
    const double sphere = 2.0 * std::pow(pi, d / 2.0) / std::tgamma(d / 2.0);
    const double da = d / alpha;
    return std::pow(2.0 * pi, -d) * sphere * std::tgamma(da) / (alpha * std::pow(z, da));
}

double bg_bound(double alpha, int d, double t, double r) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::domain_error("bg_bound: alpha must lie in (0, 2)");
    if (d < 1) throw std::invalid_argument("bg_bound: d must be >= 1");
    if (!(t > 0.0) || !(r >= 0.0)) throw std::invalid_argument("bg_bound: need t > 0 and r >= 0");
    return t / std::pow(std::pow(t, 1.0 / alpha) + r, d + alpha);
}

namespace {
double bg_sup_ratio(double alpha, int d, const std::vector<double>& ts,
                    const std::vector<double>& rs, const QuadratureSpec& spec, double* worst_t,
                    double* worst_r) {
    double sup = 0.0;
    for (double t : ts) {
        for (double r : rs) {
            const KernelQuery q{alpha, d, ComplexTime(t, 0.0), r};
            const KernelResult k = kernel_free(q, spec);
            if (k.status != KernelStatus::ok)
                throw std::runtime_error("fit_bg_constant: kernel precision exhausted at t=" +
                                         std::to_string(t) + " r=" + std::to_string(r));
            const double ratio = std::abs(k.value) / bg_bound(alpha, d, t, r);
            if (ratio > sup) {
                sup = ratio;
                if (worst_t) *worst_t = t;
                if (worst_r) *worst_r = r;
            }
        }
    }
    return sup;
}

std::vector<double> with_midpoints(std::span<const double> xs) {
    std::vector<double> out(xs.begin(), xs.end());
    std::sort(out.begin(), out.end());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(0.5 * (out[i] + out[i + 1]));
    std::sort(out.begin(), out.end());
    return out;
}
} // namespace

BgFitReport fit_bg_constant(double alpha, int d, std::span<const double> ts,
                            std::span<const double> rs, const QuadratureSpec& spec) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::domain_error("fit_bg_constant: alpha must lie in (0, 2)");
    if (ts.empty() || rs.empty())
        throw std::invalid_argument("fit_bg_constant: empty sample grid");

    BgFitReport rep;
    const std::vector<double> ts0(ts.begin(), ts.end());
    const std::vector<double> rs0(rs.begin(), rs.end());
    rep.c_fitted = bg_sup_ratio(alpha, d, ts0, rs0, spec, &rep.worst_t, &rep.worst_r);
    rep.c_refined = bg_sup_ratio(alpha, d, with_midpoints(ts), with_midpoints(rs), spec,
                                 nullptr, nullptr);
    rep.rel_change = std::abs(rep.c_refined - rep.c_fitted) / rep.c_fitted;
    rep.pass = std::isfinite(rep.c_fitted) && rep.c_fitted > 0.0 && rep.rel_change < 0.05;
    return rep;
}

} // namespace fsk
