// kernel.hpp - free fractional heat kernel exp(-z(-Delta)^{alpha/2})(x) on R^d
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fsk/complex_time.hpp"

namespace fsk {

struct KernelQuery {
    double alpha;   // order, > 0 (kernels for alpha > 2 are out of scope except alpha = 2)
    int d;          // dimension, 1..3
    ComplexTime z;  // semigroup time
    double r;       // |x|, >= 0

    void validate() const;
};

struct QuadratureSpec {
    double truncation_tol = 1e-14; // tail cutoff of the radial integrand, relative to its peak
    double panel_tol = 1e-12;      // absolute error target for the scaled (dimensionless) integral
    int max_panels = 20000;

    void validate() const;
};

enum class KernelStatus {
    ok,
    precision_exhausted, // oscillatory cancellation above the precision budget; value is partial
};

struct KernelResult {
    std::complex<double> value{0.0, 0.0};
    double abs_err = 0.0; // estimated absolute error of value (kernel units)
    KernelStatus status = KernelStatus::ok;
    int panels = 0;
};

// Guaranteed validity region: inside it, well-formed queries converge for the
// default QuadratureSpec. Outside it the evaluator still runs and returns ok
// only when the error target is met (or the integral is resolved down to the
// double-precision cancellation floor and that floor still resolves the
// value); severe oscillatory cancellation reports precision_exhausted.
constexpr double kKernelRhoGuaranteed = 50.0;   // r / |z|^{1/alpha}
constexpr double kKernelThetaGuaranteed = 1.45; // radians

// (2pi)^{-d} int_{R^d} e^{-z|xi|^alpha} e^{i x.xi} dxi via the radial reduction
//   (2pi)^{-d/2} r^{1-d/2} int_0^inf e^{-z s^alpha} s^{d/2} J_{d/2-1}(s r) ds.
// For alpha = 2 with r^2 cos(theta)/(4|z|) large, an exact contour shift of the
// even-extended integrand replaces the radial path (the real-axis integral
// cancels below double precision there; see kernel.cpp).
KernelResult kernel_free(const KernelQuery& q, const QuadratureSpec& spec = {});

// c_d z / (z^2 + r^2)^{(d+1)/2}, c_d = Gamma((d+1)/2) / pi^{(d+1)/2}; the
// alpha = 1 kernel. Principal branch of the half-integer power (z^2 + r^2
// never crosses the closed negative real axis when Re z > 0).
std::complex<double> kernel_poisson(int d, std::complex<double> z, double r);

// (4 pi z)^{-d/2} exp(-r^2/(4z)); the alpha = 2 kernel, principal branch.
std::complex<double> kernel_gauss(int d, std::complex<double> z, double r);

// (2pi)^{-d} |S^{d-1}| Gamma(d/alpha) / (alpha z^{d/alpha}), principal branch.
std::complex<double> kernel_at_origin(double alpha, int d, std::complex<double> z);

// t / (t^{1/alpha} + r)^{d+alpha}, the constant-free tail envelope; alpha in (0,2).
double bg_bound(double alpha, int d, double t, double r);

struct BgFitReport {
    double c_fitted = 0.0;   // sup over the grid of |kernel| / bg_bound
    double c_refined = 0.0;  // same sup on the midpoint-refined grid
    double rel_change = 0.0; // |c_refined - c_fitted| / c_fitted
    bool pass = false;       // finite and rel_change < 0.05
    double worst_t = 0.0, worst_r = 0.0;
};

// Fits the envelope constant over the (t, r) grid and re-fits on the grid with
// all midpoints inserted. Propagates precision-exhausted kernel errors.
BgFitReport fit_bg_constant(double alpha, int d, std::span<const double> ts,
                            std::span<const double> rs, const QuadratureSpec& spec = {});

} // namespace fsk
