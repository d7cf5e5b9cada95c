// pl.hpp - sector interpolation bound for polynomially bounded analytic families
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fsk/complex_time.hpp"

namespace fsk {

// Hypothesis data (a1,a2,a3,beta1,beta2,beta3):
//   on the sector:    ||F(|z|e^{i theta})|| <= a1 (|z| cos theta)^{-beta1}
//   on the real axis: ||F(|z|)|| <= a1 |z|^{-beta1} (a2/|z|)^{-beta2} (a3/|z|)^{beta3}
struct PolyBoundHypothesis {
    double a1 = 1.0;
    double a2 = 1.0;
    double a3 = 1.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;

    void validate() const;

    // Right-hand sides of the two assumed bounds.
    double sector_bound(const ComplexTime& z) const;
    double axis_bound(double abs_z) const;
};

// gamma(eps, theta) = eps|theta| + (1-eps) pi/2, strictly between |theta| and pi/2.
// eps is an open-interval parameter; values outside (1e-6, 1-1e-6) are rejected.
double gamma_eps(double epsilon, double theta);

// Interpolated sector bound:
//   a1 (|z|cos theta)^{-beta1} * min{1, eps^{-beta1} * [(a2/|z|)^{-beta2} (a3/|z|)^{beta3}]^{1-|theta|/gamma}}
double pl_bound(const PolyBoundHypothesis& hyp, const ComplexTime& z, double epsilon);

// Proof auxiliaries, principal log branch:
//   aux_h2 = exp( beta2 * log(a2 z) * (1 + i log(a2 z)/(2 gamma)))
//   aux_h3 = exp(-beta3 * log(a3 z) * (1 + i log(a3 z)/(2 gamma)))
// |aux_h2| = |aux_h3| = 1 exactly on the ray arg z = gamma.
std::complex<double> aux_h2(std::complex<double> z, double a2, double beta2, double gamma);
std::complex<double> aux_h3(std::complex<double> z, double a3, double beta3, double gamma);

// (beta - d/sigma) * (1 - |theta|/gamma(eps,theta)); requires beta >= d/sigma.
// sigma may be +infinity (d/sigma = 0).
double effective_exponent(double beta, int d, double sigma, double epsilon, double theta);

struct AnalyticWitness {
    std::function<std::complex<double>(const ComplexTime&)> evaluator;
    std::string label;
};

struct PlCertification {
    double max_ratio = 0.0;        // max over samples of ||F(z)|| / pl_bound
    std::size_t worst_index = 0;   // sample attaining max_ratio
    double worst_modulus = 0.0;
    double worst_theta = 0.0;
    bool bound_pass = false;       // max_ratio <= 1 + tol
    double sector_excess = 0.0;    // max ||F|| / sector_bound over all samples
    double axis_excess = 0.0;      // max ||F|| / axis_bound over real-axis samples
    bool hypothesis_pass = false;  // both excesses <= 1 + tol
    bool pass = false;             // bound_pass && hypothesis_pass
    double tol = 0.0;
};

// Checks the interpolated bound on a sample set and re-checks the hypothesis
// bounds (sector bound on every sample, axis bound on samples with theta = 0).
PlCertification certify_pl(const AnalyticWitness& witness, const PolyBoundHypothesis& hyp,
                           double epsilon, std::span<const ComplexTime> samples, double tol);

} // namespace fsk
