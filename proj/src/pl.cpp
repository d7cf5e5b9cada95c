// pl.cpp - sector interpolation bound and its proof auxiliaries
#include "fsk/pl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsk {

namespace {
constexpr double kEpsMin = 1e-6; // open-interval guard: (cos gamma)^{-beta1} blowup at the ends
constexpr double kHalfPi = std::numbers::pi / 2;
} // namespace

void PolyBoundHypothesis::validate() const {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0))
        throw std::invalid_argument("PolyBoundHypothesis: a1, a2, a3 must be positive");
    if (beta1 < 0.0 || beta2 < 0.0 || beta3 < 0.0)
        throw std::invalid_argument("PolyBoundHypothesis: beta1, beta2, beta3 must be nonnegative");
}

double PolyBoundHypothesis::sector_bound(const ComplexTime& z) const {
    return a1 * std::pow(z.real(), -beta1);
}

double PolyBoundHypothesis::axis_bound(double abs_z) const {
    return a1 * std::pow(abs_z, -beta1) * std::pow(a2 / abs_z, -beta2) *
           std::pow(a3 / abs_z, beta3);
}

double gamma_eps(double epsilon, double theta) {
    if (!(epsilon > kEpsMin) || !(epsilon < 1.0 - kEpsMin))
        throw std::domain_error("gamma_eps: epsilon must lie in (1e-6, 1-1e-6)");
    if (!(std::abs(theta) < kHalfPi))
        throw std::domain_error("gamma_eps: |theta| must be < pi/2");
    return epsilon * std::abs(theta) + (1.0 - epsilon) * kHalfPi;
}

double pl_bound(const PolyBoundHypothesis& hyp, const ComplexTime& z, double epsilon) {
    hyp.validate();
    const double gamma = gamma_eps(epsilon, z.theta());
    const double sector = hyp.sector_bound(z);
    const double axis_factor =
        std::pow(hyp.a2 / z.modulus(), -hyp.beta2) * std::pow(hyp.a3 / z.modulus(), hyp.beta3);
    const double exponent = 1.0 - std::abs(z.theta()) / gamma;
    const double bracket = std::pow(epsilon, -hyp.beta1) * std::pow(axis_factor, exponent);
    return sector * std::min(1.0, bracket);
}

namespace {
std::complex<double> aux_h(std::complex<double> z, double a, double beta, double gamma,
                           double sign) {
    if (!(gamma > 0.0) || !(gamma < kHalfPi))
        throw std::domain_error("aux_h2/aux_h3: gamma must lie in (0, pi/2)");
    if (!(a > 0.0) || beta < 0.0)
        throw std::invalid_argument("aux_h2/aux_h3: need a > 0 and beta >= 0");
    if (!(z.real() > 0.0))
        throw std::domain_error("aux_h2/aux_h3: Re z must be positive");
    const std::complex<double> w = std::log(a * z); // principal branch
    const std::complex<double> i(0.0, 1.0);
    return std::exp(sign * beta * w * (1.0 + i * w / (2.0 * gamma)));
}
} // namespace

std::complex<double> aux_h2(std::complex<double> z, double a2, double beta2, double gamma) {
    return aux_h(z, a2, beta2, gamma, +1.0);
}

std::complex<double> aux_h3(std::complex<double> z, double a3, double beta3, double gamma) {
    return aux_h(z, a3, beta3, gamma, -1.0);
}

double effective_exponent(double beta, int d, double sigma, double epsilon, double theta) {
    if (d < 1) throw std::domain_error("effective_exponent: d must be >= 1");
    if (!(sigma > 0.0)) throw std::domain_error("effective_exponent: sigma must be positive");
    const double d_over_sigma = std::isinf(sigma) ? 0.0 : static_cast<double>(d) / sigma;
    if (beta < d_over_sigma)
        throw std::domain_error("effective_exponent: beta must be >= d/sigma");
    const double gamma = gamma_eps(epsilon, theta);
    return (beta - d_over_sigma) * (1.0 - std::abs(theta) / gamma);
}

PlCertification certify_pl(const AnalyticWitness& witness, const PolyBoundHypothesis& hyp,
                           double epsilon, std::span<const ComplexTime> samples, double tol) {
    hyp.validate();
    if (samples.empty())
        throw std::invalid_argument("certify_pl: empty sample set");

    PlCertification rep;
    rep.tol = tol;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ComplexTime& z = samples[i];
        const double f = std::abs(witness.evaluator(z));
        const double ratio = f / pl_bound(hyp, z, epsilon);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_index = i;
            rep.worst_modulus = z.modulus();
            rep.worst_theta = z.theta();
        }
        rep.sector_excess = std::max(rep.sector_excess, f / hyp.sector_bound(z));
        if (z.theta() == 0.0)
            rep.axis_excess = std::max(rep.axis_excess, f / hyp.axis_bound(z.modulus()));
    }
    rep.bound_pass = rep.max_ratio <= 1.0 + tol;
    rep.hypothesis_pass = rep.sector_excess <= 1.0 + tol && rep.axis_excess <= 1.0 + tol;
    rep.pass = rep.bound_pass && rep.hypothesis_pass;
    return rep;
}

} // namespace fsk
