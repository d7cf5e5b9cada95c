// norms.hpp - weighted p->q operator norms of masked kernel matrices
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fsk/op.hpp"

namespace fsk {

// Discrete L^p norm with uniform node weight w (= h^d): (sum |f_i|^p w)^{1/p},
// max |f_i| for p = infinity.
double lp_norm(std::span<const double> f, double p, double weight);
double lp_norm(std::span<const std::complex<double>> f, double p, double weight);

// Certified interval for an operator norm. Exact pairs collapse the interval;
// for interpolated pairs all pass/fail logic downstream uses `upper` so
// estimate verification stays conservative. `uncertain` flags upper/lower > 3.
struct NormEstimate {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;
    bool uncertain = false;

    double value() const { return upper; }
};

// Norm of f -> K f h^d from L^p to L^q on the grid, with rows restricted to
// row_mask and columns to col_mask (empty mask vector = no restriction).
// Exact when p = 1 (max weighted column q-norm), q = infinity (max weighted
// row p'-norm), or p = q = 2 (top singular value times h^d); this covers the
// corner set {(1,1),(1,2),(1,inf),(2,2),(2,inf),(inf,inf)}. Other pairs with
// p <= q return a Riesz-Thorin upper bound interpolated between exact corners
// and a lower bound from projected power iteration (Boyd). Deterministic:
// fixed iteration schedule, no randomness.
NormEstimate opnorm(const KernelMatrix& K, double p, double q);
NormEstimate opnorm_masked(const KernelMatrix& K,
                           std::span<const std::uint8_t> row_mask,
                           std::span<const std::uint8_t> col_mask,
                           double p, double q);

// Holder conjugate: 1 -> inf, inf -> 1, else p/(p-1).
double conjugate_exponent(double p);

} // namespace fsk
