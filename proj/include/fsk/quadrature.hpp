// quadrature.hpp - adaptive Gauss-Kronrod (G7,K15) panel integration
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fsk {

struct PanelEstimate {
    std::complex<double> value{0.0, 0.0};
    double abs_err = 0.0;  // |K15 - G7| based estimate
    double l1_mass = 0.0;  // K15 estimate of the integral of |f|, for cancellation floors
};

// One K15/G7 panel on [a, b].
PanelEstimate gk15_panel(const std::function<std::complex<double>(double)>& f, double a, double b);

struct AdaptiveResult {
    std::complex<double> value{0.0, 0.0};
    double abs_err = 0.0;        // max(GK estimate sum, cancellation floor)
    double l1_mass = 0.0;        // accumulated integral of |f|
    int panels = 0;
    bool converged = false;      // abs_err <= tol within the panel budget
};

// Integrates f over the union of [edges[i], edges[i+1]] panels, bisecting the
// worst panel until the summed error estimate is <= tol or max_panels is hit.
// The reported abs_err never drops below eps * l1_mass (cancellation floor).
AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                  const std::vector<double>& edges, double tol, int max_panels);

} // namespace fsk
