#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fsk/quadrature.hpp"

using namespace fsk;
using std::numbers::pi;

TEST_CASE("gk15 panel nails smooth integrands") {
    const PanelEstimate p = gk15_panel([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::abs(p.value - (std::exp(1.0) - 1.0)) < 1e-14);
    CHECK(p.abs_err < 1e-12);
    CHECK(p.l1_mass == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("adaptive integration resolves an endpoint cusp") {
    const AdaptiveResult r = integrate_adaptive(
        [](double x) { return std::complex<double>(1.0 / std::sqrt(x), 0.0); },
        {0.0, 1.0}, 1e-10, 5000);
    CHECK(r.converged);
    CHECK(std::abs(r.value.real() - 2.0) < 1e-9);
}

TEST_CASE("adaptive integration handles strong cancellation honestly") {
    std::vector<double> edges;
    for (int k = 0; k <= 40; ++k) edges.push_back(20.0 * pi * k / 40.0);
    const AdaptiveResult r = integrate_adaptive(
        [](double x) { return std::complex<double>(std::cos(x), 0.0); }, edges, 1e-10,
        5000);
    CHECK(r.converged);
    CHECK(std::abs(r.value) < 1e-10);
    CHECK(r.l1_mass == doctest::Approx(40.0).epsilon(1e-6));
}

TEST_CASE("adaptive integration of a complex exponential tail") {
    const AdaptiveResult r = integrate_adaptive(
        [](double x) { return std::exp(std::complex<double>(-x, -x)); }, {0.0, 5.0, 40.0},
        1e-13, 5000);
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::complex<double>(0.5, -0.5)) < 1e-12);
}

TEST_CASE("adaptive integration validates inputs and budget") {
    auto one = [](double) { return std::complex<double>(1.0, 0.0); };
    CHECK_THROWS_AS(integrate_adaptive(one, {1.0, 0.0}, 1e-8, 100), std::invalid_argument);
    CHECK_THROWS_AS(integrate_adaptive(one, {0.0}, 1e-8, 100), std::invalid_argument);
    CHECK_THROWS_AS(integrate_adaptive(one, {0.0, 1.0, 2.0}, 1e-8, 1),
                    std::invalid_argument);

    // A hard oscillatory integrand with a starved panel budget must report
    // non-convergence instead of a confident wrong value.
    const AdaptiveResult r = integrate_adaptive(
        [](double x) { return std::complex<double>(std::cos(300.0 * x), 0.0); },
        {0.0, 10.0}, 1e-12, 4);
    CHECK_FALSE(r.converged);
    CHECK(r.abs_err > 1e-12);
}
