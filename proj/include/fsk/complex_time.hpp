// complex_time.hpp - semigroup time parameter z in the open right half-plane
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fsk {

// z = modulus * exp(i*theta) with modulus > 0 and |theta| < pi/2 strictly,
// so Re z > 0 always holds.
class ComplexTime {
public:
    ComplexTime(double modulus, double theta) : modulus_(modulus), theta_(theta) {
        if (!(modulus > 0.0) || !std::isfinite(modulus))
            throw std::invalid_argument("ComplexTime: modulus must be positive and finite");
        if (!(std::abs(theta) < std::numbers::pi / 2) || !std::isfinite(theta))
            throw std::invalid_argument("ComplexTime: |theta| must be < pi/2");
        if (!(modulus * std::cos(theta) > 0.0))
            throw std::invalid_argument("ComplexTime: Re z must be positive");
    }

    static ComplexTime from_value(std::complex<double> z) {
        return ComplexTime(std::abs(z), std::arg(z));
    }

    double modulus() const { return modulus_; }
    double theta() const { return theta_; }
    double real() const { return modulus_ * std::cos(theta_); }
    std::complex<double> value() const { return std::polar(modulus_, theta_); }
    ComplexTime conj() const { return ComplexTime(modulus_, -theta_); }

private:
    double modulus_;
    double theta_;
};

} // namespace fsk
