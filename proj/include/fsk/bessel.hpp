// bessel.hpp - Bessel function of the first kind, order zero
#pragma once

namespace fsk {

// Power series for |x| < 14, Hankel asymptotic expansion beyond; absolute
// error below 5e-10 everywhere (validated against the committed reference
// table in tests/fixtures/j0_reference.txt).
double bessel_j0(double x);

} // namespace fsk
