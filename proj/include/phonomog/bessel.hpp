#ifndef PHONOMOG_BESSEL_HPP
#define PHONOMOG_BESSEL_HPP

namespace phonomog {

/// First-order Bessel function of the first kind. Maclaurin series in long
/// double up to |x| = 16, Hankel asymptotic expansion beyond; relative
/// accuracy <= 1e-12 for |x| <= 1e3 (away from the zeros of J1).
double bessel_j1(double x);

}  // namespace phonomog

#endif
