#ifndef PHONOMOG_BOUNDS_HPP
#define PHONOMOG_BOUNDS_HPP

#include <array>

#include "phonomog/unit_cell.hpp"

namespace phonomog {

/// Voigt-average Christoffel matrix <Gamma>(kappa) — the classical upper
/// bound (equals the N = 0 PWE approximation).
Mat3 voigt_gamma(const CellField& field, const Vec3d& kappa);

/// Closed-form N = 0 monodromy bound for one principal direction:
/// S2 = < <C_ll>_perp^{-1} >_l^{-1}. Quadrature: per-piece composite Simpson
/// between material interfaces, refined until the relative change drops
/// below tol.
Mat3 mm_zero_cll(const CellField& field, int axis, double tol = 1e-9);

/// Gamma_B(kappa): the Voigt average with the (l,l) term replaced by the
/// sharper S2 bound for the chosen axis (largest |kappa| component when
/// axis = 0).
Mat3 gamma_bound(const CellField& field, const Vec3d& kappa, int axis = 0, double tol = 1e-9);

/// Ascending speeds (m/s) from a Christoffel matrix and mean density.
std::array<double, 3> gamma_speeds(const Mat3& gamma, double mean_rho);

/// Classical two-phase Hashin-Shtrikman bulk/shear bounds, isotropic phases
/// only. Speed bounds use <rho>.
struct HsBounds {
  double k_low, k_high;
  double g_low, g_high;
  double cl_low, cl_high;  // longitudinal speed bounds, m/s
  double ct_low, ct_high;  // transverse
};
HsBounds hashin_shtrikman(const UnitCell& cell);

}  // namespace phonomog

#endif
