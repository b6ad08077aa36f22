#ifndef PHONOMOG_HOMOGENIZE_HPP
#define PHONOMOG_HOMOGENIZE_HPP

#include <vector>

#include "phonomog/bounds.hpp"
#include "phonomog/mm.hpp"
#include "phonomog/pwe.hpp"

namespace phonomog {

enum class Method { pwe, mm };

struct SolveOptions {
  MmOptions mm;
  PweOptions pwe;
  ObliqueFormulation formulation = ObliqueFormulation::anisotropic_density;
  bool strict = false;
  // Hard cap on the skew of the recovered moduli. The MM six-run recovery
  // carries a structural skew of the order of the truncation gap between the
  // axis and rotated runs (percent-level at small N), so the hard gate is
  // loose; skew above warn_symmetry_tol is logged, and strict mode promotes
  // it to an error.
  double symmetry_tol = 2e-1;
  double warn_symmetry_tol = 1e-5;
};

struct EffectiveResult {
  Method method = Method::mm;
  int truncation = 0;
  StiffnessTensor c_eff;             // Pa, full elastic symmetries
  std::array<Mat3, 6> gammas;        // at the canonical six directions
  double mean_rho = 0.0;             // kg/m^3
  std::array<std::array<double, 3>, 6> speeds;  // ascending, m/s, per direction
  MmDiagnostics diag;                // last MM run (empty for PWE)
};

/// The six Christoffel matrices of a cubic-lattice field: axis runs plus
/// rotated runs (MM), or direct contraction of the nine C_jl^e blocks (PWE).
std::array<Mat3, 6> method_gammas(const CellField& field, Method method, int N,
                                  const SolveOptions& opts = {}, MmDiagnostics* diag = nullptr);

/// Full pipeline: oblique reduction, six Christoffel matrices, D recovery,
/// and the D -> C^eff map (with the oblique back-transform on D).
EffectiveResult effective_moduli(const UnitCell& cell, Method method, int N,
                                 const SolveOptions& opts = {});

/// Ascending speed triple at a direction, from the recovered moduli.
std::array<double, 3> speeds(const EffectiveResult& result, const Vec3d& kappa);

struct ConvergenceRow {
  Method method;
  int truncation;
  long matrix_side;  // nominal method dimension: 3(2N+1)^3 or 6(2N+1)^2
  double wall_seconds;
  std::array<double, 3> speeds_e1;  // ascending, m/s
  double residual;                  // integration diagnostics (0 for PWE)
  int alpha_redraws;
};

/// Speeds along e1 per (method, N), with wall time and diagnostics; rows
/// ordered by (method, N).
std::vector<ConvergenceRow> convergence_study(const UnitCell& cell,
                                              const std::vector<Method>& methods,
                                              const std::vector<int>& n_list,
                                              const SolveOptions& opts = {});

const char* method_name(Method m);

}  // namespace phonomog

#endif
