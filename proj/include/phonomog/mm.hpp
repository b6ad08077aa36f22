#ifndef PHONOMOG_MM_HPP
#define PHONOMOG_MM_HPP

#include <functional>
#include <vector>

#include "phonomog/unit_cell.hpp"

namespace phonomog {

struct MmOptions {
  cx alpha{0.0, 2.0};  // shift; kept away from the real axis and unit circle
  std::vector<cx> alpha_fallbacks{{0.5, 2.0}, {-1.5, 1.5}};
  int steps = 512;
  bool adaptive = true;      // double the step count until the Cauchy gap
  double cauchy_tol = 1e-8;  // ||dC||/||C|| target for the doubling loop
  int max_steps = 1 << 16;
  double prune_tol = 1e-6;       // residual of the annihilated rows/columns of T
  double hermitize_tol = 1e-6;   // accepted skew part of C_ll^eff
  double divergence_factor = 1e12;
  Exec exec = Exec::parallel;
};

struct MmDiagnostics {
  int steps_used = 0;
  double cauchy_gap = 0.0;
  double prune_residual = 0.0;
  double skew = 0.0;
  cx alpha_used{0.0, 2.0};
  int alpha_redraws = 0;
};

/// The 2D-Fourier-space system for one distinguished axis: operators B, A1,
/// A2 of side 3(2N+1)^2 evaluated per slice x_l, and the block generator
///   Q0 = [[-B^-1 A1, B^-1], [A2 - A1^+ B^-1 A1, A1^+ B^-1]].
/// Modes run row-major over (g_a, g_b) in [-N,N]^2 (transverse axes in
/// increasing order), so g = 0 sits at the central block position.
class MmSystem {
 public:
  MmSystem(const CellField& field, int axis, int N);

  int axis() const { return axis_; }
  int truncation() const { return n_; }
  int n_modes() const { return static_cast<int>(modes_.size()); }
  int side() const { return 6 * n_modes(); }
  int zero_index() const { return n_modes() / 2; }
  double scale() const { return field_->stiffness_scale(); }
  const CellField& field() const { return *field_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  struct Slice {
    MatX a1, a2;
    MatX b;
    Eigen::LLT<MatX> bllt;
  };

  /// Assembles B, A1, A2 (non-dimensional) at x_l = x and factorizes B.
  /// Throws NumericalError when B is not positive definite.
  Slice assemble(double x, Exec exec = Exec::parallel) const;

  /// out = Q0(slice) * in, without forming Q0.
  void apply_q0(const Slice& s, const MatX& in, MatX& out, Exec exec = Exec::parallel) const;

  /// Dense Q0 (small N; tests and the direct monodromy oracle).
  MatX q0_dense(double x) const;

 private:
  const CellField* field_;
  int axis_;
  int n_;
  std::vector<Vec2i> modes_;
  std::vector<double> breakpoints_;
  Mat3 mat_[3][3], del_[3][3];  // non-dimensional constant blocks
  int ta_, tb_;                 // transverse axes (1-based)
};

/// Integrates the Riccati equation R' = -R Q0 (I + alpha R) from
/// R(0) = (1-alpha)^-1 I to R(1) with classical RK4 on a fixed grid aligned
/// with the material interfaces. Returns the non-dimensional resolvent
/// R_alpha(1) = (M0(1) - alpha I)^-1.
MatX integrate_resolvent(const MmSystem& sys, cx alpha, int steps, Exec exec = Exec::parallel);

/// Direct multiplicative integral via midpoint exponentials (test oracle;
/// unstable for large sides). Non-dimensional M0(1).
MatX monodromy_direct(const MmSystem& sys, int substeps);

/// Pruned-Schur extraction of C_ll^eff (Pa) from R_alpha(1):
/// T = (1-alpha)(I + (alpha-1) R) has exact zero columns at the g = 0 block
/// of the displacement half and zero rows at the g = 0 block of the traction
/// half; removing them leaves T~ = [[T1,T2],[T3,T4]] and
/// C_ll^eff = E0^+ (T2 - T1 T3^-1 T4)^-1 E0.
Mat3 extract_cll_eff(const MmSystem& sys, const MatX& r1, cx alpha, MmDiagnostics* diag = nullptr,
                     double prune_tol = 1e-6, double hermitize_tol = 1e-6);

/// Full solution matrix S (non-dimensional, 6n x 3) of (M0(1) - I) S = W0,
/// with the gauge S(g=0 displacement rows) = 0.
MatX mm_solution_matrix(const MmSystem& sys, const MatX& r1, cx alpha, double prune_tol = 1e-6);

/// Propagates Y(x) = M0(x) S with RK4 (Y' = Q0 Y) and reports Y at every
/// step midpoint and endpoint through the callback.
void propagate_mm_solution(const MmSystem& sys, const MatX& s0, int steps,
                           const std::function<void(double, const MatX&)>& cb,
                           Exec exec = Exec::parallel);

/// C_ll^eff (Pa) with the step-doubling Cauchy loop and alpha re-draws.
Mat3 mm_cll_eff(const CellField& field, int axis, int N, const MmOptions& opts = {},
                MmDiagnostics* diag = nullptr);

/// Gamma^(4), Gamma^(5), Gamma^(6): bar-remapped runs with the three integer
/// lattice transforms (axes 2, 3, 1 respectively), mapped back through
/// Gamma = 2 A Cbar_ll^eff A^+.
std::array<Mat3, 3> rotated_principal_runs(const CellField& field, int N, const MmOptions& opts = {},
                                           std::array<MmDiagnostics, 3>* diags = nullptr);

/// The three integer lattice transforms used by the rotated runs.
const std::array<Mat3i, 3>& rotation_lattices();

/// Off-diagonal C_jl^e (Pa) by direct quadrature of the propagated solution
/// (cross-check path; accuracy degrades at high contrast and truncation).
Mat3 direct_offdiagonal(const CellField& field, int j, int l, int N, const MmOptions& opts = {});

}  // namespace phonomog

#endif
