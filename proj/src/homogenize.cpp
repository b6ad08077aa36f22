#include "phonomog/homogenize.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "phonomog/log.hpp"

namespace phonomog {

const char* method_name(Method m) { return m == Method::pwe ? "pwe" : "mm"; }

std::array<Mat3, 6> method_gammas(const CellField& field, Method method, int N,
                                  const SolveOptions& opts, MmDiagnostics* diag) {
  std::array<Mat3, 6> gamma;
  if (method == Method::pwe) {
    const PweSystem sys = PweSystem::assemble(field, N, opts.pwe);
    const auto ce = sys.solve();
    const auto& dirs = canonical_directions();
    for (int a = 0; a < 6; ++a) {
      Mat3 g = Mat3::Zero();
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) g += dirs[a][j] * dirs[a][l] * ce[j][l];
      gamma[a] = g;
    }
    return gamma;
  }
  for (int axis = 1; axis <= 3; ++axis)
    gamma[axis - 1] = mm_cll_eff(field, axis, N, opts.mm, diag);
  const auto rotated = rotated_principal_runs(field, N, opts.mm);
  for (int k = 0; k < 3; ++k) gamma[3 + k] = rotated[k];
  return gamma;
}

namespace {

DTensor dtensor_from_blocks(const Mat3 blocks[3][3]) {
  DTensor d;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) d.at(i, k, p, q) = blocks[p][q](i, k);
  return d;
}

/// Maps the D-tensor of the cubic-equivalent problem back to the original
/// lattice: D_pq = a_pj a_ql X_jl with X_jl = D~_jl (cosserat path) or
/// A Dbar_jl A^+ (anisotropic-density path).
DTensor oblique_back_transform(const DTensor& dred, const Mat3d& lattice, ObliqueFormulation form) {
  Mat3 x[3][3];
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      x[j][l] = dred.block(j + 1, l + 1);
      if (form == ObliqueFormulation::anisotropic_density)
        x[j][l] = lattice.cast<cx>() * x[j][l] * lattice.cast<cx>().adjoint();
    }
  Mat3 out[3][3];
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      out[p][q].setZero();
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) out[p][q] += lattice(p, j) * lattice(q, l) * x[j][l];
    }
  return dtensor_from_blocks(out);
}

}  // namespace

EffectiveResult effective_moduli(const UnitCell& cell, Method method, int N,
                                 const SolveOptions& opts) {
  cell.validate();
  EffectiveResult res;
  res.method = method;
  res.truncation = N;
  res.mean_rho = cell.mean_density();

  const CellField field = to_cubic_equivalent(cell, opts.formulation);
  const auto gammas_reduced = method_gammas(field, method, N, opts, &res.diag);
  DTensor d = d_from_gammas(gammas_reduced);
  if (!cell.is_cubic_lattice()) d = oblique_back_transform(d, cell.lattice, opts.formulation);

  // The exact D is Hermitian in Voigt form; the skew of the recovered matrix
  // measures the inconsistency between the six runs (for MM, the truncation
  // gap between axis and rotated runs; for PWE, rounding only).
  Mat6 dv = d.voigt();
  const double skew = (dv - Mat6(dv.adjoint())).norm() / std::max(dv.norm(), 1e-300);
  res.diag.skew = std::max(res.diag.skew, skew);
  if (skew > opts.symmetry_tol || (opts.strict && skew > opts.warn_symmetry_tol)) {
    std::ostringstream os;
    os << "effective_moduli: recovered moduli violate symmetry (skew " << skew << ")";
    throw NumericalError(os.str());
  }
  if (skew > opts.warn_symmetry_tol)
    log_warn("effective_moduli: recovered-moduli skew " + std::to_string(skew) +
             " (truncation inconsistency between runs; symmetrized)");
  dv = 0.5 * (dv + Mat6(dv.adjoint()));
  d = DTensor::from_voigt(dv);

  res.c_eff = ceff_from_d(d);
  const auto& dirs = canonical_directions();
  for (int a = 0; a < 6; ++a) {
    res.gammas[a] = christoffel(d, dirs[a]);
    res.speeds[a] = gamma_speeds(res.gammas[a], res.mean_rho);
  }
  return res;
}

std::array<double, 3> speeds(const EffectiveResult& result, const Vec3d& kappa) {
  return gamma_speeds(christoffel(result.c_eff, kappa), result.mean_rho);
}

std::vector<ConvergenceRow> convergence_study(const UnitCell& cell,
                                              const std::vector<Method>& methods,
                                              const std::vector<int>& n_list,
                                              const SolveOptions& opts) {
  cell.validate();
  const CellField field = to_cubic_equivalent(cell, opts.formulation);
  const double rho = cell.mean_density();
  std::vector<ConvergenceRow> rows;
  for (Method m : methods) {
    for (int n : n_list) {
      ConvergenceRow row{};
      row.method = m;
      row.truncation = n;
      const long w = 2L * n + 1;
      row.matrix_side = (m == Method::pwe) ? 3L * w * w * w : 6L * w * w;
      const auto t0 = std::chrono::steady_clock::now();
      Mat3 gamma_e1;
      row.residual = 0.0;
      row.alpha_redraws = 0;
      if (!cell.is_cubic_lattice()) {
        // Oblique cells need the full recovery to express Gamma(e1) in the
        // original frame.
        const EffectiveResult r = effective_moduli(cell, m, n, opts);
        gamma_e1 = r.gammas[0];
        row.residual = std::max(r.diag.prune_residual, r.diag.skew);
        row.alpha_redraws = r.diag.alpha_redraws;
      } else if (m == Method::pwe) {
        const PweSystem sys = PweSystem::assemble(field, n, opts.pwe);
        gamma_e1 = sys.solve()[0][0];
      } else {
        MmDiagnostics diag;
        gamma_e1 = mm_cll_eff(field, 1, n, opts.mm, &diag);
        row.residual = std::max(diag.prune_residual, diag.skew);
        row.alpha_redraws = diag.alpha_redraws;
      }
      const auto t1 = std::chrono::steady_clock::now();
      row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
      row.speeds_e1 = gamma_speeds(gamma_e1, rho);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace phonomog
