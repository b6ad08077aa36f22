#ifndef PHONOMOG_UNIT_CELL_HPP
#define PHONOMOG_UNIT_CELL_HPP

#include <string>

#include "phonomog/indicator.hpp"
#include "phonomog/stiffness.hpp"
#include "phonomog/types.hpp"

namespace phonomog {

struct Material {
  double rho = 0.0;  // kg/m^3
  StiffnessTensor stiffness;

  static Material isotropic(double c11_pa, double c66_pa, double rho_kgm3);
  /// rho > 0 and positive-definite Voigt form; throws ConfigError naming the
  /// offending field.
  void validate(const std::string& name) const;
};

/// Periodic microstructure: matrix material with a single inclusion on a
/// (possibly oblique) lattice a_p = A e_p. The shape is described in lattice
/// coordinates on the unit cell.
struct UnitCell {
  Material matrix;
  Material inclusion;
  Shape shape = Homogeneous{};
  Mat3d lattice = Mat3d::Identity();

  void validate() const;
  bool is_cubic_lattice() const;
  double volume_fraction() const;
  /// <rho> = f rho_inc + (1-f) rho_mat; invariant under the lattice remap.
  double mean_density() const;
};

enum class ObliqueFormulation { cosserat, anisotropic_density };

/// All nine Fourier blocks Chat_jl(g) for one wavevector.
struct BlockSet {
  Mat3 jl[3][3];
  const Mat3& operator()(int j, int l) const { return jl[j - 1][l - 1]; }
};

/// Cubic-lattice two-phase stiffness field consumed by the solvers:
/// C(x) = c_mat + c_delta * chi(x), with chi the inclusion indicator.
/// Oblique cells reduce to this form via to_cubic_equivalent; the lattice
/// transform is folded into the constant tensors (and, for the
/// anisotropic-density formulation, into the constant density tensor).
class CellField {
 public:
  CellField() = default;

  static CellField from_cell(const UnitCell& cell);

  /// Remap used by the rotated principal runs: bar-transform the tensors by
  /// a^-1 and remap the geometry by a (integer matrix).
  CellField bar_remapped(const Mat3i& a) const;
  CellField tilde_remapped(const Mat3i& a) const;

  const Indicator& indicator() const { return indicator_; }
  Indicator& indicator() { return indicator_; }
  const StiffnessTensor& c_mat() const { return c_mat_; }
  const StiffnessTensor& c_delta() const { return c_delta_; }
  SymmetryClass symmetry_class() const { return c_mat_.symmetry_class(); }

  double mean_rho() const { return rho_mat_ + rho_delta_ * indicator_.volume(); }
  Mat3d mean_rho_tensor() const { return density_tensor_ * mean_rho(); }

  /// Scale used to non-dimensionalize the solver linear algebra.
  double stiffness_scale() const { return scale_; }

  /// <C_jl> over the cell.
  Mat3 mean_block(int j, int l) const;
  StiffnessTensor mean_stiffness() const;

  /// 3D Fourier coefficient blocks Chat_jl(g) (Pa).
  BlockSet fourier3(const Vec3i& g) const;
  /// 2D slice coefficient blocks Chat_jl(g, x_l) (Pa).
  BlockSet fourier2_slice(int axis, const Vec2i& g, double x) const;

  /// Section average <C_ll>_perp(x_l) (Pa).
  Mat3 section_mean_cll(int axis, double x) const;

 private:
  friend CellField to_cubic_equivalent(const UnitCell&, ObliqueFormulation);
  StiffnessTensor c_mat_, c_delta_;
  double rho_mat_ = 0.0, rho_delta_ = 0.0;
  Mat3d density_tensor_ = Mat3d::Identity();
  Indicator indicator_;
  double scale_ = 1.0;
  void update_scale();
};

/// Reduces a cell on lattice A to an equivalent problem on the cubic lattice.
/// The cosserat path transforms only the (j,l) tensor indices and keeps a
/// scalar density; the anisotropic-density path transforms all four indices
/// and carries the constant density tensor B B^+. Heterogeneous cells require
/// an integer lattice matrix (the cubically repeated description is only
/// A-periodic in that case).
CellField to_cubic_equivalent(const UnitCell& cell, ObliqueFormulation form);

}  // namespace phonomog

#endif
