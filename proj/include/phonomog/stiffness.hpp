#ifndef PHONOMOG_STIFFNESS_HPP
#define PHONOMOG_STIFFNESS_HPP

#include <array>
#include <span>

#include "phonomog/types.hpp"

namespace phonomog {

/// Index symmetries carried by a rank-4 stiffness-like tensor.
///   full_elastic: c_ijkl = c_jikl = c_ijlk and c_ijkl = conj(c_klij)
///   cosserat:     major symmetry only (arises from the oblique-lattice
///                 change of variables on indices j,l)
enum class SymmetryClass { full_elastic, cosserat };

/// Rank-4 elastic stiffness with complex entries (Pa). Entries are stored
/// densely; the symmetry class records which index symmetries are meaningful.
/// The 3x3 matrix view C_jl = (c_ijkl)_{i,k} is the working representation
/// for the solvers; C_jl = C_lj^+ always holds (major symmetry).
class StiffnessTensor {
 public:
  StiffnessTensor() : c_{}, sym_(SymmetryClass::full_elastic) {}

  static StiffnessTensor zero(SymmetryClass sym = SymmetryClass::full_elastic);
  /// Isotropic tensor from the c11, c66 pair (c12 = c11 - 2 c66).
  static StiffnessTensor isotropic(double c11, double c66);
  static StiffnessTensor from_lame(double lambda, double mu);
  /// Builds a full-elastic tensor from its (possibly Hermitian) 6x6 Voigt
  /// matrix, order 11,22,33,23,13,12, no shear weighting.
  static StiffnessTensor from_voigt(const Mat6& v);

  cx operator()(int i, int j, int k, int l) const { return c_[idx(i, j, k, l)]; }
  cx& at(int i, int j, int k, int l) { return c_[idx(i, j, k, l)]; }

  SymmetryClass symmetry_class() const { return sym_; }
  void set_symmetry_class(SymmetryClass s) { sym_ = s; }

  /// 6x6 Voigt view. Throws ConfigError for cosserat-class input, whose
  /// entries a Voigt matrix cannot represent.
  Mat6 voigt() const;

  /// Block C_jl = (c_ijkl) with rows i, columns k. One-based j,l in [1,3].
  Mat3 block(int j, int l) const;

  /// c~_ijkl = b_jp b_lq c_ipkq. Output is cosserat class.
  StiffnessTensor tilde_transform(const Mat3d& b) const;
  /// cbar_ijkl = b_im b_jp b_kn b_lq c_mpnq. Preserves the symmetry class.
  StiffnessTensor bar_transform(const Mat3d& b) const;

  /// Max |entry| deviation from major symmetry (should be 0 by construction
  /// for tensors built through the factory functions).
  double major_symmetry_residual() const;
  double minor_symmetry_residual() const;

  double max_abs() const;
  bool is_real(double tol = 0.0) const;

  StiffnessTensor& operator+=(const StiffnessTensor& o);
  StiffnessTensor& operator*=(double s);
  friend StiffnessTensor operator+(StiffnessTensor a, const StiffnessTensor& b) { return a += b; }
  friend StiffnessTensor operator-(const StiffnessTensor& a, const StiffnessTensor& b);
  friend StiffnessTensor operator*(double s, StiffnessTensor t) { return t *= s; }

 private:
  static int idx(int i, int j, int k, int l) { return ((i * 3 + j) * 3 + k) * 3 + l; }
  std::array<cx, 81> c_;
  SymmetryClass sym_;
};

/// Quasistatic Christoffel matrix Gamma(kappa) = sum_jl C_jl kappa_j kappa_l.
/// Non-unit kappa is normalized with a warning; in strict mode it throws.
Mat3 christoffel(const StiffnessTensor& c, const Vec3d& kappa, bool strict = false);

/// d_ikjl with full elastic symmetries over the pairs (i,k) and (j,l);
/// D_jl = (d_ikjl)_{i,k} is the symmetrized modulus 0.5 (C_jl + C_lj).
class DTensor {
 public:
  DTensor() : d_{} {}
  static DTensor from_voigt(const Mat6& v);
  /// d_ikjl = 0.5 (c_ijkl + c_ilkj).
  static DTensor from_ceff(const StiffnessTensor& c);

  cx operator()(int i, int k, int j, int l) const { return d_[idx(i, k, j, l)]; }
  cx& at(int i, int k, int j, int l) { return d_[idx(i, k, j, l)]; }

  Mat3 block(int j, int l) const;  // D_jl, one-based
  Mat6 voigt() const;              // pairs (i,k) -> row, (j,l) -> column
  double max_abs() const;

 private:
  static int idx(int i, int k, int j, int l) { return ((i * 3 + k) * 3 + j) * 3 + l; }
  std::array<cx, 81> d_;
};

Mat3 christoffel(const DTensor& d, const Vec3d& kappa, bool strict = false);

/// The ordered direction set {e1, e2, e3, (e2+e3)/s2, (e3+e1)/s2, (e1+e2)/s2}
/// required by d_from_gammas.
const std::array<Vec3d, 6>& canonical_directions();

/// Recovers D from the six Christoffel matrices taken at the canonical
/// directions, in that order. Exact (linear) on consistent inputs.
DTensor d_from_gammas(std::span<const Mat3> gammas);
DTensor d_from_gammas(const std::array<Mat3, 6>& gammas);

/// Inverse map D -> C^eff (equivalently 3 D^s - 2 D). Full-elastic output.
StiffnessTensor ceff_from_d(const DTensor& d);

}  // namespace phonomog

#endif
