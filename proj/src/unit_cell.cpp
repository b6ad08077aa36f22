#include "phonomog/unit_cell.hpp"

#include <cmath>

namespace phonomog {

Material Material::isotropic(double c11_pa, double c66_pa, double rho_kgm3) {
  Material m;
  m.rho = rho_kgm3;
  m.stiffness = StiffnessTensor::isotropic(c11_pa, c66_pa);
  return m;
}

void Material::validate(const std::string& name) const {
  if (!(rho > 0.0)) throw ConfigError(name + ".rho must be positive");
  if (stiffness.symmetry_class() != SymmetryClass::full_elastic)
    throw ConfigError(name + ".stiffness must be full-elastic");
  const Mat6 v = stiffness.voigt();
  if ((v - v.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + v.cwiseAbs().maxCoeff()))
    throw ConfigError(name + ".stiffness: Voigt matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat6> es(v);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError(name + ".stiffness is not positive definite");
}

void UnitCell::validate() const {
  matrix.validate("matrix");
  inclusion.validate("inclusion");
  Indicator probe{shape};  // range-checks the shape parameters
  const double det = lattice.determinant();
  if (std::abs(det) < 1e-12 * std::pow(lattice.norm(), 3))
    throw ConfigError("lattice matrix is singular or near-singular");
}

bool UnitCell::is_cubic_lattice() const {
  return (lattice - Mat3d::Identity()).cwiseAbs().maxCoeff() < 1e-14;
}

double UnitCell::volume_fraction() const { return Indicator{shape}.volume(); }

double UnitCell::mean_density() const {
  const double f = volume_fraction();
  return f * inclusion.rho + (1.0 - f) * matrix.rho;
}

void CellField::update_scale() {
  scale_ = std::max(c_mat_.max_abs(), (c_mat_ + c_delta_).max_abs());
  if (!(scale_ > 0.0)) scale_ = 1.0;
}

CellField CellField::from_cell(const UnitCell& cell) {
  cell.validate();
  if (!cell.is_cubic_lattice())
    throw ConfigError("from_cell requires the cubic lattice; use to_cubic_equivalent");
  CellField f;
  f.c_mat_ = cell.matrix.stiffness;
  f.c_delta_ = cell.inclusion.stiffness - cell.matrix.stiffness;
  f.rho_mat_ = cell.matrix.rho;
  f.rho_delta_ = cell.inclusion.rho - cell.matrix.rho;
  f.indicator_ = Indicator{cell.shape};
  f.update_scale();
  return f;
}

CellField CellField::bar_remapped(const Mat3i& a) const {
  const Mat3d b = a.cast<double>().inverse();
  CellField f = *this;
  f.c_mat_ = c_mat_.bar_transform(b);
  f.c_delta_ = c_delta_.bar_transform(b);
  f.density_tensor_ = b * density_tensor_ * b.transpose();
  f.indicator_ = indicator_.remapped(a);
  f.update_scale();
  return f;
}

CellField CellField::tilde_remapped(const Mat3i& a) const {
  const Mat3d b = a.cast<double>().inverse();
  CellField f = *this;
  f.c_mat_ = c_mat_.tilde_transform(b);
  f.c_delta_ = c_delta_.tilde_transform(b);
  f.indicator_ = indicator_.remapped(a);
  f.update_scale();
  return f;
}

Mat3 CellField::mean_block(int j, int l) const {
  return c_mat_.block(j, l) + indicator_.volume() * c_delta_.block(j, l);
}

StiffnessTensor CellField::mean_stiffness() const {
  StiffnessTensor m = c_mat_;
  StiffnessTensor d = c_delta_;
  d *= indicator_.volume();
  m += d;
  return m;
}

BlockSet CellField::fourier3(const Vec3i& g) const {
  const cx chi = indicator_.chi3(g);
  const bool zero = g.isZero();
  BlockSet out;
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) {
      Mat3 m = chi * c_delta_.block(j, l);
      if (zero) m += c_mat_.block(j, l);
      out.jl[j - 1][l - 1] = m;
    }
  return out;
}

BlockSet CellField::fourier2_slice(int axis, const Vec2i& g, double x) const {
  const cx chi = indicator_.chi2(axis, g, x);
  const bool zero = (g[0] == 0 && g[1] == 0);
  BlockSet out;
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) {
      Mat3 m = chi * c_delta_.block(j, l);
      if (zero) m += c_mat_.block(j, l);
      out.jl[j - 1][l - 1] = m;
    }
  return out;
}

Mat3 CellField::section_mean_cll(int axis, double x) const {
  const cx area = indicator_.chi2(axis, Vec2i(0, 0), x);
  return c_mat_.block(axis, axis) + area.real() * c_delta_.block(axis, axis);
}

namespace {

bool integer_lattice(const Mat3d& a, Mat3i& out) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double r = std::round(a(i, j));
      if (std::abs(a(i, j) - r) > 1e-9) return false;
      out(i, j) = static_cast<int>(r);
    }
  return true;
}

}  // namespace

CellField to_cubic_equivalent(const UnitCell& cell, ObliqueFormulation form) {
  cell.validate();
  if (cell.is_cubic_lattice()) return CellField::from_cell(cell);

  UnitCell cubic = cell;
  cubic.lattice = Mat3d::Identity();
  CellField f = CellField::from_cell(cubic);

  const bool homogeneous = std::holds_alternative<Homogeneous>(cell.shape);
  Mat3i aint;
  if (integer_lattice(cell.lattice, aint) && !homogeneous) {
    return form == ObliqueFormulation::cosserat ? f.tilde_remapped(aint) : f.bar_remapped(aint);
  }
  if (!homogeneous)
    throw ConfigError("oblique lattice with non-integer matrix is only supported for homogeneous cells");

  // Homogeneous medium: only the constant tensors transform.
  const Mat3d b = cell.lattice.inverse();
  CellField out = f;
  if (form == ObliqueFormulation::cosserat) {
    out.c_mat_ = f.c_mat().tilde_transform(b);
    out.c_delta_ = f.c_delta().tilde_transform(b);
  } else {
    out.c_mat_ = f.c_mat().bar_transform(b);
    out.c_delta_ = f.c_delta().bar_transform(b);
    out.density_tensor_ = b * b.transpose();
  }
  out.update_scale();
  return out;
}

}  // namespace phonomog
