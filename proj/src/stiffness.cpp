#include "phonomog/stiffness.hpp"

#include <cmath>

#include "phonomog/log.hpp"

namespace phonomog {

namespace {

// Voigt pair map, order 11,22,33,23,13,12.
constexpr int kVoigtPair[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};
constexpr int kPairFirst[6] = {0, 1, 2, 1, 0, 0};
constexpr int kPairSecond[6] = {0, 1, 2, 2, 2, 1};

}  // namespace

StiffnessTensor StiffnessTensor::zero(SymmetryClass sym) {
  StiffnessTensor t;
  t.sym_ = sym;
  return t;
}

StiffnessTensor StiffnessTensor::from_lame(double lambda, double mu) {
  StiffnessTensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = lambda * (i == j) * (k == l) +
                     mu * ((i == k) * (j == l) + (i == l) * (j == k));
          t.at(i, j, k, l) = v;
        }
  return t;
}

StiffnessTensor StiffnessTensor::isotropic(double c11, double c66) {
  return from_lame(c11 - 2.0 * c66, c66);
}

StiffnessTensor StiffnessTensor::from_voigt(const Mat6& v) {
  StiffnessTensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          t.at(i, j, k, l) = v(kVoigtPair[i][j], kVoigtPair[k][l]);
  return t;
}

Mat6 StiffnessTensor::voigt() const {
  if (sym_ != SymmetryClass::full_elastic)
    throw ConfigError("voigt view requires a full-elastic tensor; cosserat-class input violates the minor symmetries");
  Mat6 v;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      v(a, b) = (*this)(kPairFirst[a], kPairSecond[a], kPairFirst[b], kPairSecond[b]);
  return v;
}

Mat3 StiffnessTensor::block(int j, int l) const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m(i, k) = (*this)(i, j - 1, k, l - 1);
  return m;
}

StiffnessTensor StiffnessTensor::tilde_transform(const Mat3d& b) const {
  if (std::abs(b.determinant()) < 1e-12 * std::pow(b.norm(), 3))
    throw ConfigError("tilde_transform: transform matrix is singular");
  StiffnessTensor out = zero(SymmetryClass::cosserat);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) s += b(j, p) * b(l, q) * (*this)(i, p, k, q);
          out.at(i, j, k, l) = s;
        }
  return out;
}

StiffnessTensor StiffnessTensor::bar_transform(const Mat3d& b) const {
  if (std::abs(b.determinant()) < 1e-12 * std::pow(b.norm(), 3))
    throw ConfigError("bar_transform: transform matrix is singular");
  StiffnessTensor out = zero(sym_);
  // Contract one index at a time to keep this O(3^5) per stage.
  std::array<cx, 81> t1{}, t2{}, t3{};
  auto id = [](int i, int j, int k, int l) { return ((i * 3 + j) * 3 + k) * 3 + l; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int m = 0; m < 3; ++m) s += b(i, m) * (*this)(m, j, k, l);
          t1[id(i, j, k, l)] = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int p = 0; p < 3; ++p) s += b(j, p) * t1[id(i, p, k, l)];
          t2[id(i, j, k, l)] = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int n = 0; n < 3; ++n) s += b(k, n) * t2[id(i, j, n, l)];
          t3[id(i, j, k, l)] = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int q = 0; q < 3; ++q) s += b(l, q) * t3[id(i, j, k, q)];
          out.at(i, j, k, l) = s;
        }
  return out;
}

double StiffnessTensor::major_symmetry_residual() const {
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          r = std::max(r, std::abs((*this)(i, j, k, l) - std::conj((*this)(k, l, i, j))));
  return r;
}

double StiffnessTensor::minor_symmetry_residual() const {
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          r = std::max(r, std::abs((*this)(i, j, k, l) - (*this)(j, i, k, l)));
          r = std::max(r, std::abs((*this)(i, j, k, l) - (*this)(i, j, l, k)));
        }
  return r;
}

double StiffnessTensor::max_abs() const {
  double r = 0;
  for (const cx& v : c_) r = std::max(r, std::abs(v));
  return r;
}

bool StiffnessTensor::is_real(double tol) const {
  for (const cx& v : c_)
    if (std::abs(v.imag()) > tol) return false;
  return true;
}

StiffnessTensor& StiffnessTensor::operator+=(const StiffnessTensor& o) {
  for (int n = 0; n < 81; ++n) c_[n] += o.c_[n];
  if (o.sym_ == SymmetryClass::cosserat) sym_ = SymmetryClass::cosserat;
  return *this;
}

StiffnessTensor& StiffnessTensor::operator*=(double s) {
  for (cx& v : c_) v *= s;
  return *this;
}

StiffnessTensor operator-(const StiffnessTensor& a, const StiffnessTensor& b) {
  StiffnessTensor r = a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) r.at(i, j, k, l) -= b(i, j, k, l);
  if (b.symmetry_class() == SymmetryClass::cosserat) r.set_symmetry_class(SymmetryClass::cosserat);
  return r;
}

namespace {

Vec3d checked_direction(const Vec3d& kappa, bool strict) {
  const double n = kappa.norm();
  if (n == 0.0) throw ConfigError("christoffel: zero direction vector");
  if (std::abs(n - 1.0) > 1e-12) {
    if (strict) throw ConfigError("christoffel: non-unit direction in strict mode");
    log_warn("christoffel: normalizing non-unit direction");
    return kappa / n;
  }
  return kappa;
}

}  // namespace

Mat3 christoffel(const StiffnessTensor& c, const Vec3d& kappa, bool strict) {
  const Vec3d k = checked_direction(kappa, strict);
  Mat3 g = Mat3::Zero();
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) g += k[j - 1] * k[l - 1] * c.block(j, l);
  return g;
}

Mat3 christoffel(const DTensor& d, const Vec3d& kappa, bool strict) {
  const Vec3d k = checked_direction(kappa, strict);
  Mat3 g = Mat3::Zero();
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) g += k[j - 1] * k[l - 1] * d.block(j, l);
  return g;
}

DTensor DTensor::from_voigt(const Mat6& v) {
  DTensor d;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          d.at(i, k, j, l) = v(kVoigtPair[i][k], kVoigtPair[j][l]);
  return d;
}

DTensor DTensor::from_ceff(const StiffnessTensor& c) {
  DTensor d;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          d.at(i, k, j, l) = 0.5 * (c(i, j, k, l) + c(i, l, k, j));
  return d;
}

Mat3 DTensor::block(int j, int l) const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m(i, k) = (*this)(i, k, j - 1, l - 1);
  return m;
}

Mat6 DTensor::voigt() const {
  Mat6 v;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      v(a, b) = (*this)(kPairFirst[a], kPairSecond[a], kPairFirst[b], kPairSecond[b]);
  return v;
}

double DTensor::max_abs() const {
  double r = 0;
  for (const cx& v : d_) r = std::max(r, std::abs(v));
  return r;
}

const std::array<Vec3d, 6>& canonical_directions() {
  static const double s = 1.0 / std::sqrt(2.0);
  static const std::array<Vec3d, 6> dirs = {
      Vec3d(1, 0, 0), Vec3d(0, 1, 0), Vec3d(0, 0, 1),
      Vec3d(0, s, s), Vec3d(s, 0, s), Vec3d(s, s, 0)};
  return dirs;
}

DTensor d_from_gammas(std::span<const Mat3> gammas) {
  if (gammas.size() != 6)
    throw ConfigError("d_from_gammas: exactly six Christoffel matrices are required");
  // Rows: Voigt components 11,22,33,23,31,12 of Gamma^(alpha); the combination
  // matrix mixes the diagonal-direction columns back into pure d entries.
  Eigen::Matrix<cx, 6, 6> m;
  for (int a = 0; a < 6; ++a) {
    m(0, a) = gammas[a](0, 0);
    m(1, a) = gammas[a](1, 1);
    m(2, a) = gammas[a](2, 2);
    m(3, a) = gammas[a](1, 2);
    m(4, a) = gammas[a](2, 0);
    m(5, a) = gammas[a](0, 1);
  }
  Eigen::Matrix<double, 6, 6> comb;
  comb << 1, 0, 0, 0, -0.5, -0.5,
          0, 1, 0, -0.5, 0, -0.5,
          0, 0, 1, -0.5, -0.5, 0,
          0, 0, 0, 1, 0, 0,
          0, 0, 0, 0, 1, 0,
          0, 0, 0, 0, 0, 1;
  Mat6 dv = m * comb.cast<cx>();
  return DTensor::from_voigt(dv);
}

DTensor d_from_gammas(const std::array<Mat3, 6>& gammas) {
  return d_from_gammas(std::span<const Mat3>(gammas.data(), 6));
}

StiffnessTensor ceff_from_d(const DTensor& d) {
  const Mat6 dv = d.voigt();
  Mat6 c;
  c(0, 0) = dv(0, 0);
  c(0, 1) = 2.0 * dv(5, 5) - dv(0, 1);
  c(0, 2) = 2.0 * dv(4, 4) - dv(0, 2);
  c(0, 3) = 2.0 * dv(4, 5) - dv(0, 3);
  c(0, 4) = dv(0, 4);
  c(0, 5) = dv(0, 5);
  c(1, 1) = dv(1, 1);
  c(1, 2) = 2.0 * dv(3, 3) - dv(1, 2);
  c(1, 3) = dv(1, 3);
  c(1, 4) = 2.0 * dv(3, 5) - dv(1, 4);
  c(1, 5) = dv(1, 5);
  c(2, 2) = dv(2, 2);
  c(2, 3) = dv(2, 3);
  c(2, 4) = dv(2, 4);
  c(2, 5) = 2.0 * dv(3, 4) - dv(2, 5);
  c(3, 3) = dv(1, 2);
  c(3, 4) = dv(2, 5);
  c(3, 5) = dv(1, 4);
  c(4, 4) = dv(0, 2);
  c(4, 5) = dv(0, 3);
  c(5, 5) = dv(0, 1);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < a; ++b) c(a, b) = std::conj(c(b, a));
  return StiffnessTensor::from_voigt(c);
}

}  // namespace phonomog
