#include "phonomog/bounds.hpp"

#include <cmath>

#include "phonomog/log.hpp"

namespace phonomog {

Mat3 voigt_gamma(const CellField& field, const Vec3d& kappa) {
  const Vec3d k = kappa.normalized();
  Mat3 g = Mat3::Zero();
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) g += k[j - 1] * k[l - 1] * field.mean_block(j, l);
  return g;
}

namespace {

Mat3 inv_section(const CellField& field, int axis, double x) {
  const Mat3 s = field.section_mean_cll(axis, x);
  Eigen::PartialPivLU<Mat3> lu(s);
  const Mat3 inv = lu.solve(Mat3::Identity());
  if (!inv.allFinite())
    throw NumericalError("bounds: section average is singular");
  return inv;
}

// Composite Simpson of inv_section over [lo,hi], n even intervals.
Mat3 simpson_piece(const CellField& field, int axis, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  const double eps = 1e-9 * (hi - lo);
  Mat3 acc = inv_section(field, axis, lo + eps) + inv_section(field, axis, hi - eps);
  for (int i = 1; i < n; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    acc += w * inv_section(field, axis, lo + i * h);
  }
  return (h / 3.0) * acc;
}

}  // namespace

Mat3 mm_zero_cll(const CellField& field, int axis, double tol) {
  std::vector<double> cuts{0.0};
  for (double b : field.indicator().breakpoints(axis)) cuts.push_back(b);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());

  Mat3 total = Mat3::Zero();
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo <= 1e-12) continue;
    int n = 16;
    Mat3 prev = simpson_piece(field, axis, lo, hi, n);
    for (int it = 0; it < 14; ++it) {
      n *= 2;
      const Mat3 cur = simpson_piece(field, axis, lo, hi, n);
      const double change = (cur - prev).norm() / std::max(cur.norm(), 1e-300);
      prev = cur;
      if (change <= tol) break;
      if (it == 13) log_warn("bounds: section quadrature did not reach tolerance");
    }
    total += prev;
  }
  const Mat3 s2 = total.partialPivLu().solve(Mat3::Identity());
  // Positive definiteness of the averaged inverse is inherited from the
  // sections; verify before handing the bound out.
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (s2 + Mat3(s2.adjoint())));
  if (!(es.eigenvalues().minCoeff() > 0))
    throw NumericalError("bounds: averaged section inverse is not positive definite");
  return s2;
}

Mat3 gamma_bound(const CellField& field, const Vec3d& kappa, int axis, double tol) {
  const Vec3d k = kappa.normalized();
  if (axis == 0) {
    Eigen::Index imax = 0;
    k.cwiseAbs().maxCoeff(&imax);
    axis = static_cast<int>(imax) + 1;
  }
  Mat3 g = Mat3::Zero();
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) {
      if (j == axis && l == axis) continue;
      g += k[j - 1] * k[l - 1] * field.mean_block(j, l);
    }
  g += k[axis - 1] * k[axis - 1] * mm_zero_cll(field, axis, tol);
  return g;
}

std::array<double, 3> gamma_speeds(const Mat3& gamma, double mean_rho) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(gamma);
  std::array<double, 3> out;
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    double lam = es.eigenvalues()[i];
    if (lam < -1e-10 * scale)
      throw NumericalError("speeds: Christoffel matrix has a negative eigenvalue");
    out[i] = std::sqrt(std::max(lam, 0.0) / mean_rho);
  }
  return out;
}

namespace {

struct IsoModuli {
  double k, g;
};

IsoModuli iso_moduli(const StiffnessTensor& c, const char* name) {
  const double c11 = c(0, 0, 0, 0).real();
  const double c66 = c(0, 1, 0, 1).real();
  const StiffnessTensor iso = StiffnessTensor::isotropic(c11, c66);
  if ((c - iso).max_abs() > 1e-9 * c.max_abs())
    throw ConfigError(std::string("hashin_shtrikman: ") + name + " phase is not isotropic");
  return {c11 - 4.0 * c66 / 3.0, c66};
}

double hs_k(double k1, double g1, double k2, double f1, double f2) {
  // Reference phase 1; the bound is attained as f2 -> 0.
  if (std::abs(k2 - k1) < 1e-300) return k1;
  return k1 + f2 / (1.0 / (k2 - k1) + 3.0 * f1 / (3.0 * k1 + 4.0 * g1));
}

double hs_g(double k1, double g1, double g2, double f1, double f2) {
  if (std::abs(g2 - g1) < 1e-300) return g1;
  const double zeta = 6.0 * (k1 + 2.0 * g1) / (5.0 * g1 * (3.0 * k1 + 4.0 * g1));
  return g1 + f2 / (1.0 / (g2 - g1) + f1 * zeta);
}

}  // namespace

HsBounds hashin_shtrikman(const UnitCell& cell) {
  cell.validate();
  const IsoModuli mat = iso_moduli(cell.matrix.stiffness, "matrix");
  const IsoModuli inc = iso_moduli(cell.inclusion.stiffness, "inclusion");
  const double f = cell.volume_fraction();

  // Soft phase as reference gives the lower bound, stiff phase the upper.
  const bool mat_soft = mat.k + mat.g <= inc.k + inc.g;
  const IsoModuli& soft = mat_soft ? mat : inc;
  const IsoModuli& stiff = mat_soft ? inc : mat;
  const double f_soft = mat_soft ? 1.0 - f : f;
  const double f_stiff = 1.0 - f_soft;

  HsBounds b{};
  b.k_low = hs_k(soft.k, soft.g, stiff.k, f_soft, f_stiff);
  b.k_high = hs_k(stiff.k, stiff.g, soft.k, f_stiff, f_soft);
  b.g_low = hs_g(soft.k, soft.g, stiff.g, f_soft, f_stiff);
  b.g_high = hs_g(stiff.k, stiff.g, soft.g, f_stiff, f_soft);

  const double rho = cell.mean_density();
  b.cl_low = std::sqrt((b.k_low + 4.0 * b.g_low / 3.0) / rho);
  b.cl_high = std::sqrt((b.k_high + 4.0 * b.g_high / 3.0) / rho);
  b.ct_low = std::sqrt(b.g_low / rho);
  b.ct_high = std::sqrt(b.g_high / rho);
  return b;
}

}  // namespace phonomog
