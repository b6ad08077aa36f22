// Test-side oracles, kept independent of the library implementation paths
// they are used to check: plain-loop tensor contractions, quadrature-based
// Fourier coefficients and the integral definition of J1.

#ifndef PHONOMOG_TESTS_ORACLES_HPP
#define PHONOMOG_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "phonomog/stiffness.hpp"
#include "phonomog/types.hpp"

namespace oracles {

using phonomog::cx;
using phonomog::Mat3;
using phonomog::Mat3d;
using phonomog::Mat6;
using phonomog::pi;
using phonomog::StiffnessTensor;
using phonomog::Vec3d;

// ---------------------------------------------------------------- tensors

/// Random real full-elastic positive-definite tensor (GPa scale, in Pa).
inline StiffnessTensor random_elastic(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix<double, 6, 6> a;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a(i, j) = u(rng);
  Eigen::Matrix<double, 6, 6> spd = a * a.transpose() + 6.0 * Eigen::Matrix<double, 6, 6>::Identity();
  Mat6 v = (1e9 * spd).cast<cx>();
  return StiffnessTensor::from_voigt(v);
}

/// Random major-symmetric (possibly complex) tensor without minor symmetry.
inline StiffnessTensor random_major_symmetric(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StiffnessTensor t = StiffnessTensor::zero(phonomog::SymmetryClass::cosserat);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) t.at(i, j, k, l) = cx(u(rng), u(rng));
  StiffnessTensor sym = t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          sym.at(i, j, k, l) = 0.5 * (t(i, j, k, l) + std::conj(t(k, l, i, j)));
  return sym;
}

/// c~_ijkl = b_jp b_lq c_ipkq by direct summation.
inline StiffnessTensor tilde_bruteforce(const StiffnessTensor& c, const Mat3d& b) {
  StiffnessTensor out = StiffnessTensor::zero(phonomog::SymmetryClass::cosserat);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) s += b(j, p) * b(l, q) * c(i, p, k, q);
          out.at(i, j, k, l) = s;
        }
  return out;
}

/// cbar_ijkl = b_im b_jp b_kn b_lq c_mpnq by direct summation.
inline StiffnessTensor bar_bruteforce(const StiffnessTensor& c, const Mat3d& b) {
  StiffnessTensor out = StiffnessTensor::zero(c.symmetry_class());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          cx s = 0;
          for (int m = 0; m < 3; ++m)
            for (int p = 0; p < 3; ++p)
              for (int n = 0; n < 3; ++n)
                for (int q = 0; q < 3; ++q)
                  s += b(i, m) * b(j, p) * b(k, n) * b(l, q) * c(m, p, n, q);
          out.at(i, j, k, l) = s;
        }
  return out;
}

/// Gamma_ik = c_ijkl kappa_j kappa_l by direct summation.
inline Mat3 christoffel_bruteforce(const StiffnessTensor& c, const Vec3d& kappa) {
  Mat3 g = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) g(i, k) += c(i, j, k, l) * kappa[j] * kappa[l];
  return g;
}

/// 3 D^s - 2 D with the total symmetrization d^s_ijkl = (d_ijkl + d_ikjl + d_iljk)/3,
/// reading D as a plain rank-4 array.
inline phonomog::DTensor three_ds_minus_two_d(const phonomog::DTensor& d) {
  phonomog::DTensor out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const cx ds = (d(i, j, k, l) + d(i, k, j, l) + d(i, l, j, k)) / 3.0;
          out.at(i, j, k, l) = 3.0 * ds - 2.0 * d(i, j, k, l);
        }
  return out;
}

// ------------------------------------------------------------- quadrature

/// Gauss-Legendre nodes/weights on [a,b] (Newton on the Legendre recurrence).
inline void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    x[i] = xm - xl * z;
    x[n - 1 - i] = xm + xl * z;
    w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

/// Integral of e^{-2 pi i g.x} over the ellipsoid with the given center and
/// semi-axes, via spherical coordinates (Gauss in r, theta; trapezoid in phi).
inline cx ellipsoid_ft_quad(const Vec3d& center, const Vec3d& semi, const Vec3d& g,
                            int nr = 48, int nt = 48, int np = 64) {
  std::vector<double> xr, wr, xt, wt;
  gauss_legendre(nr, 0.0, 1.0, xr, wr);
  gauss_legendre(nt, 0.0, pi, xt, wt);
  cx sum = 0;
  for (int ir = 0; ir < nr; ++ir)
    for (int it = 0; it < nt; ++it) {
      const double r = xr[ir], th = xt[it];
      cx phi_sum = 0;
      for (int ip = 0; ip < np; ++ip) {
        const double ph = 2.0 * pi * ip / np;
        const Vec3d x = center + Vec3d(semi[0] * r * std::sin(th) * std::cos(ph),
                                       semi[1] * r * std::sin(th) * std::sin(ph),
                                       semi[2] * r * std::cos(th));
        phi_sum += std::exp(cx(0, -2.0 * pi * g.dot(x)));
      }
      sum += wr[ir] * wt[it] * (2.0 * pi / np) * r * r * std::sin(th) * phi_sum;
    }
  return semi.prod() * sum;
}

/// Integral of e^{-2 pi i (ga u + gb v)} over the disc of given center/radius.
inline cx disc_ft_quad(double cu, double cv, double radius, int ga, int gb, int nr = 64,
                       int np = 128) {
  std::vector<double> xr, wr;
  gauss_legendre(nr, 0.0, radius, xr, wr);
  cx sum = 0;
  for (int ir = 0; ir < nr; ++ir) {
    cx phi_sum = 0;
    for (int ip = 0; ip < np; ++ip) {
      const double ph = 2.0 * pi * ip / np;
      const double u = cu + xr[ir] * std::cos(ph);
      const double v = cv + xr[ir] * std::sin(ph);
      phi_sum += std::exp(cx(0, -2.0 * pi * (ga * u + gb * v)));
    }
    sum += wr[ir] * xr[ir] * (2.0 * pi / np) * phi_sum;
  }
  return sum;
}

/// J1 from its integral definition, trapezoid on [0, pi].
inline double j1_quad(double x, int n = 4000) {
  double sum = 0.5 * (std::cos(0.0 - x * std::sin(0.0)) + std::cos(pi - x * std::sin(pi)));
  for (int i = 1; i < n; ++i) {
    const double t = pi * i / n;
    sum += std::cos(t - x * std::sin(t));
  }
  return sum / n;
}

// ------------------------------------------------------------------ misc

inline std::array<double, 3> eigs_ascending(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m);
  return {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
}

inline double rel_err(const Mat3& a, const Mat3& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double tensor_rel_err(const StiffnessTensor& a, const StiffnessTensor& b) {
  return (a - b).max_abs() / std::max(b.max_abs(), 1e-300);
}

}  // namespace oracles

#endif
