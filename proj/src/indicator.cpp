#include "phonomog/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "phonomog/bessel.hpp"

namespace phonomog {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0 * (1.0 - x * x / 20.0);
  return std::sin(x) / x;
}

/// Centered segment of length s at 1/2: integral of its indicator against
/// e^{-2 pi i g x} over one period.
double segment_ft(int g, double s) {
  if (g == 0) return s;
  double v = s * sinc(pi * g * s);
  return (g % 2 == 0) ? v : -v;
}

/// FT of the unit-ball indicator at radial frequency t = |k| (k = 2 pi g).
double ball_ft(double t) {
  const double u = 2.0 * pi * t;
  if (u < 1e-4) return 4.0 * pi * (1.0 / 3.0 - u * u / 30.0 + u * u * u * u / 840.0);
  return (std::sin(u) - u * std::cos(u)) / (2.0 * pi * pi * t * t * t);
}

/// FT of the unit-disc indicator at radial frequency t = |g|.
double disc_ft(double t) {
  if (t < 1e-12) return pi;
  return bessel_j1(2.0 * pi * t) / t;
}

/// Axis-aligned ellipse centered at (1/2,1/2) with semi-axes pa, pb.
double ellipse_ft(double pa, double pb, int ga, int gb) {
  if (pa <= 0.0 || pb <= 0.0) return 0.0;
  if (ga == 0 && gb == 0) return pi * pa * pb;
  const double t = std::hypot(pa * ga, pb * gb);
  double v = pa * pb * bessel_j1(2.0 * pi * t) / t;
  return ((ga + gb) % 2 == 0) ? v : -v;
}

Mat3i integer_adjugate(const Mat3i& a) {
  Mat3i adj;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r1 = (j + 1) % 3, r2 = (j + 2) % 3;
      const int c1 = (i + 1) % 3, c2 = (i + 2) % 3;
      adj(i, j) = a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1);
    }
  return adj;
}

void transverse_axes(int axis, int& a, int& b) {
  switch (axis) {
    case 1: a = 1; b = 2; break;
    case 2: a = 0; b = 2; break;
    case 3: a = 0; b = 1; break;
    default: throw ConfigError("axis must be 1, 2 or 3");
  }
}

double frac(double x) { return x - std::floor(x); }

/// Convex polygon FT: integral of the indicator against e^{-i k.u}.
cx polygon_ft(const std::vector<Eigen::Vector2d>& v, const Eigen::Vector2d& k) {
  const size_t n = v.size();
  if (n < 3) return 0.0;
  if (k.squaredNorm() == 0.0) {
    double area2 = 0;
    for (size_t i = 0; i < n; ++i) {
      const auto& p = v[i];
      const auto& q = v[(i + 1) % n];
      area2 += p.x() * q.y() - q.x() * p.y();
    }
    return std::abs(area2) * 0.5;
  }
  cx sum = 0;
  const double k2 = k.squaredNorm();
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d d = v[(i + 1) % n] - v[i];
    const Eigen::Vector2d m = 0.5 * (v[(i + 1) % n] + v[i]);
    const double kn = k.x() * d.y() - k.y() * d.x();  // (k . n) |d|, outward for CCW
    if (kn == 0.0) continue;
    sum += cx(0, 1) * (kn / k2) * std::exp(cx(0, -k.dot(m))) * sinc(0.5 * k.dot(d));
  }
  return sum;
}

}  // namespace

void Indicator::init() {
  if (const auto* vx = std::get_if<VoxelGrid>(&base_)) {
    if (vx->m < 1 || vx->inside.size() != static_cast<size_t>(vx->m) * vx->m * vx->m)
      throw ConfigError("voxel grid size does not match m^3");
  }
  auto check01 = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0,1]");
  };
  if (const auto* c = std::get_if<Cube>(&base_)) check01(c->side, "cube side");
  if (const auto* s = std::get_if<Sphere>(&base_)) check01(s->diameter, "sphere diameter");
  if (const auto* s = std::get_if<Spheroid>(&base_)) check01(s->a, "spheroid minor axis");
  build_primitives();
}

Indicator Indicator::remapped(const Mat3i& a) const {
  const int det = static_cast<int>(std::llround(a.cast<double>().determinant()));
  if (det == 0) throw ConfigError("lattice remap matrix is singular");
  Indicator out = *this;
  out.remap_ = remap_ * a;
  out.init();
  return out;
}

void Indicator::build_primitives() {
  prims_.clear();
  sampled_slices_ = false;
  if (std::holds_alternative<Homogeneous>(base_)) return;
  if (std::holds_alternative<VoxelGrid>(base_)) {
    sampled_slices_ = is_remapped();
    return;
  }
  Mat3d lin0;
  bool box = false;
  if (const auto* c = std::get_if<Cube>(&base_)) {
    box = true;
    lin0 = c->side * Mat3d::Identity();
  } else if (const auto* sp = std::get_if<Sphere>(&base_)) {
    lin0 = 0.5 * sp->diameter * Mat3d::Identity();
  } else {
    const auto& se = std::get<Spheroid>(base_);
    lin0 = Vec3d(0.5 * se.a, 0.5, 0.5).asDiagonal();
  }
  const Vec3d c0(0.5, 0.5, 0.5);
  if (!is_remapped()) {
    Primitive p;
    p.box = box;
    p.lin = lin0;
    p.center = c0;
    if (!box && lin0.determinant() != 0.0) p.quad = (lin0 * lin0.transpose()).inverse();
    prims_.push_back(p);
    return;
  }
  const int det = static_cast<int>(std::llround(remap_.cast<double>().determinant()));
  const int adet = std::abs(det);
  const Mat3i adj = integer_adjugate(remap_);
  const Mat3d ainv = remap_.cast<double>().inverse();
  // Coset representatives of Z^3 / (remap Z^3): positions frac(A^-1 t) are
  // keyed exactly by (adj t) mod |det|.
  std::set<std::array<int, 3>> seen;
  for (int t1 = 0; t1 < adet && static_cast<int>(prims_.size()) < adet; ++t1)
    for (int t2 = 0; t2 < adet && static_cast<int>(prims_.size()) < adet; ++t2)
      for (int t3 = 0; t3 < adet && static_cast<int>(prims_.size()) < adet; ++t3) {
        const Vec3i t(t1, t2, t3);
        const Vec3i key3 = adj * t;
        std::array<int, 3> key;
        for (int i = 0; i < 3; ++i) key[i] = ((key3[i] % det) + std::abs(det)) % std::abs(det);
        if (!seen.insert(key).second) continue;
        Primitive p;
        p.box = box;
        p.lin = ainv * lin0;
        p.center = ainv * (c0 + t.cast<double>());
        for (int i = 0; i < 3; ++i) p.center[i] = frac(p.center[i]);
        if (!box && p.lin.determinant() != 0.0) p.quad = (p.lin * p.lin.transpose()).inverse();
        prims_.push_back(p);
      }
}

double Indicator::volume() const {
  if (std::holds_alternative<Homogeneous>(base_)) return 0.0;
  if (const auto* c = std::get_if<Cube>(&base_)) return std::pow(c->side, 3);
  if (const auto* s = std::get_if<Sphere>(&base_)) return pi * std::pow(s->diameter, 3) / 6.0;
  if (const auto* s = std::get_if<Spheroid>(&base_)) return pi * s->a / 6.0;
  const auto& vx = std::get<VoxelGrid>(base_);
  size_t n = 0;
  for (auto v : vx.inside) n += (v != 0);
  return static_cast<double>(n) / (static_cast<double>(vx.m) * vx.m * vx.m);
}

bool Indicator::inside(const Vec3d& xin) const {
  Vec3d x = xin;
  if (is_remapped()) {
    const Vec3d y = remap_.cast<double>() * xin;
    for (int i = 0; i < 3; ++i) x[i] = frac(y[i]);
  }
  if (std::holds_alternative<Homogeneous>(base_)) return false;
  if (const auto* c = std::get_if<Cube>(&base_)) {
    for (int i = 0; i < 3; ++i)
      if (std::abs(x[i] - 0.5) > 0.5 * c->side) return false;
    return true;
  }
  if (const auto* s = std::get_if<Sphere>(&base_))
    return (x - Vec3d(0.5, 0.5, 0.5)).norm() <= 0.5 * s->diameter;
  if (const auto* s = std::get_if<Spheroid>(&base_)) {
    if (s->a <= 0.0) return false;
    const Vec3d d = x - Vec3d(0.5, 0.5, 0.5);
    const double q = std::pow(2.0 * d[0] / s->a, 2) + 4.0 * d[1] * d[1] + 4.0 * d[2] * d[2];
    return q <= 1.0;
  }
  const auto& vx = std::get<VoxelGrid>(base_);
  auto cell = [&](double v) {
    int i = static_cast<int>(std::floor(v * vx.m));
    return std::clamp(i, 0, vx.m - 1);
  };
  const size_t idx = static_cast<size_t>(cell(x[0])) +
                     static_cast<size_t>(vx.m) * (cell(x[1]) + static_cast<size_t>(vx.m) * cell(x[2]));
  return vx.inside[idx] != 0;
}

cx Indicator::chi3_base(const Vec3i& g) const {
  if (std::holds_alternative<Homogeneous>(base_)) return 0.0;
  if (const auto* c = std::get_if<Cube>(&base_))
    return segment_ft(g[0], c->side) * segment_ft(g[1], c->side) * segment_ft(g[2], c->side);
  Vec3d semi;
  if (const auto* s = std::get_if<Sphere>(&base_))
    semi = Vec3d::Constant(0.5 * s->diameter);
  else if (const auto* s = std::get_if<Spheroid>(&base_))
    semi = Vec3d(0.5 * s->a, 0.5, 0.5);
  else {
    const auto& vx = std::get<VoxelGrid>(base_);
    const double m = vx.m;
    cx sum = 0;
    for (int iz = 0; iz < vx.m; ++iz)
      for (int iy = 0; iy < vx.m; ++iy)
        for (int ix = 0; ix < vx.m; ++ix) {
          if (!vx.inside[ix + vx.m * (iy + static_cast<size_t>(vx.m) * iz)]) continue;
          const double phase = -2.0 * pi * (g[0] * (ix + 0.5) + g[1] * (iy + 0.5) + g[2] * (iz + 0.5)) / m;
          sum += std::exp(cx(0, phase));
        }
    const double w = sinc(pi * g[0] / m) * sinc(pi * g[1] / m) * sinc(pi * g[2] / m) / (m * m * m);
    return sum * w;
  }
  const double vol = 4.0 * pi / 3.0 * semi.prod();
  if (g.isZero()) return vol;
  if (semi.prod() == 0.0) return 0.0;
  const double t = Vec3d(semi[0] * g[0], semi[1] * g[1], semi[2] * g[2]).norm();
  double v = semi.prod() * ball_ft(t);
  return ((g[0] + g[1] + g[2]) % 2 == 0) ? v : -v;
}

cx Indicator::chi3(const Vec3i& g) const {
  if (!is_remapped()) return chi3_base(g);
  // chi(x) = chi_base(A x mod 1) resamples the base spectrum: the coefficient
  // at g is chi_base at h = A^-T g when that is integral, zero otherwise.
  const int det = static_cast<int>(std::llround(remap_.cast<double>().determinant()));
  const Mat3i adjT = integer_adjugate(remap_).transpose();
  const Vec3i num = adjT * g;
  Vec3i h;
  for (int i = 0; i < 3; ++i) {
    if (num[i] % det != 0) return 0.0;
    h[i] = num[i] / det;
  }
  return chi3_base(h);
}

cx Indicator::chi2_direct(int axis, const Vec2i& g, double x) const {
  if (std::holds_alternative<Homogeneous>(base_)) return 0.0;
  if (const auto* c = std::get_if<Cube>(&base_)) {
    if (std::abs(2.0 * x - 1.0) > c->side) return 0.0;
    return segment_ft(g[0], c->side) * segment_ft(g[1], c->side);
  }
  if (const auto* s = std::get_if<Sphere>(&base_)) {
    const double r2 = 0.25 * s->diameter * s->diameter - (x - 0.5) * (x - 0.5);
    if (r2 <= 0.0) return 0.0;
    const double r = std::sqrt(r2);
    return ellipse_ft(r, r, g[0], g[1]);
  }
  if (const auto* s = std::get_if<Spheroid>(&base_)) {
    if (s->a <= 0.0) return 0.0;
    if (axis == 1) {
      // Disc of radius R/2 with R^2 = 1 - (2x-1)^2/a^2 (slice of the
      // unit-diameter spheroid); the g = 0 value is the disc area pi R^2/4.
      const double rr = 1.0 - std::pow((2.0 * x - 1.0) / s->a, 2);
      if (rr <= 0.0) return 0.0;
      const double r = 0.5 * std::sqrt(rr);
      return ellipse_ft(r, r, g[0], g[1]);
    }
    const double ss = 1.0 - std::pow(2.0 * x - 1.0, 2);
    if (ss <= 0.0) return 0.0;
    const double s1 = std::sqrt(ss);
    // Transverse axes ascending: for axis 2 or 3 the first one is x1.
    return ellipse_ft(0.5 * s->a * s1, 0.5 * s1, g[0], g[1]);
  }
  const auto& vx = std::get<VoxelGrid>(base_);
  int da, db;
  transverse_axes(axis, da, db);
  const int layer = std::clamp(static_cast<int>(std::floor(x * vx.m)), 0, vx.m - 1);
  const double m = vx.m;
  cx sum = 0;
  for (int ib = 0; ib < vx.m; ++ib)
    for (int ia = 0; ia < vx.m; ++ia) {
      Vec3i iv;
      iv[axis - 1] = layer;
      iv[da] = ia;
      iv[db] = ib;
      if (!vx.inside[iv[0] + vx.m * (iv[1] + static_cast<size_t>(vx.m) * iv[2])]) continue;
      const double phase = -2.0 * pi * (g[0] * (ia + 0.5) + g[1] * (ib + 0.5)) / m;
      sum += std::exp(cx(0, phase));
    }
  return sum * (sinc(pi * g[0] / m) * sinc(pi * g[1] / m) / (m * m));
}

cx Indicator::chi2_primitives(int axis, const Vec2i& g, double x) const {
  int da, db;
  transverse_axes(axis, da, db);
  const int l = axis - 1;
  cx total = 0;
  const Eigen::Vector2d k = 2.0 * pi * Eigen::Vector2d(g[0], g[1]);
  for (const auto& p : prims_) {
    // Extent of the primitive along the slicing axis, for the wrap shifts.
    double ext;
    if (p.box)
      ext = 0.5 * (std::abs(p.lin(l, 0)) + std::abs(p.lin(l, 1)) + std::abs(p.lin(l, 2)));
    else
      ext = std::sqrt((p.lin * p.lin.transpose())(l, l));
    for (int shift = -3; shift <= 3; ++shift) {
      const double tau = x - (p.center[l] + shift);
      if (std::abs(tau) > ext) continue;
      if (p.box) {
        // Polygon cross-section: clip the 12 edges against the plane.
        std::vector<Eigen::Vector2d> pts;
        Vec3d corner[8];
        for (int ci = 0; ci < 8; ++ci) {
          const Vec3d u(((ci & 1) ? 0.5 : -0.5), ((ci & 2) ? 0.5 : -0.5), ((ci & 4) ? 0.5 : -0.5));
          corner[ci] = p.center + p.lin * u;
          corner[ci][l] += shift;
        }
        static const int edges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                         {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
        for (const auto& e : edges) {
          const Vec3d& pa = corner[e[0]];
          const Vec3d& pb = corner[e[1]];
          const double fa = pa[l] - x, fb = pb[l] - x;
          if (fa == 0.0 && fb == 0.0) continue;
          if ((fa < 0 && fb >= 0) || (fb < 0 && fa >= 0)) {
            const double w = fa / (fa - fb);
            const Vec3d q = pa + w * (pb - pa);
            pts.emplace_back(q[da], q[db]);
          }
        }
        if (pts.size() < 3) continue;
        Eigen::Vector2d ctr = Eigen::Vector2d::Zero();
        for (const auto& q : pts) ctr += q;
        ctr /= static_cast<double>(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const auto& u, const auto& v) {
          return std::atan2(u.y() - ctr.y(), u.x() - ctr.x()) <
                 std::atan2(v.y() - ctr.y(), v.x() - ctr.x());
        });
        total += polygon_ft(pts, k);
      } else {
        // Ellipse cross-section from the quadric (u-c)^T Q (u-c) <= 1.
        Eigen::Matrix2d qp;
        qp << p.quad(da, da), p.quad(da, db), p.quad(db, da), p.quad(db, db);
        const Eigen::Vector2d qv(p.quad(da, l), p.quad(db, l));
        const double qll = p.quad(l, l);
        const Eigen::Matrix2d qpi = qp.inverse();
        const double rho2 = 1.0 - tau * tau * (qll - qv.dot(qpi * qv));
        if (rho2 <= 0.0) continue;
        const Eigen::Vector2d center(p.center[da], p.center[db]);
        const Eigen::Vector2d u0 = center - tau * (qpi * qv);
        // FT of {u : (u-u0)^T (qp/rho2) (u-u0) <= 1}.
        const double tsq = (g[0] == 0 && g[1] == 0)
                               ? 0.0
                               : rho2 * Eigen::Vector2d(g[0], g[1]).dot(qpi * Eigen::Vector2d(g[0], g[1]));
        const double detp = qp.determinant() / (rho2 * rho2);
        const double ft = disc_ft(std::sqrt(std::max(0.0, tsq))) / std::sqrt(detp);
        total += std::exp(cx(0, -k.dot(u0))) * ft;
      }
    }
  }
  return total;
}

cx Indicator::chi2(int axis, const Vec2i& g, double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("slice coordinate must lie in [0,1]");
  if (std::holds_alternative<Homogeneous>(base_)) return 0.0;
  if (!is_remapped()) return chi2_direct(axis, g, x);
  if (sampled_slices_) {
    int da, db;
    transverse_axes(axis, da, db);
    const int m = sample_grid_;
    cx sum = 0;
    for (int ib = 0; ib < m; ++ib)
      for (int ia = 0; ia < m; ++ia) {
        Vec3d pt;
        pt[axis - 1] = x;
        pt[da] = static_cast<double>(ia) / m;
        pt[db] = static_cast<double>(ib) / m;
        if (!inside(pt)) continue;
        sum += std::exp(cx(0, -2.0 * pi * (g[0] * pt[da] + g[1] * pt[db])));
      }
    return sum / static_cast<double>(m) / static_cast<double>(m);
  }
  return chi2_primitives(axis, g, x);
}

MatX Indicator::chi2_table(int axis, int K, double x) const {
  const int w = 2 * K + 1;
  MatX table(w, w);
  if (sampled_slices_ && is_remapped()) return chi2_table_sampled(axis, K, x);
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) table(a + K, b + K) = chi2(axis, Vec2i(a, b), x);
  return table;
}

MatX Indicator::chi2_table_sampled(int axis, int K, double x) const {
  int da, db;
  transverse_axes(axis, da, db);
  const int m = sample_grid_;
  const int w = 2 * K + 1;
  Eigen::MatrixXd f(m, m);
  for (int ib = 0; ib < m; ++ib)
    for (int ia = 0; ia < m; ++ia) {
      Vec3d pt;
      pt[axis - 1] = x;
      pt[da] = static_cast<double>(ia) / m;
      pt[db] = static_cast<double>(ib) / m;
      f(ia, ib) = inside(pt) ? 1.0 : 0.0;
    }
  MatX tw(w, m);
  for (int k = -K; k <= K; ++k)
    for (int u = 0; u < m; ++u) tw(k + K, u) = std::exp(cx(0, -2.0 * pi * k * u / static_cast<double>(m)));
  // out(ka+K, kb+K) = (1/m^2) sum_{ia,ib} f(ia,ib) tw(ka,ia) tw(kb,ib)
  return (tw * f.cast<cx>() * tw.transpose()) / (static_cast<double>(m) * m);
}

std::vector<double> Indicator::breakpoints(int axis) const {
  std::vector<double> bp;
  auto add = [&bp](double v) {
    v = frac(v);
    if (v > 1e-12 && v < 1.0 - 1e-12) bp.push_back(v);
  };
  if (std::holds_alternative<Homogeneous>(base_)) return bp;
  if (!is_remapped()) {
    if (const auto* c = std::get_if<Cube>(&base_)) {
      add(0.5 * (1.0 - c->side));
      add(0.5 * (1.0 + c->side));
    } else if (const auto* s = std::get_if<Sphere>(&base_)) {
      add(0.5 * (1.0 - s->diameter));
      add(0.5 * (1.0 + s->diameter));
    } else if (const auto* s = std::get_if<Spheroid>(&base_)) {
      if (axis == 1) {
        add(0.5 * (1.0 - s->a));
        add(0.5 * (1.0 + s->a));
      }
    } else {
      const auto& vx = std::get<VoxelGrid>(base_);
      for (int k = 1; k < vx.m; ++k) bp.push_back(static_cast<double>(k) / vx.m);
    }
  } else if (!sampled_slices_) {
    const int l = axis - 1;
    for (const auto& p : prims_) {
      if (p.box) {
        for (int ci = 0; ci < 8; ++ci) {
          const Vec3d u(((ci & 1) ? 0.5 : -0.5), ((ci & 2) ? 0.5 : -0.5), ((ci & 4) ? 0.5 : -0.5));
          add((p.center + p.lin * u)[l]);
        }
      } else {
        const double ext = std::sqrt((p.lin * p.lin.transpose())(l, l));
        add(p.center[l] - ext);
        add(p.center[l] + ext);
      }
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           bp.end());
  return bp;
}

}  // namespace phonomog
