#ifndef PHONOMOG_INDICATOR_HPP
#define PHONOMOG_INDICATOR_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "phonomog/types.hpp"

namespace phonomog {

// Inclusion geometry on the unit cell. Shapes are centered at (1/2,1/2,1/2)
// and must fit inside [0,1]^3.
struct Homogeneous {};
struct Cube {
  double side = 0.5;
};
struct Sphere {
  double diameter = 0.5;
};
/// Spheroid with minor axis a along x1 and unit major axes (semi-axes
/// a/2, 1/2, 1/2); a = 1 is the inscribed ball, a = 0 a zero-measure disk.
struct Spheroid {
  double a = 0.5;
};
/// m^3 boolean grid, true = inclusion material. Index (ix,iy,iz) with x
/// fastest: ix + m*(iy + m*iz); voxel (ix,..) covers [ix/m,(ix+1)/m) etc.
struct VoxelGrid {
  int m = 1;
  std::vector<std::uint8_t> inside;
};

using Shape = std::variant<Homogeneous, Cube, Sphere, Spheroid, VoxelGrid>;

/// Two-phase indicator field chi(x) on the unit torus, optionally remapped by
/// an integer lattice matrix: chi(x) = chi_base(A x mod 1). Exposes exact 3D
/// and per-slice 2D Fourier coefficients. For remapped analytic shapes the
/// slice coefficients come from a decomposition into |det A| ellipsoid or box
/// primitives (ellipse / polygon cross-section transforms); a remapped voxel
/// grid falls back to a sampled transform on a sample_grid^2 mesh.
class Indicator {
 public:
  Indicator() : base_(Homogeneous{}) { init(); }
  explicit Indicator(Shape base) : base_(std::move(base)) { init(); }

  /// chi'(x) = chi(a x mod 1); a integer and invertible. Remaps compose.
  Indicator remapped(const Mat3i& a) const;

  const Shape& base() const { return base_; }
  const Mat3i& remap() const { return remap_; }
  bool is_remapped() const { return remap_ != Mat3i::Identity(); }
  bool uses_sampled_slices() const { return sampled_slices_; }

  /// Inclusion volume (= volume fraction of the unit cell).
  double volume() const;

  bool inside(const Vec3d& x) const;

  /// 3D coefficient of the indicator: integral of chi(x) e^{-2 pi i g.x}.
  cx chi3(const Vec3i& g) const;

  /// 2D slice coefficient at x_axis = x; g indexes the two transverse axes
  /// in increasing order (axis 1 -> (2,3), axis 2 -> (1,3), axis 3 -> (1,2)).
  cx chi2(int axis, const Vec2i& g, double x) const;

  /// Dense table of chi2 over g in [-K,K]^2; entry (ga+K, gb+K).
  MatX chi2_table(int axis, int K, double x) const;

  /// Interior x_axis positions where slice coefficients jump or kink
  /// (material interfaces); used to align integration steps.
  std::vector<double> breakpoints(int axis) const;

  /// Mesh used by the sampled-slice fallback (remapped voxel grids).
  void set_sample_grid(int m) { sample_grid_ = m < 8 ? 8 : m; }
  int sample_grid() const { return sample_grid_; }

 private:
  struct Primitive {
    bool box = false;  // box: image of [-1/2,1/2]^3, else image of unit ball
    Mat3d lin = Mat3d::Identity();
    Vec3d center = Vec3d::Zero();
    Mat3d quad = Mat3d::Identity();  // (lin lin^T)^-1, ellipsoids only
  };

  void init();
  void build_primitives();
  cx chi3_base(const Vec3i& g) const;
  cx chi2_direct(int axis, const Vec2i& g, double x) const;
  cx chi2_primitives(int axis, const Vec2i& g, double x) const;
  MatX chi2_table_sampled(int axis, int K, double x) const;

  Shape base_;
  Mat3i remap_ = Mat3i::Identity();
  int sample_grid_ = 64;
  bool sampled_slices_ = false;
  std::vector<Primitive> prims_;
};

}  // namespace phonomog

#endif
