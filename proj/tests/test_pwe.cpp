#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phonomog/pwe.hpp"

using namespace phonomog;

namespace {

UnitCell steel_epoxy(Shape shape) {
  UnitCell cell;
  cell.matrix = Material::isotropic(7.537e9, 1.482e9, 1142.0);
  cell.inclusion = Material::isotropic(170e9, 80e9, 7700.0);
  cell.shape = std::move(shape);
  return cell;
}

std::array<double, 3> gamma_eigs(const std::array<std::array<Mat3, 3>, 3>& ce, const Vec3d& k) {
  Mat3 g = Mat3::Zero();
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) g += k[j] * k[l] * ce[j][l];
  return oracles::eigs_ascending(g);
}

}  // namespace

TEST_CASE("homogeneous cell: q = 0, block-diagonal C0, exact solve") {
  const CellField f = CellField::from_cell(steel_epoxy(Homogeneous{}));
  const PweSystem sys = PweSystem::assemble(f, 1);
  CHECK(sys.side() == 3 * 26);
  for (int j = 1; j <= 3; ++j) CHECK(sys.q(j).norm() == 0.0);
  // Off-diagonal (g != g') blocks of C0 vanish.
  const auto& modes = sys.modes();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c) CHECK(sys.c0().block<3, 3>(3 * r, 3 * c).norm() == 0.0);
  // Diagonal block: g_k g_p C_kp / scale.
  const Mat3 b00 = sys.c0().block<3, 3>(0, 0);
  Mat3 expect = Mat3::Zero();
  for (int k = 1; k <= 3; ++k)
    for (int p = 1; p <= 3; ++p)
      expect += static_cast<double>(modes[0][k - 1]) * modes[0][p - 1] * f.c_mat().block(k, p) /
                f.stiffness_scale();
  CHECK(oracles::rel_err(b00, expect) <= 1e-14);

  const auto ce = sys.solve();
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l)
      CHECK(oracles::rel_err(ce[j - 1][l - 1], f.c_mat().block(j, l)) <= 1e-12);
}

TEST_CASE("N = 0 is the Voigt average") {
  const CellField f = CellField::from_cell(steel_epoxy(Cube{0.5}));
  const PweSystem sys = PweSystem::assemble(f, 0);
  CHECK(sys.side() == 0);
  const auto ce = sys.solve();
  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) CHECK(oracles::rel_err(ce[j - 1][l - 1], f.mean_block(j, l)) <= 1e-15);

  // Voigt speeds from the paper's constants: sqrt(<c11>/<rho>), sqrt(<c66>/<rho>).
  const auto eig = gamma_eigs(ce, Vec3d(1, 0, 0));
  const double rho = 1961.75;
  const double c11v = 0.125 * 170e9 + 0.875 * 7.537e9;
  const double c66v = 0.125 * 80e9 + 0.875 * 1.482e9;
  CHECK(std::sqrt(eig[2] / rho) == doctest::Approx(std::sqrt(c11v / rho)).epsilon(1e-12));
  CHECK(std::sqrt(eig[0] / rho) == doctest::Approx(std::sqrt(c66v / rho)).epsilon(1e-12));
}

TEST_CASE("f = 1/8 cube at N = 1: C0 Hermitian and positive definite") {
  const CellField f = CellField::from_cell(steel_epoxy(Cube{0.5}));
  const PweSystem sys = PweSystem::assemble(f, 1);
  const MatX& c0 = sys.c0();
  CHECK((c0 - MatX(c0.adjoint())).norm() <= 1e-12 * c0.norm());
  Eigen::LLT<MatX> llt(c0);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("Hermitian family C_jl^e = C_lj^e+") {
  const CellField f = CellField::from_cell(steel_epoxy(Sphere{0.6}));
  const auto ce = PweSystem::assemble(f, 1).solve();
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      CHECK((ce[j][l] - Mat3(ce[l][j].adjoint())).norm() <= 1e-12 * ce[j][l].norm());
}

TEST_CASE("monotone convergence from above in N") {
  const CellField f = CellField::from_cell(steel_epoxy(Cube{0.5}));
  std::array<std::array<double, 3>, 3> eig;
  for (int n = 0; n <= 2; ++n) {
    const auto ce = PweSystem::assemble(f, n).solve();
    eig[n] = gamma_eigs(ce, Vec3d(1, 0, 0));
  }
  for (int n = 0; n < 2; ++n)
    for (int i = 0; i < 3; ++i)
      CHECK(eig[n + 1][i] <= eig[n][i] * (1.0 + 1e-12));
  // Strict improvement from N=0 to N=1 for this cell.
  CHECK(eig[1][2] < eig[0][2] * (1.0 - 1e-4));
}

TEST_CASE("memory guard refuses an oversized truncation") {
  const CellField f = CellField::from_cell(steel_epoxy(Cube{0.5}));
  CHECK_THROWS_AS(PweSystem::assemble(f, 6), ConfigError);  // 3*(13^3-1) > 3993
  PweOptions opts;
  opts.max_side = 50;
  CHECK_THROWS_AS(PweSystem::assemble(f, 1, opts), ConfigError);
}

TEST_CASE("assembly policies agree") {
  const CellField f = CellField::from_cell(steel_epoxy(Spheroid{0.5}));
  PweOptions serial, parallel;
  serial.exec = Exec::serial;
  parallel.exec = Exec::parallel;
  const PweSystem a = PweSystem::assemble(f, 1, serial);
  const PweSystem b = PweSystem::assemble(f, 1, parallel);
  CHECK(a.c0() == b.c0());
  for (int j = 1; j <= 3; ++j) CHECK(a.q(j) == b.q(j));
}
