#include "phonomog/pwe.hpp"

#include <sstream>

#include "phonomog/kernels.hpp"

namespace phonomog {

PweSystem PweSystem::assemble(const CellField& field, int N, const PweOptions& opts) {
  if (N < 0) throw ConfigError("pwe: truncation N must be >= 0");
  const long w = 2L * N + 1;
  const long nmodes = w * w * w - 1;
  if (3 * nmodes > opts.max_side) {
    std::ostringstream os;
    os << "pwe: matrix side " << 3 * nmodes << " exceeds the cap " << opts.max_side
       << " (raise PweOptions::max_side to allow N = " << N << ")";
    throw ConfigError(os.str());
  }

  PweSystem sys;
  sys.n_ = N;
  sys.scale_ = field.stiffness_scale();
  sys.modes_.reserve(nmodes);
  for (int g1 = -N; g1 <= N; ++g1)
    for (int g2 = -N; g2 <= N; ++g2)
      for (int g3 = -N; g3 <= N; ++g3)
        if (g1 || g2 || g3) sys.modes_.emplace_back(g1, g2, g3);

  for (int j = 1; j <= 3; ++j)
    for (int l = 1; l <= 3; ++l) sys.mean_[j - 1][l - 1] = field.mean_block(j, l);

  // Non-dimensional coefficient blocks: Chat_jl(g) = mat_jl delta_g0 + del_jl chi(g).
  Mat3 mat[3][3], del[3][3];
  const double inv_scale = 1.0 / sys.scale_;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      mat[j][l] = inv_scale * field.c_mat().block(j + 1, l + 1);
      del[j][l] = inv_scale * field.c_delta().block(j + 1, l + 1);
    }

  // chi over all mode differences.
  const int K = 2 * N;
  const int kw = 2 * K + 1;
  std::vector<cx> chi(static_cast<size_t>(kw) * kw * kw);
  auto chi_at = [&](int d1, int d2, int d3) -> cx& {
    return chi[((d1 + K) * static_cast<size_t>(kw) + (d2 + K)) * kw + (d3 + K)];
  };
  for (int d1 = -K; d1 <= K; ++d1)
    for (int d2 = -K; d2 <= K; ++d2)
      for (int d3 = -K; d3 <= K; ++d3) chi_at(d1, d2, d3) = field.indicator().chi3(Vec3i(d1, d2, d3));

  const auto& gs = sys.modes_;
  const int m = static_cast<int>(gs.size());

  sys.c0_ = kernels::assemble_blocks(
      m, m,
      [&](int r, int c, Mat3& out) {
        const Vec3i& g = gs[r];
        const Vec3i& gp = gs[c];
        const Vec3i d = g - gp;
        const cx x = chi_at(d[0], d[1], d[2]);
        out.setZero();
        for (int k = 0; k < 3; ++k)
          for (int p = 0; p < 3; ++p) {
            const double gg = static_cast<double>(g[k]) * gp[p];
            if (gg == 0.0) continue;
            out += gg * x * del[k][p];
            if (d.isZero()) out += gg * mat[k][p];
          }
      },
      opts.exec);

  for (int j = 0; j < 3; ++j) {
    sys.q_[j] = kernels::assemble_blocks(
        m, 1,
        [&](int r, int, Mat3& out) {
          const Vec3i& g = gs[r];
          const cx x = chi_at(g[0], g[1], g[2]);
          out.setZero();
          for (int i = 0; i < 3; ++i)
            if (g[i]) out += static_cast<double>(g[i]) * x * del[i][j];
        },
        opts.exec);
  }
  return sys;
}

std::array<std::array<Mat3, 3>, 3> PweSystem::solve() const {
  std::array<std::array<Mat3, 3>, 3> ce;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) ce[j][l] = mean_[j][l];
  if (modes_.empty()) return ce;  // N = 0: C_jl^e = <C_jl>

  Eigen::LDLT<MatX> ldlt(c0_);
  const Eigen::VectorXd d = ldlt.vectorD().real();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double dmin = d.minCoeff();
  if (ldlt.info() != Eigen::Success || !(dmin > 1e-14 * dmax)) {
    std::ostringstream os;
    os << "pwe: C0 factorization failed, smallest pivot " << dmin
       << " (non-positive stiffness field or pathological cell)";
    throw NumericalError(os.str());
  }

  MatX rhs(c0_.rows(), 9);
  rhs << q_[0], q_[1], q_[2];
  const MatX x = ldlt.solve(rhs);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      ce[j][l] -= scale_ * (q_[j].adjoint() * x.middleCols(3 * l, 3));
  return ce;
}

}  // namespace phonomog
