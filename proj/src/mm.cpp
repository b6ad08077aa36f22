#include "phonomog/mm.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phonomog/kernels.hpp"
#include "phonomog/log.hpp"

namespace phonomog {

namespace {

void transverse(int axis, int& a, int& b) {
  switch (axis) {
    case 1: a = 2; b = 3; break;
    case 2: a = 1; b = 3; break;
    case 3: a = 1; b = 2; break;
    default: throw ConfigError("mm: axis must be 1, 2 or 3");
  }
}

// Integration grid aligned with the material interfaces. Coefficients are
// discontinuous across interfaces; aligning the pieces keeps RK4 at its
// nominal order. Per-piece step counts are even so a Simpson rule can reuse
// the same grid.
struct Piece {
  double lo, hi;
  int steps;
};

std::vector<Piece> make_pieces(const std::vector<double>& breakpoints, int steps) {
  std::vector<double> cuts{0.0};
  for (double b : breakpoints)
    if (b > 1e-12 && b < 1.0 - 1e-12) cuts.push_back(b);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> pieces;
  if (cuts.size() > 66) {
    // Too many interfaces to align (finely sampled geometry): uniform grid.
    int n = std::max(2, steps);
    pieces.push_back({0.0, 1.0, n + (n & 1)});
    return pieces;
  }
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 1e-12) continue;
    // Power-of-two per-piece counts so that doubling `steps` exactly doubles
    // every piece (nested grids; clean step-halving estimates).
    const double want = std::max(2.0, steps * len);
    const int n = 1 << std::max(1, static_cast<int>(std::ceil(std::log2(want))));
    pieces.push_back({cuts[i], cuts[i + 1], n});
  }
  return pieces;
}

// Keeps stage abscissae strictly inside the current smooth piece so the
// coefficients are read on the correct side of each interface.
inline double clamp_into(double x, double lo, double hi) {
  const double eps = 1e-12;
  return std::min(std::max(x, lo + eps), hi - eps);
}

}  // namespace

MmSystem::MmSystem(const CellField& field, int axis, int N) : field_(&field), axis_(axis), n_(N) {
  if (N < 0) throw ConfigError("mm: truncation N must be >= 0");
  transverse(axis, ta_, tb_);
  modes_.reserve(static_cast<size_t>(2 * N + 1) * (2 * N + 1));
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b) modes_.emplace_back(a, b);
  breakpoints_ = field.indicator().breakpoints(axis);
  const double inv_scale = 1.0 / field.stiffness_scale();
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      mat_[j][l] = inv_scale * field.c_mat().block(j + 1, l + 1);
      del_[j][l] = inv_scale * field.c_delta().block(j + 1, l + 1);
    }
}

MmSystem::Slice MmSystem::assemble(double x, Exec exec) const {
  const int K = 2 * n_;
  const MatX chi = field_->indicator().chi2_table(axis_, K, x);
  auto coeff = [&](int j, int l, const Vec2i& d) -> Mat3 {
    Mat3 m = chi(d[0] + K, d[1] + K) * del_[j - 1][l - 1];
    if (d[0] == 0 && d[1] == 0) m += mat_[j - 1][l - 1];
    return m;
  };

  const int m = n_modes();
  Slice s;
  MatX b = kernels::assemble_blocks(
      m, m, [&](int r, int c, Mat3& out) { out = coeff(axis_, axis_, modes_[r] - modes_[c]); },
      exec);
  s.a1 = kernels::assemble_blocks(
      m, m,
      [&](int r, int c, Mat3& out) {
        const Vec2i d = modes_[r] - modes_[c];
        const Vec2i& gp = modes_[c];
        out = cx(0, 2.0 * pi) * (static_cast<double>(gp[0]) * coeff(axis_, ta_, d) +
                                 static_cast<double>(gp[1]) * coeff(axis_, tb_, d));
      },
      exec);
  s.a2 = kernels::assemble_blocks(
      m, m,
      [&](int r, int c, Mat3& out) {
        const Vec2i d = modes_[r] - modes_[c];
        const Vec2i& g = modes_[r];
        const Vec2i& gp = modes_[c];
        out.setZero();
        const double w = 4.0 * pi * pi;
        if (g[0] && gp[0]) out += (w * g[0] * gp[0]) * coeff(ta_, ta_, d);
        if (g[0] && gp[1]) out += (w * g[0] * gp[1]) * coeff(ta_, tb_, d);
        if (g[1] && gp[0]) out += (w * g[1] * gp[0]) * coeff(tb_, ta_, d);
        if (g[1] && gp[1]) out += (w * g[1] * gp[1]) * coeff(tb_, tb_, d);
      },
      exec);
  s.bllt.compute(b);
  if (s.bllt.info() != Eigen::Success)
    throw NumericalError("mm: transverse operator B is not positive definite (non-physical material?)");
  s.b = std::move(b);
  return s;
}

void MmSystem::apply_q0(const Slice& s, const MatX& in, MatX& out, Exec exec) const {
  const int h = 3 * n_modes();
  const auto xu = in.topRows(h);
  const auto xt = in.bottomRows(h);
  MatX a1xu = kernels::multiply(s.a1, xu, exec);
  MatX top = s.bllt.solve(xt - a1xu);
  out.resize(in.rows(), in.cols());
  out.topRows(h) = top;
  MatX bottom = kernels::multiply(s.a2, xu, exec);
  kernels::multiply_add(bottom, s.a1.adjoint(), top, exec);
  out.bottomRows(h) = bottom;
}

MatX MmSystem::q0_dense(double x) const {
  const Slice s = assemble(x, Exec::serial);
  const int h = 3 * n_modes();
  const MatX binv = s.bllt.solve(MatX::Identity(h, h));
  MatX q(2 * h, 2 * h);
  q.topLeftCorner(h, h) = -binv * s.a1;
  q.topRightCorner(h, h) = binv;
  q.bottomLeftCorner(h, h) = s.a2 - s.a1.adjoint() * binv * s.a1;
  q.bottomRightCorner(h, h) = s.a1.adjoint() * binv;
  return q;
}

MatX integrate_resolvent(const MmSystem& sys, cx alpha, int steps, Exec exec) {
  if (steps < 1) throw ConfigError("mm: steps must be >= 1");
  if (alpha == cx(1.0, 0.0)) throw ConfigError("mm: alpha = 1 is excluded");
  const int side = sys.side();
  MatX r = MatX::Identity(side, side) / (1.0 - alpha);
  const double norm0 = r.norm();

  const auto pieces = make_pieces(sys.breakpoints(), steps);
  MatX w, y, k1, k2, k3, k4, rs;

  auto rhs = [&](const MmSystem::Slice& slice, const MatX& rcur, MatX& out) {
    w = rcur * alpha;
    w.diagonal().array() += 1.0;
    sys.apply_q0(slice, w, y, exec);
    kernels::multiply_into(out, rcur, y, exec);
    out = -out;
  };

  for (const auto& piece : pieces) {
    const double h = (piece.hi - piece.lo) / piece.steps;
    MmSystem::Slice s_lo = sys.assemble(clamp_into(piece.lo, piece.lo, piece.hi), exec);
    for (int i = 0; i < piece.steps; ++i) {
      const double x0 = piece.lo + i * h;
      MmSystem::Slice s_mid = sys.assemble(clamp_into(x0 + 0.5 * h, piece.lo, piece.hi), exec);
      MmSystem::Slice s_hi = sys.assemble(clamp_into(x0 + h, piece.lo, piece.hi), exec);

      rhs(s_lo, r, k1);
      rs = r + (0.5 * h) * k1;
      rhs(s_mid, rs, k2);
      rs = r + (0.5 * h) * k2;
      rhs(s_mid, rs, k3);
      rs = r + h * k3;
      rhs(s_hi, rs, k4);
      r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      if (!(r.norm() < 1e12 * norm0) || !r.allFinite())
        throw NumericalError("mm: resolvent integration diverged (alpha close to an eigenvalue trajectory)");
      s_lo = std::move(s_hi);
    }
  }
  return r;
}

MatX monodromy_direct(const MmSystem& sys, int substeps) {
  if (substeps < 1) throw ConfigError("mm: substeps must be >= 1");
  const int side = sys.side();
  MatX m = MatX::Identity(side, side);
  const auto pieces = make_pieces(sys.breakpoints(), substeps);
  for (const auto& piece : pieces) {
    const double h = (piece.hi - piece.lo) / piece.steps;
    for (int i = 0; i < piece.steps; ++i) {
      const double xm = clamp_into(piece.lo + (i + 0.5) * h, piece.lo, piece.hi);
      const MatX q = sys.q0_dense(xm);
      m = (h * q).exp() * m;
      if (!m.allFinite())
        throw NumericalError("mm: direct monodromy overflowed; use the resolvent path");
    }
  }
  return m;
}

namespace {

struct PrunedT {
  MatX t;
  int h;                  // 3 n_modes
  int z;                  // first pruned row/column (g = 0 block)
  std::vector<int> kept;  // kept displacement-column indices
  double residual;
};

PrunedT build_t(const MmSystem& sys, const MatX& r1, cx alpha) {
  PrunedT p;
  p.h = 3 * sys.n_modes();
  p.z = 3 * sys.zero_index();
  p.t = (alpha - 1.0) * r1;
  p.t.diagonal().array() += 1.0;
  p.t *= (1.0 - alpha);
  const double tnorm = p.t.norm();
  const double rc = p.t.middleCols(p.z, 3).norm();
  const double rr = p.t.middleRows(p.h + p.z, 3).norm();
  p.residual = (tnorm > 0) ? std::max(rc, rr) / tnorm : 0.0;
  p.kept.reserve(p.h - 3);
  for (int c = 0; c < p.h; ++c)
    if (c < p.z || c >= p.z + 3) p.kept.push_back(c);
  return p;
}

struct SchurParts {
  MatX schur;                      // T2 - T1 T3^-1 T4
  Eigen::PartialPivLU<MatX> lu3;   // factor of T3
  MatX t4;
  bool trivial = false;            // N = 0: no kept columns
};

SchurParts schur_reduce(const PrunedT& p) {
  SchurParts out;
  const int h = p.h;
  const int hk = h - 3;
  if (hk == 0) {
    out.schur = p.t.topRightCorner(h, h);
    out.trivial = true;
    return out;
  }
  MatX t1(h, hk), t3(hk, hk);
  out.t4.resize(hk, h);
  for (int c = 0; c < hk; ++c) t1.col(c) = p.t.col(p.kept[c]).head(h);
  for (int r = 0; r < hk; ++r) {
    for (int c = 0; c < hk; ++c) t3(r, c) = p.t(h + p.kept[r], p.kept[c]);
    out.t4.row(r) = p.t.row(h + p.kept[r]).tail(h);
  }
  out.lu3.compute(t3);
  const auto du = out.lu3.matrixLU().diagonal().cwiseAbs();
  if (!(du.minCoeff() > 1e-14 * du.maxCoeff()))
    throw NumericalError("mm: Schur block T3 is numerically singular");
  out.schur = p.t.topRightCorner(h, h) - t1 * out.lu3.solve(out.t4);
  return out;
}

}  // namespace

Mat3 extract_cll_eff(const MmSystem& sys, const MatX& r1, cx alpha, MmDiagnostics* diag,
                     double prune_tol, double hermitize_tol) {
  PrunedT p = build_t(sys, r1, alpha);
  if (diag) diag->prune_residual = p.residual;
  if (p.residual > prune_tol) {
    std::ostringstream os;
    os << "mm: pruning residual " << p.residual << " exceeds " << prune_tol
       << "; increase the RK4 step count";
    throw NumericalError(os.str());
  }
  SchurParts sp = schur_reduce(p);

  MatX e0 = MatX::Zero(p.h, 3);
  e0.middleRows(p.z, 3) = Mat3::Identity();
  const MatX x2 = sp.schur.partialPivLu().solve(e0);
  Mat3 c = sys.scale() * x2.middleRows(p.z, 3);

  const double skew = (c - Mat3(c.adjoint())).norm() / std::max(c.norm(), 1e-300);
  if (diag) diag->skew = skew;
  if (skew > hermitize_tol) {
    std::ostringstream os;
    os << "mm: C_ll^eff skew part " << skew << " exceeds " << hermitize_tol
       << "; increase the RK4 step count";
    throw NumericalError(os.str());
  }
  return 0.5 * (c + Mat3(c.adjoint()));
}

MatX mm_solution_matrix(const MmSystem& sys, const MatX& r1, cx alpha, double prune_tol) {
  PrunedT p = build_t(sys, r1, alpha);
  if (p.residual > prune_tol)
    throw NumericalError("mm: pruning residual too large for the solution matrix");
  SchurParts sp = schur_reduce(p);

  MatX e0 = MatX::Zero(p.h, 3);
  e0.middleRows(p.z, 3) = Mat3::Identity();
  const MatX x2 = sp.schur.partialPivLu().solve(e0);

  MatX s = MatX::Zero(2 * p.h, 3);
  s.bottomRows(p.h) = x2;
  if (!sp.trivial) {
    const MatX x1 = -sp.lu3.solve(sp.t4 * x2);
    for (size_t r = 0; r < p.kept.size(); ++r) s.row(p.kept[r]) = x1.row(r);
  }
  return s;
}

void propagate_mm_solution(const MmSystem& sys, const MatX& s0, int steps,
                           const std::function<void(double, const MatX&)>& cb, Exec exec) {
  MatX y = s0;
  cb(0.0, y);
  const auto pieces = make_pieces(sys.breakpoints(), steps);
  MatX k1, k2, k3, k4, ys;
  for (const auto& piece : pieces) {
    const double h = (piece.hi - piece.lo) / piece.steps;
    MmSystem::Slice s_lo = sys.assemble(clamp_into(piece.lo, piece.lo, piece.hi), exec);
    for (int i = 0; i < piece.steps; ++i) {
      const double x0 = piece.lo + i * h;
      MmSystem::Slice s_mid = sys.assemble(clamp_into(x0 + 0.5 * h, piece.lo, piece.hi), exec);
      MmSystem::Slice s_hi = sys.assemble(clamp_into(x0 + h, piece.lo, piece.hi), exec);
      sys.apply_q0(s_lo, y, k1, exec);
      ys = y + (0.5 * h) * k1;
      sys.apply_q0(s_mid, ys, k2, exec);
      ys = y + (0.5 * h) * k2;
      sys.apply_q0(s_mid, ys, k3, exec);
      ys = y + h * k3;
      sys.apply_q0(s_hi, ys, k4, exec);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      cb(x0 + h, y);
      s_lo = std::move(s_hi);
    }
  }
}

Mat3 mm_cll_eff(const CellField& field, int axis, int N, const MmOptions& opts, MmDiagnostics* diag) {
  MmSystem sys(field, axis, N);
  std::vector<cx> alphas{opts.alpha};
  alphas.insert(alphas.end(), opts.alpha_fallbacks.begin(), opts.alpha_fallbacks.end());

  auto fill_diag = [&](const MmDiagnostics& d) {
    if (diag) *diag = d;
  };

  std::string last_error = "mm: no alpha candidate succeeded";
  for (size_t ai = 0; ai < alphas.size(); ++ai) {
    const cx alpha = alphas[ai];
    MmDiagnostics d;
    d.alpha_used = alpha;
    d.alpha_redraws = static_cast<int>(ai);
    try {
      if (!opts.adaptive) {
        const MatX r = integrate_resolvent(sys, alpha, opts.steps, opts.exec);
        const Mat3 c = extract_cll_eff(sys, r, alpha, &d, opts.prune_tol, opts.hermitize_tol);
        d.steps_used = opts.steps;
        fill_diag(d);
        return c;
      }
      // Adaptive: the pruning residual and the skew of C_ll^eff shrink with
      // the step count, so quality failures double the grid; alpha is only
      // re-drawn on divergence or singular factorizations.
      int steps = opts.steps;
      Mat3 c;
      bool have_c = false;
      double gap = -1.0;
      while (true) {
        const MatX r = integrate_resolvent(sys, alpha, steps, opts.exec);
        const Mat3 c2 = extract_cll_eff(sys, r, alpha, &d, 1e30, 1e30);
        const bool quality_ok = d.prune_residual <= opts.prune_tol && d.skew <= opts.hermitize_tol;
        if (quality_ok) {
          if (have_c) gap = (c2 - c).norm() / std::max(c2.norm(), 1e-300);
          c = c2;
          have_c = true;
          if (gap >= 0.0 && gap <= opts.cauchy_tol) {
            d.steps_used = steps;
            d.cauchy_gap = gap;
            fill_diag(d);
            return c;
          }
        }
        if (2 * steps > opts.max_steps) {
          if (have_c) {
            log_warn("mm: step doubling hit the cap before reaching the Cauchy tolerance");
            d.steps_used = steps;
            d.cauchy_gap = gap < 0 ? 1.0 : gap;
            fill_diag(d);
            return c;
          }
          last_error = "mm: quality tolerances not met at the step cap";
          break;
        }
        steps *= 2;
      }
    } catch (const NumericalError& e) {
      last_error = e.what();
      log_warn(std::string("mm: re-drawing alpha after failure: ") + e.what());
    }
  }
  throw NumericalError(last_error);
}

const std::array<Mat3i, 3>& rotation_lattices() {
  static const std::array<Mat3i, 3> mats = [] {
    std::array<Mat3i, 3> m;
    m[0] << 1, 0, 0, 0, 1, -1, 0, 1, 1;
    m[1] << 1, 0, 1, 0, 1, 0, -1, 0, 1;
    m[2] << 1, -1, 0, 1, 1, 0, 0, 0, 1;
    return m;
  }();
  return mats;
}

std::array<Mat3, 3> rotated_principal_runs(const CellField& field, int N, const MmOptions& opts,
                                           std::array<MmDiagnostics, 3>* diags) {
  const auto& aks = rotation_lattices();
  static const int run_axis[3] = {2, 3, 1};
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k) {
    const CellField remapped = field.bar_remapped(aks[k]);
    MmDiagnostics d;
    const Mat3 cbar = mm_cll_eff(remapped, run_axis[k], N, opts, &d);
    const Mat3d a = aks[k].cast<double>();
    gamma[k] = 2.0 * a * cbar * a.transpose();
    if (diags) (*diags)[k] = d;
  }
  return gamma;
}

Mat3 direct_offdiagonal(const CellField& field, int j, int l, int N, const MmOptions& opts) {
  if (j < 1 || j > 3 || l < 1 || l > 3) throw ConfigError("mm: indices must be in 1..3");
  MmSystem sys(field, l, N);
  if (static_cast<long>(N) * (2 * N + 1) * (2 * N + 1) > 200)
    log_warn("mm: direct off-diagonal evaluation may be inaccurate at this truncation");

  const cx alpha = opts.alpha;
  const MatX r1 = integrate_resolvent(sys, alpha, opts.steps, opts.exec);
  const MatX s0 = mm_solution_matrix(sys, r1, alpha, opts.prune_tol);

  const int n = sys.n_modes();
  const int h = 3 * n;
  int ta, tb;
  transverse(l, ta, tb);
  std::vector<Vec2i> modes;
  modes.reserve(n);
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b) modes.emplace_back(a, b);
  const double inv_scale = 1.0 / field.stiffness_scale();

  // Composite-Simpson nodes on the propagation grid (pieces have even step
  // counts). The callback sequence is: x = 0, then every step endpoint in
  // order; a piece boundary carries the closing weight of one piece and the
  // opening weight of the next, evaluated on their respective sides.
  struct Node {
    double eval_x;
    double weight;
  };
  std::vector<std::vector<Node>> per_call;
  const auto pieces = make_pieces(sys.breakpoints(), opts.steps);
  const double delta = 1e-9;
  {
    per_call.emplace_back();  // x = 0
    auto weight = [](const Piece& p, int s) {
      const double hh = (p.hi - p.lo) / p.steps;
      if (s == 0 || s == p.steps) return hh / 3.0;
      return (s % 2 == 1) ? 4.0 * hh / 3.0 : 2.0 * hh / 3.0;
    };
    per_call.back().push_back({pieces.front().lo + delta, weight(pieces.front(), 0)});
    for (size_t pi = 0; pi < pieces.size(); ++pi) {
      const Piece& p = pieces[pi];
      for (int s = 1; s <= p.steps; ++s) {
        per_call.emplace_back();
        const double x = p.lo + s * ((p.hi - p.lo) / p.steps);
        per_call.back().push_back({s == p.steps ? x - delta : x, weight(p, s)});
        if (s == p.steps && pi + 1 < pieces.size())
          per_call.back().push_back({x + delta, weight(pieces[pi + 1], 0)});
      }
    }
  }

  Mat3 acc = Mat3::Zero();
  size_t call_idx = 0;
  const int z = 3 * sys.zero_index();
  auto integrand = [&](double ex, const MatX& y) -> Mat3 {
    const int K = 2 * N;
    const MatX chi = field.indicator().chi2_table(l, K, ex);
    auto coeff = [&](int p, int q, const Vec2i& d) -> Mat3 {
      Mat3 m = (chi(d[0] + K, d[1] + K) * inv_scale) * field.c_delta().block(p, q);
      if (d[0] == 0 && d[1] == 0) m += inv_scale * field.c_mat().block(p, q);
      return m;
    };
    const MmSystem::Slice slice = sys.assemble(ex, opts.exec);
    const MatX v = y.topRows(h);
    const MatX nh = y.bottomRows(h);
    const MatX dv = slice.bllt.solve(nh - slice.a1 * v);
    Mat3 row = Mat3::Zero();
    for (int c = 0; c < n; ++c) {
      const Vec2i d = modes[z / 3] - modes[c];
      const Vec2i& gp = modes[c];
      const Mat3 a1j = cx(0, 2.0 * pi) * (static_cast<double>(gp[0]) * coeff(j, ta, d) +
                                          static_cast<double>(gp[1]) * coeff(j, tb, d));
      row += a1j * v.middleRows(3 * c, 3) + coeff(j, l, d) * dv.middleRows(3 * c, 3);
    }
    return row;
  };

  propagate_mm_solution(
      sys, s0, opts.steps,
      [&](double, const MatX& y) {
        if (call_idx >= per_call.size()) return;
        for (const Node& nd : per_call[call_idx]) acc += nd.weight * integrand(nd.eval_x, y);
        ++call_idx;
      },
      opts.exec);

  return sys.scale() * acc;
}

}  // namespace phonomog
