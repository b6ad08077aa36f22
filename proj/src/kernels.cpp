#include "phonomog/kernels.hpp"

#include <omp.h>

namespace phonomog::kernels {

int max_threads() { return omp_get_max_threads(); }

Exec resolve(Exec requested) {
  if (requested == Exec::serial) return Exec::serial;
  if (omp_in_parallel() || omp_get_max_threads() < 2) return Exec::serial;
  return Exec::parallel;
}

MatX assemble_blocks(int block_rows, int block_cols, const BlockGen& gen, Exec exec) {
  MatX m(3 * block_rows, 3 * block_cols);
  // Thread dispatch costs more than the fill itself on small systems.
  if (static_cast<long>(block_rows) * block_cols < 1024) exec = Exec::serial;
  if (resolve(exec) == Exec::serial) {
    Mat3 blk;
    for (int r = 0; r < block_rows; ++r)
      for (int c = 0; c < block_cols; ++c) {
        gen(r, c, blk);
        m.block<3, 3>(3 * r, 3 * c) = blk;
      }
    return m;
  }
#pragma omp parallel
  {
    Mat3 blk;
#pragma omp for schedule(static)
    for (int r = 0; r < block_rows; ++r)
      for (int c = 0; c < block_cols; ++c) {
        gen(r, c, blk);
        m.block<3, 3>(3 * r, 3 * c) = blk;
      }
  }
  return m;
}

namespace {

// One wide panel per thread: the LHS gets re-packed per panel GEMM, so
// narrow panels waste most of the time packing. The layout depends only on
// the matrix size and thread count, keeping results reproducible.
inline int panel_width(int cols) {
  int w = (cols + max_threads() - 1) / max_threads();
  return w < 48 ? 48 : w;
}

}  // namespace

namespace {

inline bool too_small(const MatX& a, const MatX& b) {
  return a.rows() * a.cols() * b.cols() < (1 << 22);
}

}  // namespace

void multiply_into(MatX& out, const MatX& a, const MatX& b, Exec exec) {
  out.resize(a.rows(), b.cols());
  if (too_small(a, b)) exec = Exec::serial;
  if (resolve(exec) == Exec::serial) {
    out.noalias() = a * b;
    return;
  }
  const int cols = static_cast<int>(b.cols());
  const int w = panel_width(cols);
  const int npanels = (cols + w - 1) / w;
#pragma omp parallel for schedule(static)
  for (int p = 0; p < npanels; ++p) {
    const int c0 = p * w;
    const int nc = std::min(w, cols - c0);
    out.middleCols(c0, nc).noalias() = a * b.middleCols(c0, nc);
  }
}

MatX multiply(const MatX& a, const MatX& b, Exec exec) {
  MatX out;
  multiply_into(out, a, b, exec);
  return out;
}

void multiply_add(MatX& out, const MatX& a, const MatX& b, Exec exec) {
  if (too_small(a, b)) exec = Exec::serial;
  if (resolve(exec) == Exec::serial) {
    out.noalias() += a * b;
    return;
  }
  const int cols = static_cast<int>(b.cols());
  const int w = panel_width(cols);
  const int npanels = (cols + w - 1) / w;
#pragma omp parallel for schedule(static)
  for (int p = 0; p < npanels; ++p) {
    const int c0 = p * w;
    const int nc = std::min(w, cols - c0);
    out.middleCols(c0, nc).noalias() += a * b.middleCols(c0, nc);
  }
}

}  // namespace phonomog::kernels
