#ifndef PHONOMOG_KERNELS_HPP
#define PHONOMOG_KERNELS_HPP

#include <functional>

#include "phonomog/types.hpp"

namespace phonomog::kernels {

// Data-parallel building blocks used by the solvers. Every kernel has a
// serial reference path and an OpenMP path selected by Exec; tests assert
// the two agree and bench/ compares their throughput.

/// Effective policy: falls back to serial inside an enclosing OpenMP region
/// (sweeps parallelize over grid points) or when only one thread is available.
Exec resolve(Exec requested);

int max_threads();

/// Fills an (3*rows) x (3*cols) matrix from a generator of 3x3 blocks.
/// The generator must be safe to call concurrently.
using BlockGen = std::function<void(int block_row, int block_col, Mat3& out)>;
MatX assemble_blocks(int block_rows, int block_cols, const BlockGen& gen,
                     Exec exec = Exec::parallel);

/// out = a * b (column-panel split across threads).
void multiply_into(MatX& out, const MatX& a, const MatX& b, Exec exec = Exec::parallel);
MatX multiply(const MatX& a, const MatX& b, Exec exec = Exec::parallel);

/// out += a * b
void multiply_add(MatX& out, const MatX& a, const MatX& b, Exec exec = Exec::parallel);

}  // namespace phonomog::kernels

#endif
