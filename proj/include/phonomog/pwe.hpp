#ifndef PHONOMOG_PWE_HPP
#define PHONOMOG_PWE_HPP

#include <vector>

#include "phonomog/unit_cell.hpp"

namespace phonomog {

struct PweOptions {
  /// Refuse assemblies whose matrix side 3((2N+1)^3 - 1) exceeds this cap
  /// (the paper's N = 5 by default).
  int max_side = 3993;
  Exec exec = Exec::parallel;
};

/// Truncated plane-wave-expansion system: all g in [-N,N]^3 \ {0},
/// lexicographic order, with
///   q_j  = (g_i Chat_ij(g))_g,
///   C0   = (g_k g'_p Chat_kp(g - g'))_{g,g'}.
/// C0 is Hermitian and positive definite for positive-definite stiffness.
class PweSystem {
 public:
  static PweSystem assemble(const CellField& field, int N, const PweOptions& opts = {});

  int truncation() const { return n_; }
  int side() const { return static_cast<int>(c0_.rows()); }
  const std::vector<Vec3i>& modes() const { return modes_; }
  const MatX& c0() const { return c0_; }
  const MatX& q(int j) const { return q_[j - 1]; }

  /// C_jl^e = Chat_jl(0) - q_j^+ C0^-1 q_l for all nine (j,l); C0 is
  /// factorized once. Entries are in Pa.
  std::array<std::array<Mat3, 3>, 3> solve() const;

 private:
  int n_ = 0;
  double scale_ = 1.0;
  std::vector<Vec3i> modes_;
  MatX c0_;
  std::array<MatX, 3> q_;
  Mat3 mean_[3][3];
};

}  // namespace phonomog

#endif
