#ifndef PHONOMOG_CSV_HPP
#define PHONOMOG_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "phonomog/config.hpp"

namespace phonomog {

/// Deterministic number formatting for all CSV output ('%.9g', '.' decimal).
std::string csv_num(double v);

struct SweepRow {
  double value = 0.0;
  // per (method, N), aligned with the header layout
  std::vector<std::array<double, 3>> speeds_e1;  // ascending triples, m/s
  std::vector<double> c11_gpa, c66_gpa;
  std::array<double, 3> bound_mm0;  // Eq.-(bound) style N = 0 MM speeds
  std::array<double, 3> bound_voigt;
  double hs_cl_low = 0.0, hs_ct_low = 0.0;
  bool hs_valid = false;
  std::string diagnostics;
};

void write_moduli_csv(std::ostream& os, const RunConfig& cfg,
                      const std::vector<EffectiveResult>& results);
void write_sweep_csv(std::ostream& os, const RunConfig& cfg, const std::vector<SweepRow>& rows);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_bounds_csv(std::ostream& os, const RunConfig& cfg);

}  // namespace phonomog

#endif
