#include "phonomog/csv.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace phonomog {

namespace {

constexpr double kToGpa = 1e-9;
constexpr double kToMmUs = 1e-3;  // m/s -> mm/us

const char* kVoigtNames[21] = {"c11", "c12", "c13", "c14", "c15", "c16", "c22", "c23",
                               "c24", "c25", "c26", "c33", "c34", "c35", "c36", "c44",
                               "c45", "c46", "c55", "c56", "c66"};

std::string dir_label(const Vec3d& k) {
  std::ostringstream os;
  os << "(" << csv_num(k[0]) << " " << csv_num(k[1]) << " " << csv_num(k[2]) << ")";
  return os.str();
}

std::string combo_tag(Method m, int n) {
  std::ostringstream os;
  os << method_name(m) << "_n" << n;
  return os.str();
}

}  // namespace

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_moduli_csv(std::ostream& os, const RunConfig& cfg,
                      const std::vector<EffectiveResult>& results) {
  os << "quantity,unit";
  for (const auto& r : results) os << "," << combo_tag(r.method, r.truncation);
  os << "\n";

  std::vector<Mat6> voigts;
  voigts.reserve(results.size());
  for (const auto& r : results) voigts.push_back(r.c_eff.voigt());

  int idx = 0;
  for (int row = 0; row < 6; ++row)
    for (int col = row; col < 6; ++col, ++idx) {
      os << kVoigtNames[idx] << ",GPa";
      for (const auto& v : voigts) os << "," << csv_num(v(row, col).real() * kToGpa);
      os << "\n";
    }

  os << "mean_rho,g/cm3";
  for (const auto& r : results) os << "," << csv_num(r.mean_rho / 1000.0);
  os << "\n";

  const auto dirs = cfg.effective_directions();
  for (const auto& k : dirs) {
    std::array<std::vector<double>, 3> sp;
    for (const auto& r : results) {
      const auto s = speeds(r, k);
      for (int i = 0; i < 3; ++i) sp[i].push_back(s[i]);
    }
    for (int i = 0; i < 3; ++i) {
      os << "c" << (i + 1) << "@" << dir_label(k) << ",mm/us";
      for (double v : sp[i]) os << "," << csv_num(v * kToMmUs);
      os << "\n";
    }
  }
}

void write_sweep_csv(std::ostream& os, const RunConfig& cfg, const std::vector<SweepRow>& rows) {
  os << cfg.sweep_parameter;
  for (Method m : cfg.methods)
    for (int n : cfg.n_list) {
      const std::string tag = combo_tag(m, n);
      os << ",cl_" << tag << "_mmus,ct_" << tag << "_mmus,ct2_" << tag << "_mmus,c11_" << tag
         << "_gpa,c66_" << tag << "_gpa";
    }
  os << ",cl_mm0bound_mmus,ct_mm0bound_mmus,cl_voigt_mmus,ct_voigt_mmus,cl_hslow_mmus,ct_hslow_mmus,diagnostics\n";

  for (const auto& row : rows) {
    os << csv_num(row.value);
    for (size_t i = 0; i < row.speeds_e1.size(); ++i) {
      const auto& s = row.speeds_e1[i];
      os << "," << csv_num(s[2] * kToMmUs) << "," << csv_num(s[0] * kToMmUs) << ","
         << csv_num(s[1] * kToMmUs) << "," << csv_num(row.c11_gpa[i]) << ","
         << csv_num(row.c66_gpa[i]);
    }
    os << "," << csv_num(row.bound_mm0[2] * kToMmUs) << "," << csv_num(row.bound_mm0[0] * kToMmUs)
       << "," << csv_num(row.bound_voigt[2] * kToMmUs) << "," << csv_num(row.bound_voigt[0] * kToMmUs);
    if (row.hs_valid)
      os << "," << csv_num(row.hs_cl_low * kToMmUs) << "," << csv_num(row.hs_ct_low * kToMmUs);
    else
      os << ",,";
    os << "," << (row.diagnostics.empty() ? "-" : row.diagnostics) << "\n";
  }
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "method,n,matrix_side,wall_s,cl_mmus,ct_mmus,ct2_mmus,residual,alpha_redraws\n";
  for (const auto& r : rows) {
    os << method_name(r.method) << "," << r.truncation << "," << r.matrix_side << ","
       << csv_num(r.wall_seconds) << "," << csv_num(r.speeds_e1[2] * kToMmUs) << ","
       << csv_num(r.speeds_e1[0] * kToMmUs) << "," << csv_num(r.speeds_e1[1] * kToMmUs) << ","
       << csv_num(r.residual) << "," << r.alpha_redraws << "\n";
  }
}

void write_bounds_csv(std::ostream& os, const RunConfig& cfg) {
  const CellField field = to_cubic_equivalent(cfg.cell, cfg.solve.formulation);
  const double rho = cfg.cell.mean_density();
  os << "kind,label,c1_mmus,c2_mmus,c3_mmus\n";
  auto emit = [&](const std::string& kind, const std::string& label, const std::array<double, 3>& s) {
    os << kind << "," << label << "," << csv_num(s[0] * kToMmUs) << "," << csv_num(s[1] * kToMmUs)
       << "," << csv_num(s[2] * kToMmUs) << "\n";
  };
  for (int axis = 1; axis <= 3; ++axis) {
    emit("mm_zero", "axis" + std::to_string(axis), gamma_speeds(mm_zero_cll(field, axis), rho));
    Vec3d e = Vec3d::Zero();
    e[axis - 1] = 1.0;
    emit("voigt", "axis" + std::to_string(axis), gamma_speeds(voigt_gamma(field, e), rho));
  }
  for (const auto& k : cfg.effective_directions()) {
    emit("gamma_bound", dir_label(k), gamma_speeds(gamma_bound(field, k), rho));
    emit("voigt", dir_label(k), gamma_speeds(voigt_gamma(field, k), rho));
  }
  try {
    const HsBounds hs = hashin_shtrikman(cfg.cell);
    emit("hs_low", "-", {hs.ct_low, hs.ct_low, hs.cl_low});
    emit("hs_high", "-", {hs.ct_high, hs.ct_high, hs.cl_high});
  } catch (const ConfigError&) {
    // anisotropic phases: HS rows omitted
  }
}

}  // namespace phonomog
