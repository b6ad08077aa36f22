#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "phonomog/csv.hpp"

using namespace phonomog;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

const char* kCubeConfig = R"(
# steel cubes in epoxy
[material.matrix]
c11_gpa = 7.537
c66_gpa = 1.482
rho_gcm3 = 1.142

[material.inclusion]
c11_gpa = 170
c66_gpa = 80
rho_gcm3 = 7.7

[cell]
shape = cube
side = 0.5

[solver]
method = both
n_list = 0 1
alpha = 0.5+2i
rk4_steps = 128
adaptive = false

[directions]
kappa = 1 0 0
kappa = 0 1 1

[output]
path = out.csv
)";

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse(kCubeConfig);
  CHECK(cfg.cell.matrix.rho == doctest::Approx(1142.0));
  CHECK(cfg.cell.inclusion.stiffness.voigt()(0, 0).real() == doctest::Approx(170e9));
  CHECK(std::get<Cube>(cfg.cell.shape).side == doctest::Approx(0.5));
  REQUIRE(cfg.methods.size() == 2);
  CHECK(cfg.methods[0] == Method::mm);
  CHECK(cfg.n_list == std::vector<int>{0, 1});
  CHECK(cfg.solve.mm.alpha == cx(0.5, 2.0));
  CHECK(cfg.solve.mm.steps == 128);
  CHECK(!cfg.solve.mm.adaptive);
  REQUIRE(cfg.directions.size() == 2);
  CHECK(cfg.directions[1].isApprox(Vec3d(0, 1, 1).normalized()));
  CHECK(cfg.output_path == "out.csv");
}

TEST_CASE("config errors carry the field name") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse(text);
      FAIL_CHECK("expected ConfigError for " << needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("[material.matrix]\nc11_gpa = 170\nc66_gpa = 80\nrho_gcm3 = -7.7\n[cell]\nshape = homogeneous\n",
               "rho");
  expect_error("[material.matrix]\nc66_gpa = 80\nrho_gcm3 = 7.7\n[cell]\nshape = homogeneous\n",
               "c11_gpa");
  expect_error("[material.matrix]\nc11_gpa = 170\nc66_gpa = 80\nrho_gcm3 = 7.7\n[cell]\nshape = cube\n",
               "side");
  expect_error("[material.matrix]\nc11_gpa = x\nc66_gpa = 80\nrho_gcm3 = 7.7\n[cell]\nshape = homogeneous\n",
               "c11_gpa");
}

TEST_CASE("alpha forms") {
  auto base = [](const std::string& alpha) {
    return "[material.matrix]\nc11_gpa = 170\nc66_gpa = 80\nrho_gcm3 = 7.7\n[cell]\nshape = homogeneous\n[solver]\nalpha = " +
           alpha + "\n";
  };
  CHECK(parse(base("2i")).solve.mm.alpha == cx(0, 2));
  CHECK(parse(base("0.5+2i")).solve.mm.alpha == cx(0.5, 2));
  CHECK(parse(base("-1.5+1.5i")).solve.mm.alpha == cx(-1.5, 1.5));
  CHECK(parse(base("3")).solve.mm.alpha == cx(3, 0));
  CHECK(parse(base("1-0.5i")).solve.mm.alpha == cx(1, -0.5));
}

TEST_CASE("voigt material input") {
  std::string text =
      "[material.matrix]\nrho_gcm3 = 1\nvoigt_gpa = 10 2 2 0 0 0  10 2 0 0 0  10 0 0 0  4 0 0  4 0  4\n"
      "[cell]\nshape = homogeneous\n";
  const RunConfig cfg = parse(text);
  const Mat6 v = cfg.cell.matrix.stiffness.voigt();
  CHECK(v(0, 0).real() == doctest::Approx(10e9));
  CHECK(v(0, 1).real() == doctest::Approx(2e9));
  CHECK(v(3, 3).real() == doctest::Approx(4e9));
}

TEST_CASE("sweep cell construction") {
  RunConfig cfg = parse(kCubeConfig);
  cfg.sweep_parameter = "fraction";
  const UnitCell cell = sweep_cell(cfg, 0.125);
  CHECK(std::get<Cube>(cell.shape).side == doctest::Approx(0.5));
  cfg.sweep_parameter = "aspect";
  const UnitCell sph = sweep_cell(cfg, 0.7);
  CHECK(std::get<Spheroid>(sph.shape).a == doctest::Approx(0.7));
  CHECK_THROWS_AS(sweep_cell(cfg, 1.5), ConfigError);
}

TEST_CASE("moduli CSV layout and determinism") {
  RunConfig cfg = parse(kCubeConfig);
  // Homogeneous cell: cheap, exact, and valid for the full recovery at N = 0.
  cfg.cell.inclusion = cfg.cell.matrix;
  cfg.cell.shape = Homogeneous{};
  cfg.n_list = {0};
  cfg.methods = {Method::mm, Method::pwe};
  std::vector<EffectiveResult> results;
  for (Method m : cfg.methods) results.push_back(effective_moduli(cfg.cell, m, 0, cfg.solve));

  std::ostringstream a, b;
  write_moduli_csv(a, cfg, results);
  write_moduli_csv(b, cfg, results);
  CHECK(a.str() == b.str());

  std::istringstream is(a.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "quantity,unit,mm_n0,pwe_n0");
  std::string line;
  int rows = 0;
  bool saw_c11 = false, saw_c66 = false, saw_rho = false;
  while (std::getline(is, line)) {
    ++rows;
    if (line.rfind("c11,GPa,", 0) == 0) saw_c11 = true;
    if (line.rfind("c66,GPa,", 0) == 0) saw_c66 = true;
    if (line.rfind("mean_rho,", 0) == 0) saw_rho = true;
  }
  CHECK(saw_c11);
  CHECK(saw_c66);
  CHECK(saw_rho);
  // 21 constants + mean_rho + 3 speed rows per direction (2 directions).
  CHECK(rows == 21 + 1 + 6);
}

TEST_CASE("csv number formatting is locale-free") {
  CHECK(csv_num(0.125) == "0.125");
  CHECK(csv_num(1e9) == "1e+09");
  CHECK(csv_num(-3.5e-7) == "-3.5e-07");
}

TEST_CASE("bounds CSV emits the expected kinds") {
  RunConfig cfg = parse(kCubeConfig);
  std::ostringstream os;
  write_bounds_csv(os, cfg);
  const std::string s = os.str();
  CHECK(s.find("mm_zero,axis1") != std::string::npos);
  CHECK(s.find("voigt,axis1") != std::string::npos);
  CHECK(s.find("gamma_bound,") != std::string::npos);
  CHECK(s.find("hs_low,") != std::string::npos);
  CHECK(s.find("hs_high,") != std::string::npos);
}

TEST_CASE("shipped example configs parse") {
  for (const char* name : {"homogeneous_steel.cfg", "cube_f18.cfg", "sweep_fig1b.cfg",
                           "sweep_fig3.cfg", "oblique_a1.cfg"}) {
    CHECK_NOTHROW(parse_config_file(std::string(PHONOMOG_CONFIG_DIR "/") + name));
  }
  CHECK_THROWS_AS(parse_config_file(std::string(PHONOMOG_CONFIG_DIR "/bad_negative_density.cfg")),
                  ConfigError);
}
