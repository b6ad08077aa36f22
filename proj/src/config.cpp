#include "phonomog/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace phonomog {

namespace {

constexpr double kGPa = 1e9;
constexpr double kGcm3 = 1000.0;  // g/cm^3 -> kg/m^3

struct RawConfig {
  // section -> key -> values (repeated keys accumulate)
  std::map<std::string, std::map<std::string, std::vector<std::string>>> data;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    if (s == data.end()) return false;
    return s->second.count(key) > 0;
  }
  const std::vector<std::string>& all(const std::string& sec, const std::string& key) const {
    return data.at(sec).at(key);
  }
  std::string get(const std::string& sec, const std::string& key) const {
    const auto& v = all(sec, key);
    return v.back();
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

RawConfig read_raw(std::istream& in) {
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    raw.data[section][key].push_back(value);
  }
  return raw;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + what + ": '" + s + "'");
  }
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::istringstream is(s);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, what));
  return out;
}

/// Complex in the forms "2i", "0.5+2i", "-1.5+1.5i", "3", "1-0.5i".
cx parse_complex(const std::string& s, const std::string& what) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ConfigError(what + ": empty value");
  try {
    if (t.back() != 'i' && t.back() != 'I') return cx(parse_double(t, what), 0.0);
    t.pop_back();
    if (t.empty() || t == "+") return cx(0.0, 1.0);
    if (t == "-") return cx(0.0, -1.0);
    // Split at the last +/- that is not an exponent sign and not leading.
    size_t split = std::string::npos;
    for (size_t i = t.size(); i-- > 1;) {
      if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) return cx(0.0, parse_double(t, what));
    const double re = parse_double(t.substr(0, split), what);
    std::string imag = t.substr(split);
    if (imag == "+") imag = "1";
    if (imag == "-") imag = "-1";
    return cx(re, parse_double(imag, what));
  } catch (const ConfigError&) {
    throw ConfigError("invalid complex value for " + what + ": '" + s + "'");
  }
}

Material parse_material(const RawConfig& raw, const std::string& section) {
  Material m;
  if (!raw.has(section, "rho_gcm3")) throw ConfigError(section + ".rho_gcm3 is required");
  m.rho = parse_double(raw.get(section, "rho_gcm3"), section + ".rho_gcm3") * kGcm3;
  if (raw.has(section, "voigt_gpa")) {
    const auto v = parse_doubles(raw.get(section, "voigt_gpa"), section + ".voigt_gpa");
    if (v.size() != 21)
      throw ConfigError(section + ".voigt_gpa needs 21 numbers (upper triangle, row-major)");
    Mat6 voigt;
    size_t idx = 0;
    for (int r = 0; r < 6; ++r)
      for (int c = r; c < 6; ++c) {
        voigt(r, c) = v[idx] * kGPa;
        voigt(c, r) = v[idx] * kGPa;
        ++idx;
      }
    m.stiffness = StiffnessTensor::from_voigt(voigt);
  } else {
    if (!raw.has(section, "c11_gpa") || !raw.has(section, "c66_gpa"))
      throw ConfigError(section + " needs c11_gpa and c66_gpa (or voigt_gpa)");
    const double c11 = parse_double(raw.get(section, "c11_gpa"), section + ".c11_gpa") * kGPa;
    const double c66 = parse_double(raw.get(section, "c66_gpa"), section + ".c66_gpa") * kGPa;
    m.stiffness = StiffnessTensor::isotropic(c11, c66);
  }
  return m;
}

Shape parse_shape(const RawConfig& raw) {
  const std::string kind = raw.has("cell", "shape") ? raw.get("cell", "shape") : "homogeneous";
  if (kind == "homogeneous") return Homogeneous{};
  if (kind == "cube") {
    if (!raw.has("cell", "side")) throw ConfigError("cell.side is required for shape = cube");
    return Cube{parse_double(raw.get("cell", "side"), "cell.side")};
  }
  if (kind == "sphere") {
    if (!raw.has("cell", "diameter")) throw ConfigError("cell.diameter is required for shape = sphere");
    return Sphere{parse_double(raw.get("cell", "diameter"), "cell.diameter")};
  }
  if (kind == "spheroid") {
    if (!raw.has("cell", "aspect")) throw ConfigError("cell.aspect is required for shape = spheroid");
    return Spheroid{parse_double(raw.get("cell", "aspect"), "cell.aspect")};
  }
  if (kind == "voxel") {
    if (!raw.has("cell", "voxel_m") || !raw.has("cell", "voxel_data"))
      throw ConfigError("cell.voxel_m and cell.voxel_data are required for shape = voxel");
    VoxelGrid g;
    g.m = static_cast<int>(parse_double(raw.get("cell", "voxel_m"), "cell.voxel_m"));
    const auto vals = parse_doubles(raw.get("cell", "voxel_data"), "cell.voxel_data");
    g.inside.reserve(vals.size());
    for (double v : vals) g.inside.push_back(v != 0.0 ? 1 : 0);
    if (g.m < 1 || g.inside.size() != static_cast<size_t>(g.m) * g.m * g.m)
      throw ConfigError("cell.voxel_data must hold voxel_m^3 entries");
    return g;
  }
  throw ConfigError("unknown cell.shape: '" + kind + "'");
}

}  // namespace

std::vector<Vec3d> RunConfig::effective_directions() const {
  if (!directions.empty()) return directions;
  const auto& d = canonical_directions();
  return std::vector<Vec3d>(d.begin(), d.end());
}

RunConfig parse_config(std::istream& in) {
  const RawConfig raw = read_raw(in);
  RunConfig cfg;

  cfg.cell.matrix = parse_material(raw, "material.matrix");
  cfg.cell.inclusion =
      raw.data.count("material.inclusion") ? parse_material(raw, "material.inclusion") : cfg.cell.matrix;
  cfg.cell.shape = parse_shape(raw);
  if (raw.has("cell", "lattice")) {
    const auto v = parse_doubles(raw.get("cell", "lattice"), "cell.lattice");
    if (v.size() != 9) throw ConfigError("cell.lattice needs 9 numbers (row-major)");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cfg.cell.lattice(r, c) = v[3 * r + c];
  }
  cfg.cell.validate();

  if (raw.has("solver", "method")) {
    const std::string m = raw.get("solver", "method");
    if (m == "pwe")
      cfg.methods = {Method::pwe};
    else if (m == "mm")
      cfg.methods = {Method::mm};
    else if (m == "both")
      cfg.methods = {Method::mm, Method::pwe};
    else
      throw ConfigError("solver.method must be pwe, mm or both");
  }
  if (raw.has("solver", "n_list")) {
    cfg.n_list.clear();
    for (double v : parse_doubles(raw.get("solver", "n_list"), "solver.n_list")) {
      if (v < 0 || v != std::floor(v)) throw ConfigError("solver.n_list entries must be integers >= 0");
      cfg.n_list.push_back(static_cast<int>(v));
    }
    if (cfg.n_list.empty()) throw ConfigError("solver.n_list is empty");
  }
  if (raw.has("solver", "alpha")) cfg.solve.mm.alpha = parse_complex(raw.get("solver", "alpha"), "solver.alpha");
  if (raw.has("solver", "rk4_steps")) {
    const double v = parse_double(raw.get("solver", "rk4_steps"), "solver.rk4_steps");
    if (v < 1) throw ConfigError("solver.rk4_steps must be >= 1");
    cfg.solve.mm.steps = static_cast<int>(v);
  }
  if (raw.has("solver", "rk4_tol"))
    cfg.solve.mm.cauchy_tol = parse_double(raw.get("solver", "rk4_tol"), "solver.rk4_tol");
  if (raw.has("solver", "adaptive")) {
    const std::string v = raw.get("solver", "adaptive");
    cfg.solve.mm.adaptive = (v == "true" || v == "1" || v == "yes");
  }
  if (raw.has("solver", "max_pwe_side"))
    cfg.solve.pwe.max_side = static_cast<int>(parse_double(raw.get("solver", "max_pwe_side"), "solver.max_pwe_side"));
  if (raw.has("solver", "formulation")) {
    const std::string f = raw.get("solver", "formulation");
    if (f == "cosserat")
      cfg.solve.formulation = ObliqueFormulation::cosserat;
    else if (f == "anisotropic-density")
      cfg.solve.formulation = ObliqueFormulation::anisotropic_density;
    else
      throw ConfigError("solver.formulation must be cosserat or anisotropic-density");
  }
  if (raw.has("solver", "strict")) {
    const std::string v = raw.get("solver", "strict");
    cfg.solve.strict = (v == "true" || v == "1" || v == "yes");
  }

  if (raw.data.count("directions")) {
    for (const auto& s : raw.all("directions", "kappa")) {
      const auto v = parse_doubles(s, "directions.kappa");
      if (v.size() != 3) throw ConfigError("directions.kappa needs 3 numbers");
      Vec3d k(v[0], v[1], v[2]);
      if (k.norm() == 0.0) throw ConfigError("directions.kappa must be nonzero");
      cfg.directions.push_back(k.normalized());
    }
  }

  if (raw.data.count("sweep")) {
    if (!raw.has("sweep", "parameter")) throw ConfigError("sweep.parameter is required");
    cfg.sweep_parameter = raw.get("sweep", "parameter");
    if (cfg.sweep_parameter != "fraction" && cfg.sweep_parameter != "aspect")
      throw ConfigError("sweep.parameter must be fraction or aspect");
    if (raw.has("sweep", "grid")) cfg.sweep_grid = parse_doubles(raw.get("sweep", "grid"), "sweep.grid");
  }

  if (raw.data.count("output") && raw.has("output", "path")) cfg.output_path = raw.get("output", "path");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

UnitCell sweep_cell(const RunConfig& cfg, double value) {
  UnitCell cell = cfg.cell;
  if (cfg.sweep_parameter == "fraction") {
    if (!(value > 0.0 && value <= 1.0)) throw ConfigError("sweep fraction must lie in (0,1]");
    cell.shape = Cube{std::cbrt(value)};
  } else if (cfg.sweep_parameter == "aspect") {
    if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("sweep aspect must lie in [0,1]");
    cell.shape = Spheroid{value};
  } else {
    throw ConfigError("no sweep parameter configured");
  }
  return cell;
}

}  // namespace phonomog
