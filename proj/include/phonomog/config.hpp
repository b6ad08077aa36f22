#ifndef PHONOMOG_CONFIG_HPP
#define PHONOMOG_CONFIG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "phonomog/homogenize.hpp"

namespace phonomog {

/// Parsed run description. The config file is a flat key/value format with
/// [section] headers; material constants are given in GPa and g/cm^3 (the
/// display units) and converted to SI here.
struct RunConfig {
  UnitCell cell;
  std::vector<Method> methods{Method::mm};
  std::vector<int> n_list{0};
  std::vector<Vec3d> directions;  // empty = canonical six
  SolveOptions solve;

  std::string sweep_parameter;  // "fraction" or "aspect"
  std::vector<double> sweep_grid;

  std::string output_path;
  int jobs = 0;  // 0 = all available

  std::vector<Vec3d> effective_directions() const;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

/// Applies a sweep parameter value to a copy of the cell
/// (fraction -> cube side f^(1/3); aspect -> spheroid minor axis).
UnitCell sweep_cell(const RunConfig& cfg, double value);

}  // namespace phonomog

#endif
