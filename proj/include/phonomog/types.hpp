#ifndef PHONOMOG_TYPES_HPP
#define PHONOMOG_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phonomog {

using cx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Mat3d = Eigen::Matrix3d;
using Mat3i = Eigen::Matrix3i;
using Vec3d = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;
using Vec2i = Eigen::Vector2i;
using Mat6 = Eigen::Matrix<cx, 6, 6>;
using MatX = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Invalid input: bad config values, out-of-range parameters, shape misuse.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed (singular factorization, lost positivity,
/// divergent integration, residual above tolerance).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Execution policy for the data-parallel kernels.
enum class Exec { serial, parallel };

}  // namespace phonomog

#endif
