#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ffts {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Rotation matrices are stored as plain 3x3 matrices; see is_rotation().
using Rotation = Eigen::Matrix3d;

enum class ErrorCode {
  kNotSkew,
  kZeroInput,
  kNotHurwitz,
  kNotPositiveDefinite,
  kBadExponent,
  kZeroMu,
  kInvalidGains,
  kBadInertia,
  kDegenerateThrust,
  kDegenerateHeading,
  kNewtonDivergence,
  kGainValidationFailed,
  kNumericalBlowup,
  kIoFailure,
  kParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const Vec3& e1() {
  static const Vec3 v = Vec3::UnitX();
  return v;
}
inline const Vec3& e2() {
  static const Vec3 v = Vec3::UnitY();
  return v;
}
inline const Vec3& e3() {
  static const Vec3 v = Vec3::UnitZ();
  return v;
}

}  // namespace ffts
