#include "ffts/lie.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace ffts {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSkew: return "NotSkew";
    case ErrorCode::kZeroInput: return "ZeroInput";
    case ErrorCode::kNotHurwitz: return "NotHurwitz";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kBadExponent: return "BadExponent";
    case ErrorCode::kZeroMu: return "ZeroMu";
    case ErrorCode::kInvalidGains: return "InvalidGains";
    case ErrorCode::kBadInertia: return "BadInertia";
    case ErrorCode::kDegenerateThrust: return "DegenerateThrust";
    case ErrorCode::kDegenerateHeading: return "DegenerateHeading";
    case ErrorCode::kNewtonDivergence: return "NewtonDivergence";
    case ErrorCode::kGainValidationFailed: return "GainValidationFailed";
    case ErrorCode::kNumericalBlowup: return "NumericalBlowup";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

MorseGain::MorseGain(double k1, double k2, double k3) : k_(k1, k2, k3) {
  if (!(k1 > k2 && k2 > k3 && k3 >= 1.0)) {
    throw Error(ErrorCode::kInvalidGains, "Morse gain requires K1 > K2 > K3 >= 1");
  }
}

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  if ((m + m.transpose()).norm() >= 1e-9) {
    throw Error(ErrorCode::kNotSkew, "matrix is not skew-symmetric");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Vec3 vee_skew_part(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Rotation exp_so3(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 k = hat(v);
  if (theta < 1e-8) {
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * k + b * k * k;
}

Vec3 log_so3(const Rotation& r) {
  const Vec3 axial = vee_skew_part(r);
  const double theta = std::atan2(axial.norm(), 0.5 * (r.trace() - 1.0));
  if (theta < 1e-6) {
    return axial;
  }
  if (M_PI - theta > 1e-6) {
    return (theta / std::sin(theta)) * axial;
  }
  // Near a half turn R ~ 2 a a^T - I; recover the axis from the symmetric part.
  const Mat3 s = 0.5 * (r + Mat3::Identity());
  Eigen::Index i = 0;
  s.diagonal().maxCoeff(&i);
  Vec3 axis = s.col(i) / std::sqrt(std::max(s(i, i), 1e-300));
  axis.normalize();
  if (axis.dot(axial) < 0.0) axis = -axis;
  return theta * axis;
}

Vec3 morse_sk(const Rotation& r, const MorseGain& k) {
  Vec3 s = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec3 ei = Vec3::Unit(i);
    s += k.diag()(i) * (r.transpose() * ei).cross(ei);
  }
  return s;
}

double morse_value(const Rotation& r, const MorseGain& k) {
  return (k.matrix().transpose() * (Mat3::Identity() - r)).trace();
}

Vec3 morse_rate(const Rotation& r_err, const Vec3& omega_err, const MorseGain& k) {
  Vec3 w = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec3 ei = Vec3::Unit(i);
    w += k.diag()(i) * ei.cross(omega_err.cross(r_err.transpose() * ei));
  }
  return w;
}

double principal_angle(const Rotation& q) {
  return std::acos(std::clamp(0.5 * (q.trace() - 1.0), -1.0, 1.0));
}

bool in_set_s(const Rotation& r) {
  for (int i = 0; i < 3; ++i) {
    if (r(i, i) < 0.0) return false;
    for (int j = 0; j < 3; ++j) {
      if (i != j && r(i, j) * r(j, i) > 0.0) return false;
    }
  }
  return true;
}

double rotation_defect(const Rotation& r) {
  const double orth = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(orth, std::abs(r.determinant() - 1.0));
}

bool is_rotation(const Rotation& r, double tol) {
  return r.allFinite() && rotation_defect(r) < tol;
}

Rotation reorthonormalize(const Rotation& r, double tol) {
  if (rotation_defect(r) <= tol) return r;
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

}  // namespace ffts
