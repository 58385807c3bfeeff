#pragma once

#include "ffts/types.hpp"

namespace ffts {

/// Diagonal weight K = diag(K1, K2, K3) of the Morse potential <K, I - R>.
/// Requires K1 > K2 > K3 >= 1.
class MorseGain {
 public:
  MorseGain(double k1, double k2, double k3);

  double k1() const { return k_(0); }
  double k2() const { return k_(1); }
  double k3() const { return k_(2); }
  const Vec3& diag() const { return k_; }
  Mat3 matrix() const { return k_.asDiagonal(); }

 private:
  Vec3 k_;
};

struct Pose {
  Rotation rotation = Rotation::Identity();
  Vec3 position = Vec3::Zero();
};

// v^x, the cross-product matrix: hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

// Inverse of hat. Throws kNotSkew when |M + M^T| >= 1e-9.
Vec3 vee(const Mat3& m);

// Vee of the skew part, for matrices that are skew only up to round-off.
Vec3 vee_skew_part(const Mat3& m);

// Rodrigues formula. Second-order series below |v| < 1e-8.
Rotation exp_so3(const Vec3& v);

// Rotation vector of R with |result| in [0, pi].
Vec3 log_so3(const Rotation& r);

/// Morse vector field s_K(R) = sum_i K_i (R^T e_i) x e_i.
/// Satisfies d/dt <K, I - R> = Omega^T s_K(R) along Rdot = R Omega^x.
Vec3 morse_sk(const Rotation& r, const MorseGain& k);

/// <K, I - R> = tr(K^T (I - R)).
double morse_value(const Rotation& r, const MorseGain& k);

/// Time derivative of s_K(R_err) when R_err' = R_err omega_err^x:
/// sum_i K_i e_i x (omega_err x R_err^T e_i).
Vec3 morse_rate(const Rotation& r_err, const Vec3& omega_err, const MorseGain& k);

/// Principal rotation angle in [0, pi].
double principal_angle(const Rotation& q);

/// R_ii >= 0 and R_ij R_ji <= 0 for i != j (non-strict, as written).
bool in_set_s(const Rotation& r);

// Max of |R^T R - I| and |det R - 1|.
double rotation_defect(const Rotation& r);

bool is_rotation(const Rotation& r, double tol = 1e-9);

// Polar projection onto SO(3), applied only when the defect exceeds `tol`.
Rotation reorthonormalize(const Rotation& r, double tol = 1e-9);

}  // namespace ffts
