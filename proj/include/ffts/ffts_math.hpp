#pragma once

#include <cmath>
#include <utility>

#include "ffts/types.hpp"

namespace ffts {

/// Hoelder exponent p of the finite-time stable vector fields, 1 < p < 2.
/// The Lipschitz limit p = 1 is only reachable through lipschitz_limit().
class HolderExponent {
 public:
  explicit HolderExponent(double p);
  static HolderExponent lipschitz_limit();

  double value() const { return p_; }
  bool is_lipschitz_limit() const { return p_ == 1.0; }

  // (1-p)/(3p-2): power applied to e^T e inside phi1.
  double phi_power() const { return (1.0 - p_) / (3.0 * p_ - 2.0); }
  // p/(3p-2)
  double phi_ratio() const { return p_ / (3.0 * p_ - 2.0); }
  // (1-p)/p: power applied to x^T x in the psi and control terms.
  double psi_power() const { return (1.0 - p_) / p_; }
  // (p-1)/p: the H-matrix argument paired with psi_power().
  double h_gain() const { return (p_ - 1.0) / p_; }
  // 1/p: the decay exponent alpha of the Lyapunov inequalities.
  double decay_exponent() const { return 1.0 / p_; }

 private:
  struct Unchecked {};
  HolderExponent(double p, Unchecked) : p_(p) {}
  double p_;
};

/// Differentiator gains; A* = [[-k1, 1], [-k2, 0]] is Hurwitz iff k1 > 0 and k2 > 0.
struct DiffGains {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  bool is_hurwitz() const { return k1 > 0.0 && k2 > 0.0; }
  Mat2 a_matrix() const {
    Mat2 a;
    a << -k1, 1.0, -k2, 0.0;
    return a;
  }
};

struct LyapunovPair {
  Mat2 p;
  Mat2 q;
  double p_min = 0.0;
  double p_max = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
};

struct DecayConstants {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

struct RobustGainReport {
  double gamma1 = 0.0;
  double condition_ratio = 0.0;  // lambda_max(P) / lambda_min(P)
  double margin = 0.0;           // gamma1 - condition_ratio
  bool passes = false;
  double required_k3 = 0.0;      // smallest k3 with gamma1 == condition_ratio
  double phi1_perturbation_bound = 0.0;
  double phi2_perturbation_bound = 0.0;
};

namespace detail {

// Below this norm (x^T x)^power x is replaced by its continuous extension 0.
inline constexpr double kPowerFloor = 1e-150;

}  // namespace detail

/// (x^T x)^power * x, continuously extended by 0 at the origin.
/// Only meaningful for power > -1/2.
template <typename Derived>
typename Derived::PlainObject scaled_power(const Eigen::MatrixBase<Derived>& x, double power) {
  const double sq = x.squaredNorm();
  if (sq < detail::kPowerFloor * detail::kPowerFloor) {
    return Derived::PlainObject::Zero(x.rows());
  }
  return std::pow(sq, power) * x;
}

/// phi1(e) = k3 e + (e^T e)^((1-p)/(3p-2)) e.
template <typename Derived>
typename Derived::PlainObject phi1(const Eigen::MatrixBase<Derived>& e, const HolderExponent& p,
                                   double k3) {
  return k3 * e + scaled_power(e, p.phi_power());
}

/// phi2(e) = k3^2 e + 2 k3 (2p-1)/(3p-2) (e^T e)^b e + p/(3p-2) (e^T e)^(2b) e,
/// with b = (1-p)/(3p-2). Equals phi1'(e) phi1(e).
template <typename Derived>
typename Derived::PlainObject phi2(const Eigen::MatrixBase<Derived>& e, const HolderExponent& p,
                                   double k3) {
  const double pv = p.value();
  const double b = p.phi_power();
  return k3 * k3 * e + (2.0 * k3 * (2.0 * pv - 1.0) / (3.0 * pv - 2.0)) * scaled_power(e, b) +
         p.phi_ratio() * scaled_power(e, 2.0 * b);
}

/// Jacobian of phi1. Unbounded at the origin, so e = 0 throws kZeroInput.
MatX phi1_jacobian(const VecX& e, const HolderExponent& p, double k3);

/// Closed-form extreme eigenvalues of phi1'(e): {min, max}.
std::pair<double, double> phi1_jacobian_eigen_bounds(const VecX& e, const HolderExponent& p,
                                                     double k3);

/// H(x, k) = I - 2k x x^T / (x^T x); identity at x = 0.
Mat3 h_matrix(const Vec3& x, double k);

/// Solves A*^T P + P A* = -Q in closed form for the 2x2 companion matrix.
LyapunovPair solve_lyapunov(const DiffGains& gains, const Mat2& q = Mat2::Identity());

/// The solution for weight c Q is c P.
LyapunovPair scale_pair(const LyapunovPair& pair, double c);

/// gamma1 = k3 lmin(Q)/lmax(P), gamma2 = lmin(Q) lmin(P)^((p-1)/p) p / (lmax(P)(3p-2)).
DecayConstants gamma_constants(const LyapunovPair& pair, double k3, const HolderExponent& p);

/// Robustness condition gamma1 >= lmax(P)/lmin(P), plus the noise perturbation
/// bounds on |phi1(e) - phi1(e+mu)| and |phi2(e) - phi2(e+mu)| for |mu| <= mu_bar.
RobustGainReport validate_robust_gains(const LyapunovPair& pair, double k3,
                                       const HolderExponent& p, double mu_bar = 0.0);

/// Upper bound on the settling time of Vdot <= -l1 V - l2 V^alpha.
/// l1 == 0 gives the pure finite-time bound V0^(1-alpha) / (l2 (1-alpha)).
double settling_time_bound(double v0, double lambda1, double lambda2, double alpha);

/// Radius (in V) of the set reached by Vdot <= -l1 V - l2 V^alpha + eta.
double pfts_radius(double lambda1, double lambda2, double alpha, double eta, double theta0);

/// phi(x) = Y^T Y with Y = |x|^(-2a) x - |x+mu|^(-2a) (x+mu), continuous at 0 and -mu.
double noise_gap_objective(const Vec3& x, const Vec3& mu, double alpha);

/// Numerical maximizer of noise_gap_objective: coarse grid on the plane spanned by
/// mu and an orthogonal direction, then golden-section refinement.
Vec3 noise_gap_argmax(const Vec3& mu, double alpha, int grid_resolution = 400);

/// Right-hand side of the differentiator e1' = -k1 phi1(e1) + e2, e2' = -k2 phi2(e1).
std::pair<VecX, VecX> differentiator_rhs(const VecX& e1, const VecX& e2, const DiffGains& gains,
                                         const HolderExponent& p);

/// V = zeta^T P zeta with zeta = [phi1(e1); e2] and P the augmented Lyapunov solution.
double differentiator_lyapunov(const VecX& e1, const VecX& e2, const LyapunovPair& pair,
                               double k3, const HolderExponent& p);

}  // namespace ffts
