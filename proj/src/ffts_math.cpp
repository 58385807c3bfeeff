#include "ffts/ffts_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ffts {

HolderExponent::HolderExponent(double p) : p_(p) {
  if (!(p > 1.0 && p < 2.0)) {
    throw Error(ErrorCode::kBadExponent, "Hoelder exponent must lie in ]1,2[");
  }
}

HolderExponent HolderExponent::lipschitz_limit() { return HolderExponent(1.0, Unchecked{}); }

MatX phi1_jacobian(const VecX& e, const HolderExponent& p, double k3) {
  const double sq = e.squaredNorm();
  if (std::sqrt(sq) < 1e-300) {
    throw Error(ErrorCode::kZeroInput, "phi1 Jacobian is unbounded at the origin");
  }
  const double pv = p.value();
  const auto n = e.size();
  const MatX eye = MatX::Identity(n, n);
  const double c = 2.0 * (pv - 1.0) / (3.0 * pv - 2.0);
  return k3 * eye + std::pow(sq, p.phi_power()) * (eye - c * (e * e.transpose()) / sq);
}

std::pair<double, double> phi1_jacobian_eigen_bounds(const VecX& e, const HolderExponent& p,
                                                     double k3) {
  const double s = std::pow(e.squaredNorm(), p.phi_power());
  return {k3 + s * p.phi_ratio(), k3 + s};
}

Mat3 h_matrix(const Vec3& x, double k) {
  const double sq = x.squaredNorm();
  if (sq < detail::kPowerFloor * detail::kPowerFloor) {
    return Mat3::Identity();
  }
  return Mat3::Identity() - (2.0 * k / sq) * (x * x.transpose());
}

namespace {

std::pair<double, double> sym2_eigen(const Mat2& m) {
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  const double r = std::hypot(half_diff, m(0, 1));
  return {mean - r, mean + r};
}

}  // namespace

LyapunovPair solve_lyapunov(const DiffGains& gains, const Mat2& q) {
  if (!gains.is_hurwitz()) {
    throw Error(ErrorCode::kNotHurwitz, "A* = [[-k1, 1], [-k2, 0]] needs k1 > 0 and k2 > 0");
  }
  if ((q - q.transpose()).norm() > 1e-12 * std::max(1.0, q.norm())) {
    throw Error(ErrorCode::kNotPositiveDefinite, "Q must be symmetric");
  }
  const auto [q_min, q_max] = sym2_eigen(q);
  if (!(q_min > 0.0)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "Q must be positive definite");
  }
  const double k1 = gains.k1;
  const double k2 = gains.k2;
  // Entry-wise elimination of A^T P + P A = -Q.
  const double p12 = -0.5 * q(1, 1);
  const double p11 = (q(0, 0) - 2.0 * k2 * p12) / (2.0 * k1);
  const double p22 = (p11 + q(0, 1) - k1 * p12) / k2;

  LyapunovPair pair;
  pair.p << p11, p12, p12, p22;
  pair.q = q;
  std::tie(pair.p_min, pair.p_max) = sym2_eigen(pair.p);
  pair.q_min = q_min;
  pair.q_max = q_max;
  if (!(pair.p_min > 0.0)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "Lyapunov solution is not positive definite");
  }
  return pair;
}

LyapunovPair scale_pair(const LyapunovPair& pair, double c) {
  LyapunovPair out = pair;
  out.p *= c;
  out.q *= c;
  out.p_min *= c;
  out.p_max *= c;
  out.q_min *= c;
  out.q_max *= c;
  return out;
}

DecayConstants gamma_constants(const LyapunovPair& pair, double k3, const HolderExponent& p) {
  const double pv = p.value();
  DecayConstants out;
  out.gamma1 = k3 * pair.q_min / pair.p_max;
  out.gamma2 = pair.q_min * std::pow(pair.p_min, (pv - 1.0) / pv) * pv /
               (pair.p_max * (3.0 * pv - 2.0));
  return out;
}

RobustGainReport validate_robust_gains(const LyapunovPair& pair, double k3,
                                       const HolderExponent& p, double mu_bar) {
  RobustGainReport r;
  r.gamma1 = gamma_constants(pair, k3, p).gamma1;
  r.condition_ratio = pair.p_max / pair.p_min;
  r.margin = r.gamma1 - r.condition_ratio;
  r.passes = r.margin >= 0.0;
  r.required_k3 = r.condition_ratio * pair.p_max / pair.q_min;

  if (mu_bar > 0.0) {
    const double pv = p.value();
    const double d = 3.0 * pv - 2.0;
    const double a1 = 2.0 * (pv - 1.0) / d;
    const double a2 = 4.0 * (pv - 1.0) / d;
    r.phi1_perturbation_bound = k3 * mu_bar + std::pow(2.0, a1) * std::pow(mu_bar, 1.0 - a1);
    r.phi2_perturbation_bound =
        k3 * k3 * mu_bar +
        (2.0 * k3 * (2.0 * pv - 1.0) / d) * std::pow(2.0, a1) * std::pow(mu_bar, 1.0 - a1) +
        (pv / d) * std::pow(2.0, a2) * std::pow(mu_bar, 1.0 - a2);
  }
  return r;
}

double settling_time_bound(double v0, double lambda1, double lambda2, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kBadExponent, "alpha must lie in ]0,1[");
  }
  if (v0 <= 0.0) return 0.0;
  const double w = std::pow(v0, 1.0 - alpha);
  if (lambda1 == 0.0) {
    return w / (lambda2 * (1.0 - alpha));
  }
  return std::log1p(lambda1 * w / lambda2) / (lambda1 * (1.0 - alpha));
}

double pfts_radius(double lambda1, double lambda2, double alpha, double eta, double theta0) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kBadExponent, "alpha must lie in ]0,1[");
  }
  if (eta <= 0.0) return 0.0;
  const double scaled = eta / (1.0 - theta0);
  return std::min(scaled / lambda1, std::pow(scaled / lambda2, 1.0 / alpha));
}

double noise_gap_objective(const Vec3& x, const Vec3& mu, double alpha) {
  // |x|^(-2a) x = (x^T x)^(-a) x
  const Vec3 y = scaled_power(x, -alpha) - scaled_power(Vec3(x + mu), -alpha);
  return y.squaredNorm();
}

namespace {

template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Vec3 noise_gap_argmax(const Vec3& mu, double alpha, int grid_resolution) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::kBadExponent, "alpha must lie in ]0,1/2[");
  }
  const double mu_norm = mu.norm();
  if (!(mu_norm > 0.0)) {
    throw Error(ErrorCode::kZeroMu, "mu must be nonzero");
  }
  if (grid_resolution < 3) grid_resolution = 3;

  // nu is orthogonal to mu with the same length, so (c1, c2) are in units of |mu|.
  Vec3 helper = Vec3::UnitX();
  if (std::abs(mu.normalized().dot(helper)) > 0.9) helper = Vec3::UnitY();
  const Vec3 nu = mu.cross(helper).normalized() * mu_norm;

  auto objective = [&](double c1, double c2) {
    return noise_gap_objective(Vec3(c1 * mu + c2 * nu), mu, alpha);
  };

  constexpr double kRadius = 3.0;
  const double step = 2.0 * kRadius / (grid_resolution - 1);
  double best = -std::numeric_limits<double>::infinity();
  double best_c1 = 0.0;
  double best_c2 = 0.0;
  for (int i = 0; i < grid_resolution; ++i) {
    const double c1 = -kRadius + i * step;
    for (int j = 0; j < grid_resolution; ++j) {
      const double c2 = -kRadius + j * step;
      if (c1 * c1 + c2 * c2 > kRadius * kRadius) continue;
      const double v = objective(c1, c2);
      if (v > best) {
        best = v;
        best_c1 = c1;
        best_c2 = c2;
      }
    }
  }

  // Alternating golden-section sweeps inside the winning grid cell's neighbourhood.
  double half_width = step;
  for (int sweep = 0; sweep < 60 && half_width > 1e-9; ++sweep) {
    best_c1 = golden_max([&](double c) { return objective(c, best_c2); }, best_c1 - half_width,
                         best_c1 + half_width, 1e-10);
    best_c2 = golden_max([&](double c) { return objective(best_c1, c); }, best_c2 - half_width,
                         best_c2 + half_width, 1e-10);
    half_width *= 0.5;
  }
  return best_c1 * mu + best_c2 * nu;
}

std::pair<VecX, VecX> differentiator_rhs(const VecX& e1, const VecX& e2, const DiffGains& gains,
                                         const HolderExponent& p) {
  VecX de1 = -gains.k1 * phi1(e1, p, gains.k3) + e2;
  VecX de2 = -gains.k2 * phi2(e1, p, gains.k3);
  return {std::move(de1), std::move(de2)};
}

double differentiator_lyapunov(const VecX& e1, const VecX& e2, const LyapunovPair& pair,
                               double k3, const HolderExponent& p) {
  const VecX z1 = phi1(e1, p, k3);
  return pair.p(0, 0) * z1.squaredNorm() + 2.0 * pair.p(0, 1) * z1.dot(e2) +
         pair.p(1, 1) * e2.squaredNorm();
}

}  // namespace ffts
