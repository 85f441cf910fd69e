#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cglmp/bell.hpp"
#include "cglmp/measure.hpp"

namespace cglmp {

// Bob's two free angles in the restricted (su2-block) setting family.
// Alice's angles are the fixed constants below, all phases zero.
struct RestrictedSetting {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

inline constexpr double kRestrictedZeta1 = 0.0;
inline constexpr double kRestrictedZeta2 = std::numbers::pi / 4;

// The four block unitaries of the restricted family.
inline SettingsQuad restricted_settings(int d, const RestrictedSetting& s) {
  return {su2_block_unitary(d, {kRestrictedZeta1, 0.0}),
          su2_block_unitary(d, {kRestrictedZeta2, 0.0}),
          su2_block_unitary(d, {s.eta1, 0.0}),
          su2_block_unitary(d, {s.eta2, 0.0})};
}

// Restricted-setting I_2:
//   cos 2e1 - sin 2t1 sin 2e1 + cos 2e2 + sin 2t1 sin 2e2
inline double i2_closed_form(double theta1, double eta1, double eta2) {
  const double s = std::sin(2 * theta1);
  return std::cos(2 * eta1) - s * std::sin(2 * eta1) + std::cos(2 * eta2) +
         s * std::sin(2 * eta2);
}

// Restricted-setting I_3:
//   1/4 (2 + 3 cos 2e1 - 3 sin 2t1 sin 2e1 + 3 cos 2e2 + 3 sin 2t1 sin 2e2)
//     * cos^2 t2 + 2 sin^2 t2
inline double i3_closed_form(double theta1, double theta2, double eta1,
                             double eta2) {
  const double s = std::sin(2 * theta1);
  const double c2 = std::cos(theta2) * std::cos(theta2);
  const double s2 = std::sin(theta2) * std::sin(theta2);
  const double inner = 2 + 3 * std::cos(2 * eta1) - 3 * s * std::sin(2 * eta1) +
                       3 * std::cos(2 * eta2) + 3 * s * std::sin(2 * eta2);
  return 0.25 * inner * c2 + 2 * s2;
}

// Restricted-setting I_d for d >= 4. Working the functional's band weights
// through the block measurement leaves two contributing bands: the main
// diagonal band (weight 1) and the first off-band picking up the 2x2
// corners with weight w1 = 1 - 2/(d-1). With
//   X = cos 2e1 - sin 2t1 sin 2e1 + cos 2e2 + sin 2t1 sin 2e2
// the value is
//   1/4 ((2 + 2 w1) + (3 - w1) X) cos^2 t2 + 2 sin^2 t2,
// which also reproduces the d=2 (w1=-1) and d=3 (w1=0) expressions.
inline double id_closed_form(double theta1, double theta2, double eta1,
                             double eta2, int d) {
  if (d < 4) throw std::invalid_argument("id_closed_form: d must be >= 4");
  const double w1 = 1.0 - 2.0 / (d - 1);
  const double s = std::sin(2 * theta1);
  const double c2 = std::cos(theta2) * std::cos(theta2);
  const double s2 = std::sin(theta2) * std::sin(theta2);
  const double x = std::cos(2 * eta1) - s * std::sin(2 * eta1) +
                   std::cos(2 * eta2) + s * std::sin(2 * eta2);
  return 0.25 * ((2 + 2 * w1) + (3 - w1) * x) * c2 + 2 * s2;
}

// Per-dimension dispatch; theta2 is ignored for d=2.
inline double closed_form_value(int d, double theta1, double theta2,
                                double eta1, double eta2) {
  if (d < 2) throw std::invalid_argument("closed_form_value: d < 2");
  if (d == 2) return i2_closed_form(theta1, eta1, eta2);
  if (d == 3) return i3_closed_form(theta1, theta2, eta1, eta2);
  return id_closed_form(theta1, theta2, eta1, eta2, d);
}

// Maximum of the closed form over (eta1, eta2), attained at optimal_eta:
//   d=2 : 2 sqrt(1 + sin^2 2t1)
//   d=3 : 1/2 (1 + 3 sqrt(1 + sin^2 2t1)) cos^2 t2 + 2 sin^2 t2
//   d>=4: 1/4 ((2 + 2 w1) + 2 (3 - w1) sqrt(1 + sin^2 2t1)) cos^2 t2
//           + 2 sin^2 t2,   w1 = 1 - 2/(d-1)
// Strictly above 2 whenever t1 is not a multiple of pi/2 and cos t2 != 0;
// that margin is the analytic content of the theorem.
inline double restricted_bound(double theta1, double theta2, int d) {
  if (d < 2) throw std::invalid_argument("restricted_bound: d < 2");
  const double root = std::sqrt(1 + std::pow(std::sin(2 * theta1), 2));
  if (d == 2) return 2 * root;
  const double c2 = std::cos(theta2) * std::cos(theta2);
  const double s2 = std::sin(theta2) * std::sin(theta2);
  if (d == 3) return 0.5 * (1 + 3 * root) * c2 + 2 * s2;
  const double w1 = 1.0 - 2.0 / (d - 1);
  return 0.25 * ((2 + 2 * w1) + 2 * (3 - w1) * root) * c2 + 2 * s2;
}

// Stationary point of the closed forms in (eta1, eta2):
//   tan 2e = -/+ sin 2t1  =>  e1 = -1/2 atan(sin 2t1), e2 = +1/2 atan(...).
// restricted_bound is attained there.
inline RestrictedSetting optimal_eta(double theta1) {
  const double e = 0.5 * std::atan(std::sin(2 * theta1));
  return {-e, e};
}

// Full-angle variant eta1 = -atan(sin 2t1), without the 1/2 factor. Kept
// for side-by-side diagnostic reporting; it does not maximize the closed
// forms (stationarity gives tan 2e1 = -sin 2t1).
inline RestrictedSetting literal_optimal_eta(double theta1) {
  const double e = std::atan(std::sin(2 * theta1));
  return {-e, e};
}

// Power-sum fit of the two-qutrit sweep:
//   I1 = sum kappa^4, I2 = sum kappa^6,
//   0.5491 + 0.9344 I1^2.3682 + 2.5871 I2^-0.031 - 2.0636 I1^2.6375 I2^-0.6455
inline double empirical_i3_rough(double k0, double k1, double k2) {
  const double n = k0 * k0 + k1 * k1 + k2 * k2;
  if (std::abs(n - 1.0) > kKappaNormTol)
    throw std::invalid_argument("empirical_i3_rough: kappa not normalized");
  const double p1 = std::pow(k0, 4) + std::pow(k1, 4) + std::pow(k2, 4);
  const double p2 = std::pow(k0, 6) + std::pow(k1, 6) + std::pow(k2, 6);
  return 0.5491 + 0.9344 * std::pow(p1, 2.3682) +
         2.5871 * std::pow(p2, -0.031) -
         2.0636 * std::pow(p1, 2.6375) * std::pow(p2, -0.6455);
}

}  // namespace cglmp
