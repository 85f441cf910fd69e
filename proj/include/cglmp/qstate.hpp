#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cglmp/rng.hpp"

namespace cglmp {

using Cx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

constexpr double kNormTol = 1e-12;        // state normalization tolerance
constexpr double kKappaNormTol = 1e-9;    // tolerance on user-supplied kappa
constexpr double kSchmidtRankTol = 1e-9;  // default singular-value threshold

// Pure state of two d-level systems: |psi> = sum_{j,k} amps(j,k) |j>|k>.
// All states used here are diagonal (Schmidt form), but the full matrix is
// kept so rotated states share one representation.
struct PureTwoQuditState {
  int d;
  CMatrix amps;

  PureTwoQuditState(int dim, CMatrix a) : d(dim), amps(std::move(a)) {
    if (d < 2) throw std::invalid_argument("PureTwoQuditState: d < 2");
    if (amps.rows() != d || amps.cols() != d)
      throw std::invalid_argument("PureTwoQuditState: amps must be d x d");
    if (std::abs(amps.squaredNorm() - 1.0) > kNormTol)
      throw std::invalid_argument("PureTwoQuditState: not normalized");
  }
};

// Hyperspherical angles theta_1 .. theta_{d-1} of the diagonal Schmidt state.
struct SchmidtAngles {
  int d;
  std::vector<double> theta;

  SchmidtAngles(int dim, std::vector<double> t) : d(dim), theta(std::move(t)) {
    if (d < 2) throw std::invalid_argument("SchmidtAngles: d < 2");
    if (static_cast<int>(theta.size()) != d - 1)
      throw std::invalid_argument("SchmidtAngles: need d-1 angles, got " +
                                  std::to_string(theta.size()));
  }
};

// Two-angle qutrit parametrization used by the sweep:
// kappa = (sin b cos x, sin b sin x, cos b).
struct QutritBetaXi {
  double beta = 0.0;
  double xi = 0.0;
};

// Expands Schmidt angles into the d diagonal coefficients.
//   kappa_0 = cos t2 cos t1            (d=2: cos t1)
//   kappa_1 = cos t2 sin t1            (d=2: sin t1)
//   kappa_2 = sin t2 * prod_{j=3}^{d-1} sin t_j
//   kappa_m = sin t2 * cos t_{d+2-m} * prod_{j=3}^{d+1-m} sin t_j,  m=3..d-1
// Empty products are 1; the chain is normalized for any real angles.
inline std::vector<double> kappa_from_schmidt(const SchmidtAngles& a) {
  const int d = a.d;
  auto th = [&](int i) { return a.theta[i - 1]; };  // theta_i, 1-based
  std::vector<double> kappa(d);
  if (d == 2) {
    kappa[0] = std::cos(th(1));
    kappa[1] = std::sin(th(1));
    return kappa;
  }
  kappa[0] = std::cos(th(2)) * std::cos(th(1));
  kappa[1] = std::cos(th(2)) * std::sin(th(1));
  const double s2 = std::sin(th(2));
  {
    double prod = 1.0;
    for (int j = 3; j <= d - 1; ++j) prod *= std::sin(th(j));
    kappa[2] = s2 * prod;
  }
  for (int m = 3; m <= d - 1; ++m) {
    double prod = 1.0;
    for (int j = 3; j <= d + 1 - m; ++j) prod *= std::sin(th(j));
    kappa[m] = s2 * std::cos(th(d + 2 - m)) * prod;
  }
  return kappa;
}

// Diagonal state from explicit coefficients; input must already satisfy
// sum kappa^2 = 1 (within 1e-9). Coefficients may be any reals.
inline PureTwoQuditState state_from_kappa(const std::vector<double>& kappa) {
  const int d = static_cast<int>(kappa.size());
  if (d < 2) throw std::invalid_argument("state_from_kappa: need d >= 2");
  double sum = 0.0;
  for (double k : kappa) sum += k * k;
  if (std::abs(sum - 1.0) > kKappaNormTol)
    throw std::invalid_argument("state_from_kappa: sum kappa^2 != 1");
  CMatrix amps = CMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m) amps(m, m) = kappa[m] / std::sqrt(sum);
  return PureTwoQuditState(d, std::move(amps));
}

inline PureTwoQuditState state_from_schmidt(const SchmidtAngles& a) {
  return state_from_kappa(kappa_from_schmidt(a));
}

inline std::array<double, 3> kappa_from_beta_xi(const QutritBetaXi& p) {
  return {std::sin(p.beta) * std::cos(p.xi), std::sin(p.beta) * std::sin(p.xi),
          std::cos(p.beta)};
}

// Number of singular values of amps above tol. Rank 1 <=> product state.
inline int schmidt_rank(const PureTwoQuditState& s,
                        double tol = kSchmidtRankTol) {
  if (tol <= 0) throw std::invalid_argument("schmidt_rank: tol must be > 0");
  Eigen::JacobiSVD<CMatrix> svd(s.amps);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank;
}

// One draw of kappa with kappa^2 uniform on the probability simplex
// (positive roots). May be of any Schmidt rank.
inline std::vector<double> sample_simplex_kappa(int d, SplitMix64& rng) {
  std::vector<double> k2(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    k2[i] = rng.exponential();
    sum += k2[i];
  }
  std::vector<double> kappa(d);
  double norm2 = 0.0;
  for (int i = 0; i < d; ++i) {
    kappa[i] = std::sqrt(k2[i] / sum);
    norm2 += kappa[i] * kappa[i];
  }
  // renormalize away the sqrt rounding
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& k : kappa) k *= inv;
  return kappa;
}

// Simplex draw conditioned on entanglement (>= 2 coefficients above tol).
// Rejected draws are counted in *resamples when given.
inline std::vector<double> sample_entangled_kappa(int d, SplitMix64& rng,
                                                  double tol = kSchmidtRankTol,
                                                  int* resamples = nullptr) {
  for (;;) {
    std::vector<double> kappa = sample_simplex_kappa(d, rng);
    int nonzero = 0;
    for (double k : kappa)
      if (std::abs(k) > tol) ++nonzero;
    if (nonzero >= 2) return kappa;
    if (resamples) ++*resamples;
  }
}

}  // namespace cglmp
