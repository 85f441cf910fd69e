#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cglmp/qstate.hpp"
#include "cglmp/rng.hpp"

namespace cglmp {

constexpr double kUnitaryTol = 1e-12;

// Parameters of the SU(2)-embedded measurement: a 2x2 block
//   [[cos z,  sin z e^{-i p}],
//    [sin z e^{i p}, -cos z]]
// on levels {0,1}, identity elsewhere. Used for both parties (Alice's
// (zeta, phi) and Bob's (eta, varphi) share the form).
struct Su2BlockParams {
  double zeta = 0.0;
  double phi = 0.0;
};

// One plane rotation: identity except
//   [i][i] = cos a, [i][j] = -sin a e^{-i p},
//   [j][i] = sin a e^{i p}, [j][j] = cos a.
// Note the -sin off-diagonal; this differs from the su2 block's sign layout
// (see block_params_embedded for the exact mapping between the two).
struct GivensRotation {
  int i = 0;
  int j = 1;
  double angle = 0.0;
  double phase = 0.0;
};

// Full parametrization of a d x d unitary:
//   u = D * G_{01} * G_{02} * ... * G_{d-2,d-1}
// with the Givens factors in lexicographic (i,j) order, left to right, and
// D = diag(e^{i q_0}, ..., e^{i q_{d-1}}). Covers all of U(d); the global
// phase redundancy is harmless for probabilities.
struct FullUnitaryParams {
  int d;
  std::vector<GivensRotation> givens;
  std::vector<double> diag_phases;

  explicit FullUnitaryParams(int dim)
      : d(dim), diag_phases(static_cast<std::size_t>(dim), 0.0) {
    if (d < 2) throw std::invalid_argument("FullUnitaryParams: d < 2");
    givens.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) givens.push_back({i, j, 0.0, 0.0});
  }

  // flat layout used by the optimizer: all angles, all phases, diag phases
  std::size_t parameter_count() const { return givens.size() * 2 + diag_phases.size(); }
};

struct MeasurementUnitary {
  int d;
  CMatrix u;
};

inline MeasurementUnitary su2_block_unitary(int d, const Su2BlockParams& p) {
  if (d < 2) throw std::invalid_argument("su2_block_unitary: d < 2");
  CMatrix u = CMatrix::Identity(d, d);
  const double c = std::cos(p.zeta), s = std::sin(p.zeta);
  const Cx ph(std::cos(p.phi), std::sin(p.phi));
  u(0, 0) = c;
  u(0, 1) = s * std::conj(ph);
  u(1, 0) = s * ph;
  u(1, 1) = -c;
  return {d, std::move(u)};
}

inline void validate_params(const FullUnitaryParams& p) {
  const std::size_t expected = static_cast<std::size_t>(p.d) * (p.d - 1) / 2;
  if (p.givens.size() != expected)
    throw std::invalid_argument("FullUnitaryParams: expected " +
                                std::to_string(expected) + " rotations, got " +
                                std::to_string(p.givens.size()));
  if (p.diag_phases.size() != static_cast<std::size_t>(p.d))
    throw std::invalid_argument("FullUnitaryParams: need d diagonal phases");
  std::size_t idx = 0;
  for (int i = 0; i < p.d; ++i)
    for (int j = i + 1; j < p.d; ++j, ++idx) {
      const GivensRotation& g = p.givens[idx];
      if (g.i != i || g.j != j)
        throw std::invalid_argument(
            "FullUnitaryParams: rotations must be in lexicographic (i,j) "
            "order");
    }
}

inline MeasurementUnitary full_unitary(const FullUnitaryParams& p) {
  validate_params(p);
  CMatrix u = CMatrix::Identity(p.d, p.d);
  for (int k = 0; k < p.d; ++k) {
    u(k, k) = Cx(std::cos(p.diag_phases[k]), std::sin(p.diag_phases[k]));
  }
  for (const GivensRotation& g : p.givens) {
    // u <- u * G; G touches only columns i and j
    const double c = std::cos(g.angle), s = std::sin(g.angle);
    const Cx ph(std::cos(g.phase), std::sin(g.phase));
    for (int r = 0; r < p.d; ++r) {
      const Cx ui = u(r, g.i), uj = u(r, g.j);
      u(r, g.i) = ui * c + uj * s * ph;
      u(r, g.j) = -ui * s * std::conj(ph) + uj * c;
    }
  }
  return {p.d, std::move(u)};
}

// max |(u^dag u - I)_{jk}|
inline double verify_unitary(const MeasurementUnitary& m) {
  CMatrix dev = m.u.adjoint() * m.u - CMatrix::Identity(m.d, m.d);
  return dev.cwiseAbs().maxCoeff();
}

// Full parameters that rebuild the su2 block on an arbitrary (i0,i1) plane
// exactly: block(z, p) = D * G_{i0 i1}(z, p + pi) with D carrying -1 on
// level i1 (the sign conversion between the two conventions).
inline FullUnitaryParams block_params_embedded(int d, const Su2BlockParams& p,
                                               int i0 = 0, int i1 = 1) {
  if (!(0 <= i0 && i0 < i1 && i1 < d))
    throw std::invalid_argument("block_params_embedded: bad plane indices");
  FullUnitaryParams out(d);
  for (GivensRotation& g : out.givens) {
    if (g.i == i0 && g.j == i1) {
      g.angle = p.zeta;
      g.phase = p.phi + std::numbers::pi;
    }
  }
  out.diag_phases[i1] = std::numbers::pi;
  return out;
}

// Inverse of full_unitary: Givens-elimination factorization of any unitary
// into this parametrization. Column c of the remaining matrix is matched by
// the G_{c,j} factors (hyperspherical angles of the column), the leftover
// phases end up in a right diagonal, which is then commuted through to the
// left via G(a, p) D = D G(a, p + q_i - q_j).
inline FullUnitaryParams decompose_unitary(const CMatrix& u) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d || d < 2)
    throw std::invalid_argument("decompose_unitary: need square d>=2 matrix");
  FullUnitaryParams params(d);
  CMatrix w = u;
  std::vector<double> right_phases(d, 0.0);
  std::size_t idx = 0;
  for (int c = 0; c < d - 1; ++c) {
    // match column c of w with the product G_{c,c+1} ... G_{c,d-1} e^{i q_c}
    const double q = (std::abs(w(c, c)) > 0) ? std::arg(w(c, c)) : 0.0;
    right_phases[c] = q;
    // partial norms m_j = |w(c..j, c)|
    std::vector<double> m(d);
    double acc = std::norm(w(c, c));
    m[c] = std::sqrt(acc);
    for (int j = c + 1; j < d; ++j) {
      acc += std::norm(w(j, c));
      m[j] = std::sqrt(acc);
    }
    for (int j = c + 1; j < d; ++j, ++idx) {
      GivensRotation& g = params.givens[idx];
      const double a = std::atan2(std::abs(w(j, c)), m[j - 1]);
      g.angle = a;
      g.phase = (std::abs(w(j, c)) > 0) ? std::arg(w(j, c)) - q : 0.0;
      // peel the factor off: w <- G^dag w
      const double ca = std::cos(a), sa = std::sin(a);
      const Cx ph(std::cos(g.phase), std::sin(g.phase));
      for (int col = c; col < d; ++col) {
        const Cx wc = w(c, col), wj = w(j, col);
        w(c, col) = ca * wc + sa * std::conj(ph) * wj;
        w(j, col) = -sa * ph * wc + ca * wj;
      }
    }
  }
  right_phases[d - 1] = std::arg(w(d - 1, d - 1));
  // u = (prod G) * diag(e^{i q}); move the diagonal to the left
  for (GivensRotation& g : params.givens)
    g.phase += right_phases[g.i] - right_phases[g.j];
  params.diag_phases = right_phases;
  return params;
}

inline FullUnitaryParams random_full_params(int d, SplitMix64& rng) {
  FullUnitaryParams p(d);
  for (GivensRotation& g : p.givens) {
    g.angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    g.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  for (double& q : p.diag_phases) q = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

}  // namespace cglmp
