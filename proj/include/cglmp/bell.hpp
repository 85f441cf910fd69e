#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "cglmp/measure.hpp"
#include "cglmp/qstate.hpp"

namespace cglmp {

constexpr double kProbNegTol = 1e-12;  // float noise allowance below zero
constexpr double kProbSumTol = 1e-10;

// Joint outcome distribution P(A_a=k, B_b=l) for one setting pair.
// Entries are validated (>= -1e-12, sum 1) and clamped into [0,1]; anything
// more negative is a logic error, not rounding.
struct ProbabilityTable {
  int d;
  Eigen::MatrixXd p;

  ProbabilityTable(int dim, Eigen::MatrixXd probs)
      : d(dim), p(std::move(probs)) {
    if (p.rows() != d || p.cols() != d)
      throw std::invalid_argument("ProbabilityTable: must be d x d");
    double sum = 0.0;
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double& v = p(k, l);
        if (v < -kProbNegTol || v > 1.0 + kProbNegTol)
          throw std::invalid_argument(
              "ProbabilityTable: entry outside [0,1]: " + std::to_string(v));
        v = std::min(std::max(v, 0.0), 1.0);
        sum += v;
      }
    if (std::abs(sum - 1.0) > kProbSumTol)
      throw std::invalid_argument("ProbabilityTable: entries sum to " +
                                  std::to_string(sum));
  }
};

// Two measurement settings per party, all of one dimension.
struct SettingsQuad {
  MeasurementUnitary a1, a2, b1, b2;

  int dimension() const {
    if (a1.d != a2.d || a1.d != b1.d || a1.d != b2.d)
      throw std::invalid_argument("SettingsQuad: mixed dimensions");
    return a1.d;
  }
};

// One local deterministic assignment (extreme point of the LHV polytope).
struct DeterministicStrategy {
  int a1 = 0, a2 = 0, b1 = 0, b2 = 0;
};

// P(A_a=k, B_b=l) = |<kl| U(A) x U(B) |psi>|^2.
// With amps(j,m) the coefficient of |j>|m>, the amplitude matrix is
// uA * amps * uB^T (transpose, not adjoint: uB multiplies Bob's ket index),
// so the tensor product is never materialized.
inline ProbabilityTable joint_table(const PureTwoQuditState& state,
                                    const MeasurementUnitary& uA,
                                    const MeasurementUnitary& uB) {
  if (uA.d != state.d || uB.d != state.d)
    throw std::invalid_argument("joint_table: dimension mismatch");
  CMatrix amp = uA.u * state.amps * uB.u.transpose();
  return ProbabilityTable(state.d, amp.cwiseAbs2());
}

// P(A = B + m) = sum_j p[j][(j - m) mod d], outcomes differing by m mod d.
inline double prob_equal_shift(const ProbabilityTable& t, int m) {
  const int d = t.d;
  int mm = ((m % d) + d) % d;
  double sum = 0.0;
  for (int j = 0; j < d; ++j) sum += t.p(j, (j - mm + d) % d);
  return sum;
}

// P(B = A + c) on a table laid out as (A, B); equals prob_equal_shift(t, -c).
inline double prob_b_equals_a_plus(const ProbabilityTable& t, int c) {
  return prob_equal_shift(t, -c);
}

// P(A < B): strictly-lower comparison on raw outcome labels, no wrap.
inline double prob_a_less_b(const ProbabilityTable& t) {
  double sum = 0.0;
  for (int k = 0; k < t.d; ++k)
    for (int l = k + 1; l < t.d; ++l) sum += t.p(k, l);
  return sum;
}

inline double prob_b_less_a(const ProbabilityTable& t) {
  double sum = 0.0;
  for (int k = 0; k < t.d; ++k)
    for (int l = 0; l < k; ++l) sum += t.p(k, l);
  return sum;
}

// The four tables entering both functionals, indexed by setting pair.
struct TableQuad {
  ProbabilityTable t11;  // (A1, B1)
  ProbabilityTable t21;  // (A2, B1)
  ProbabilityTable t22;  // (A2, B2)
  ProbabilityTable t12;  // (A1, B2)

  int dimension() const { return t11.d; }
};

inline TableQuad tables_for(const PureTwoQuditState& state,
                            const SettingsQuad& s) {
  s.dimension();
  return {joint_table(state, s.a1, s.b1), joint_table(state, s.a2, s.b1),
          joint_table(state, s.a2, s.b2), joint_table(state, s.a1, s.b2)};
}

// Point-mass tables of a deterministic strategy; the same functional
// evaluators then serve the quantum and the classical side.
inline TableQuad tables_for(const DeterministicStrategy& s, int d) {
  auto point = [d](int a, int b) {
    if (a < 0 || a >= d || b < 0 || b >= d)
      throw std::invalid_argument("DeterministicStrategy: outcome out of range");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    p(a, b) = 1.0;
    return ProbabilityTable(d, std::move(p));
  };
  return {point(s.a1, s.b1), point(s.a2, s.b1), point(s.a2, s.b2),
          point(s.a1, s.b2)};
}

// I_d of the CGLMP functional:
//   sum_{k=0}^{[d/2]-1} (1 - 2k/(d-1)) *
//     { [P(A1=B1+k) + P(B1=A2+k+1) + P(A2=B2+k) + P(B2=A1+k)]
//     - [P(A1=B1-k-1) + P(B1=A2-k) + P(A2=B2-k-1) + P(B2=A1-k-1)] }
// For d=2 the single k=0 term has weight 1 (the CHSH form).
inline double cglmp_from_tables(const TableQuad& t) {
  const int d = t.dimension();
  double value = 0.0;
  for (int k = 0; k <= d / 2 - 1; ++k) {
    const double weight = 1.0 - 2.0 * k / (d - 1);
    const double plus = prob_equal_shift(t.t11, k) +
                        prob_b_equals_a_plus(t.t21, k + 1) +
                        prob_equal_shift(t.t22, k) +
                        prob_b_equals_a_plus(t.t12, k);
    const double minus = prob_equal_shift(t.t11, -k - 1) +
                         prob_b_equals_a_plus(t.t21, -k) +
                         prob_equal_shift(t.t22, -k - 1) +
                         prob_b_equals_a_plus(t.t12, -k - 1);
    value += weight * (plus - minus);
  }
  return value;
}

// Simplified (Gill) form: P(A2<B1) - P(A2<B2) - P(B2<A1) - P(A1<B1) <= 0.
inline double gill_from_tables(const TableQuad& t) {
  return prob_a_less_b(t.t21) - prob_a_less_b(t.t22) - prob_b_less_a(t.t12) -
         prob_a_less_b(t.t11);
}

inline double cglmp_value(const PureTwoQuditState& state,
                          const SettingsQuad& settings) {
  return cglmp_from_tables(tables_for(state, settings));
}

inline double gill_value(const PureTwoQuditState& state,
                         const SettingsQuad& settings) {
  return gill_from_tables(tables_for(state, settings));
}

enum class Functional { Cglmp, Gill };

struct LhvBound {
  double bound;
  DeterministicStrategy argmax;
  std::int64_t strategy_count;
};

// Exhaustive maximum over all d^4 deterministic strategies.
inline LhvBound lhv_bound_brute_force(int d, Functional f) {
  if (d < 2 || d > 10)
    throw std::invalid_argument("lhv_bound_brute_force: d must be in 2..10");
  LhvBound out{-std::numeric_limits<double>::infinity(), {}, 0};
  for (int a1 = 0; a1 < d; ++a1)
    for (int a2 = 0; a2 < d; ++a2)
      for (int b1 = 0; b1 < d; ++b1)
        for (int b2 = 0; b2 < d; ++b2) {
          DeterministicStrategy s{a1, a2, b1, b2};
          TableQuad t = tables_for(s, d);
          const double v =
              f == Functional::Cglmp ? cglmp_from_tables(t) : gill_from_tables(t);
          ++out.strategy_count;
          if (v > out.bound) {
            out.bound = v;
            out.argmax = s;
          }
        }
  return out;
}

// Largest gap between one party's outcome marginals across the other
// party's two settings; zero (to rounding) for any quantum model.
inline double no_signaling_from_tables(const TableQuad& t) {
  const int d = t.dimension();
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    // Alice's marginals: setting 1 under B1 vs B2, setting 2 under B1 vs B2
    worst = std::max(worst,
                     std::abs(t.t11.p.row(k).sum() - t.t12.p.row(k).sum()));
    worst = std::max(worst,
                     std::abs(t.t21.p.row(k).sum() - t.t22.p.row(k).sum()));
    // Bob's marginals: setting 1 under A1 vs A2, setting 2 under A1 vs A2
    worst = std::max(worst,
                     std::abs(t.t11.p.col(k).sum() - t.t21.p.col(k).sum()));
    worst = std::max(worst,
                     std::abs(t.t12.p.col(k).sum() - t.t22.p.col(k).sum()));
  }
  return worst;
}

inline double no_signaling_check(const PureTwoQuditState& state,
                                 const SettingsQuad& settings) {
  return no_signaling_from_tables(tables_for(state, settings));
}

}  // namespace cglmp
