#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cglmp/analytic.hpp"
#include "cglmp/bell.hpp"
#include "cglmp/measure.hpp"
#include "cglmp/nelder_mead.hpp"
#include "cglmp/parallel.hpp"
#include "cglmp/qstate.hpp"
#include "cglmp/rng.hpp"

namespace cglmp {

constexpr double kViolationMargin = 1e-9;  // best_value > 2 + this => violated

struct OptimizerConfig {
  int restarts = 16;
  int max_iters = 2000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  double simplex_scale = 0.5;  // initial simplex edge, radians

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts < 1");
    if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters < 1");
    if (tol <= 0) throw std::invalid_argument("OptimizerConfig: tol <= 0");
    if (simplex_scale <= 0)
      throw std::invalid_argument("OptimizerConfig: simplex_scale <= 0");
  }
};

// One free parametrization per setting.
struct FullSettingsParams {
  FullUnitaryParams a1, a2, b1, b2;

  explicit FullSettingsParams(int d) : a1(d), a2(d), b1(d), b2(d) {}
};

struct TraceEntry {
  int restart = 0;
  double value = 0.0;
  bool converged = false;
};

struct ViolationResult {
  double best_value = 0.0;
  std::variant<RestrictedSetting, FullSettingsParams> best_params;
  bool violated = false;
  double margin = 0.0;
  std::vector<TraceEntry> trace;
  // restricted path: relabel[j] = level that original level j was moved to
  // so the two largest |kappa| occupy levels 0,1
  std::vector<int> relabel;
};

// --- flat parameter vector <-> four unitaries ------------------------------

inline std::size_t settings_param_count(int d) {
  return 4 * static_cast<std::size_t>(d) * d;  // per unitary: 2*pairs + d = d^2
}

inline void pack_unitary(const FullUnitaryParams& p, Eigen::VectorXd& x,
                         std::size_t& at) {
  for (const GivensRotation& g : p.givens) x(at++) = g.angle;
  for (const GivensRotation& g : p.givens) x(at++) = g.phase;
  for (double q : p.diag_phases) x(at++) = q;
}

inline FullUnitaryParams unpack_unitary(int d, const Eigen::VectorXd& x,
                                        std::size_t& at) {
  FullUnitaryParams p(d);
  for (GivensRotation& g : p.givens) g.angle = x(at++);
  for (GivensRotation& g : p.givens) g.phase = x(at++);
  for (double& q : p.diag_phases) q = x(at++);
  return p;
}

inline Eigen::VectorXd pack_settings(const FullSettingsParams& s) {
  Eigen::VectorXd x(settings_param_count(s.a1.d));
  std::size_t at = 0;
  pack_unitary(s.a1, x, at);
  pack_unitary(s.a2, x, at);
  pack_unitary(s.b1, x, at);
  pack_unitary(s.b2, x, at);
  return x;
}

inline FullSettingsParams unpack_settings(int d, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(settings_param_count(d)))
    throw std::invalid_argument("unpack_settings: wrong parameter count");
  FullSettingsParams s(d);
  std::size_t at = 0;
  s.a1 = unpack_unitary(d, x, at);
  s.a2 = unpack_unitary(d, x, at);
  s.b1 = unpack_unitary(d, x, at);
  s.b2 = unpack_unitary(d, x, at);
  return s;
}

inline SettingsQuad build_settings(const FullSettingsParams& p) {
  return {full_unitary(p.a1), full_unitary(p.a2), full_unitary(p.b1),
          full_unitary(p.b2)};
}

// --- restricted (closed-form) maximization ---------------------------------

// bound - 2, written cancellation-free:
//   g_d * cos^2 t2 * sin^2 2t1 / (sqrt(1 + sin^2 2t1) + 1)
// with g_2 = 2, g_3 = 3/2, g_d = 1 + 1/(d-1) for d >= 4. Positive in exact
// and in floating arithmetic whenever sin 2t1 and cos t2 are nonzero.
inline double restricted_margin(double theta1, double theta2, int d) {
  if (d < 2) throw std::invalid_argument("restricted_margin: d < 2");
  const double s = std::sin(2 * theta1);
  const double r = std::sqrt(1 + s * s);
  const double g = d == 2 ? 2.0 : (d == 3 ? 1.5 : 1.0 + 1.0 / (d - 1));
  const double c2 = d == 2 ? 1.0 : std::cos(theta2) * std::cos(theta2);
  return g * c2 * s * s / (r + 1);
}

// Indices of kappa sorted by |kappa| descending (stable).
inline std::vector<int> descending_order(const std::vector<double>& kappa) {
  std::vector<int> order(kappa.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(kappa[a]) > std::abs(kappa[b]);
  });
  return order;
}

// Closed-form maximum over the restricted family after relabeling levels so
// the two largest |kappa| sit on 0,1. No search involved.
inline ViolationResult maximize_restricted_kappa(
    const std::vector<double>& kappa) {
  const int d = static_cast<int>(kappa.size());
  if (d < 2) throw std::invalid_argument("maximize_restricted: d < 2");
  const std::vector<int> order = descending_order(kappa);
  const double k0 = std::abs(kappa[order[0]]);
  const double k1 = std::abs(kappa[order[1]]);
  double rest = 0.0;
  for (int m = 2; m < d; ++m) rest += kappa[order[m]] * kappa[order[m]];
  const double theta1 = std::atan2(k1, k0);
  const double theta2 = std::atan2(std::sqrt(rest), std::sqrt(k0 * k0 + k1 * k1));

  ViolationResult res;
  res.best_value = restricted_bound(theta1, theta2, d);
  res.margin = restricted_margin(theta1, theta2, d);
  res.best_params = optimal_eta(theta1);
  res.violated = res.margin > kViolationMargin;
  res.trace = {{0, res.best_value, true}};
  res.relabel.resize(d);
  for (int slot = 0; slot < d; ++slot) res.relabel[order[slot]] = slot;
  return res;
}

inline ViolationResult maximize_restricted(const SchmidtAngles& angles) {
  return maximize_restricted_kappa(kappa_from_schmidt(angles));
}

// --- full-unitary maximization ----------------------------------------------

// Embeds the restricted optimum of the |kappa|-sorted state into full
// parameters for the given (unsorted, possibly signed/complex-diagonal)
// state: each block unitary is composed with the relabeling permutation and
// Alice's side absorbs the diagonal phases, so the warm start evaluates to
// the restricted bound exactly.
inline FullSettingsParams warm_start_settings(const PureTwoQuditState& state) {
  const int d = state.d;
  std::vector<double> mag(d);
  for (int m = 0; m < d; ++m) mag[m] = std::abs(state.amps(m, m));
  const std::vector<int> order = descending_order(mag);
  std::vector<int> slot(d);
  for (int r = 0; r < d; ++r) slot[order[r]] = r;

  const double theta1 = std::atan2(mag[order[1]], mag[order[0]]);
  const RestrictedSetting eta = optimal_eta(theta1);

  auto embed = [&](double block_angle, bool alice) {
    const MeasurementUnitary blk = su2_block_unitary(d, {block_angle, 0.0});
    CMatrix w(d, d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) w(k, j) = blk.u(k, slot[j]);
    if (alice) {
      for (int j = 0; j < d; ++j) {
        const Cx a = state.amps(j, j);
        if (std::abs(a) > 0) w.col(j) *= std::conj(a) / std::abs(a);
      }
    }
    return decompose_unitary(w);
  };

  FullSettingsParams s(d);
  s.a1 = embed(kRestrictedZeta1, true);
  s.a2 = embed(kRestrictedZeta2, true);
  s.b1 = embed(eta.eta1, false);
  s.b2 = embed(eta.eta2, false);
  return s;
}

// Multi-start simplex search over the 4 * d^2 setting parameters. Restart 0
// starts at the embedded restricted optimum, so the result never falls below
// it; the others start from seeded uniform draws. Each restart is polished
// by re-running the simplex with shrinking initial steps. Deterministic for
// a fixed seed regardless of thread count.
inline ViolationResult maximize_full(const PureTwoQuditState& state,
                                     const OptimizerConfig& cfg,
                                     int threads = 1) {
  const int d = state.d;
  if (d < 2 || d > 8)
    throw std::invalid_argument("maximize_full: d must be in 2..8");
  cfg.validate();

  auto objective = [&state, d](const Eigen::VectorXd& x) {
    return -cglmp_value(state, build_settings(unpack_settings(d, x)));
  };

  const Eigen::VectorXd warm = pack_settings(warm_start_settings(state));

  struct RestartOut {
    double value;
    Eigen::VectorXd x;
    bool converged;
  };
  std::vector<RestartOut> outs(cfg.restarts);

  parallel_for(cfg.restarts, threads, [&](std::int64_t r) {
    Eigen::VectorXd x0;
    if (r == 0) {
      x0 = warm;
    } else {
      SplitMix64 rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      FullSettingsParams p(d);
      p.a1 = random_full_params(d, rng);
      p.a2 = random_full_params(d, rng);
      p.b1 = random_full_params(d, rng);
      p.b2 = random_full_params(d, rng);
      x0 = pack_settings(p);
    }
    NelderMeadOptions opt;
    opt.max_iters = cfg.max_iters;
    opt.f_tol = cfg.tol;
    opt.initial_step = cfg.simplex_scale;
    NelderMeadResult best = nelder_mead(objective, x0, opt);
    for (double shrink : {0.2, 0.04}) {
      opt.initial_step = cfg.simplex_scale * shrink;
      NelderMeadResult next = nelder_mead(objective, best.x, opt);
      if (next.f <= best.f) best = std::move(next);
    }
    outs[r] = {-best.f, std::move(best.x), best.converged};
  });

  int arg = 0;
  for (int r = 1; r < cfg.restarts; ++r)
    if (outs[r].value > outs[arg].value) arg = r;

  ViolationResult res;
  res.best_value = outs[arg].value;
  res.best_params = unpack_settings(d, outs[arg].x);
  res.margin = res.best_value - 2.0;
  res.violated = res.best_value > 2.0 + kViolationMargin;
  res.trace.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r)
    res.trace.push_back({r, outs[r].value, outs[r].converged});
  return res;
}

// --- randomized Gisin scan ---------------------------------------------------

struct ScanRow {
  std::vector<double> kappa;
  double restricted_value = 0.0;
  double margin = 0.0;
  bool has_full = false;
  double full_value = 0.0;
};

struct ScanReport {
  int d = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  bool full = false;
  int resamples = 0;
  double min_margin = 0.0;
  bool all_violated = false;
  std::vector<ScanRow> rows;
};

// Samples entangled Schmidt states and evaluates the analytic restricted
// maximum for each (optionally also the full-unitary search). Passes iff
// every sample has margin > 0: that is the theorem on the sampled set.
inline ScanReport gisin_scan(int d, int samples, const OptimizerConfig& cfg,
                             bool full = false, int threads = 1) {
  if (d < 2 || d > 6)
    throw std::invalid_argument("gisin_scan: d must be in 2..6");
  if (samples < 1) throw std::invalid_argument("gisin_scan: samples < 1");

  ScanReport rep;
  rep.d = d;
  rep.samples = samples;
  rep.seed = cfg.seed;
  rep.full = full;
  rep.rows.resize(samples);
  std::vector<int> resamples(samples, 0);

  parallel_for(samples, threads, [&](std::int64_t i) {
    SplitMix64 rng(substream_seed(cfg.seed, 2 * static_cast<std::uint64_t>(i)));
    ScanRow row;
    row.kappa = sample_entangled_kappa(d, rng, kSchmidtRankTol, &resamples[i]);
    ViolationResult vr = maximize_restricted_kappa(row.kappa);
    row.restricted_value = vr.best_value;
    row.margin = vr.margin;
    if (full) {
      OptimizerConfig sub = cfg;
      sub.seed = substream_seed(cfg.seed, 2 * static_cast<std::uint64_t>(i) + 1);
      row.has_full = true;
      row.full_value = maximize_full(state_from_kappa(row.kappa), sub).best_value;
    }
    rep.rows[i] = std::move(row);
  });

  rep.resamples = std::accumulate(resamples.begin(), resamples.end(), 0);
  rep.min_margin = rep.rows.front().margin;
  rep.all_violated = true;
  for (const ScanRow& row : rep.rows) {
    rep.min_margin = std::min(rep.min_margin, row.margin);
    if (!(row.margin > 0.0)) rep.all_violated = false;
  }
  return rep;
}

// --- two-qutrit sweep ---------------------------------------------------------

struct Fig1Row {
  double beta = 0.0;
  double xi = 0.0;
  double kappa0 = 0.0, kappa1 = 0.0, kappa2 = 0.0;
  double i3_full = 0.0;
  double i3_restricted = 0.0;
  double i3_rough = 0.0;
};

inline std::vector<double> fig1_default_betas() {
  const double pi = std::numbers::pi;
  return {pi / 12, pi / 6, pi / 4, pi / 3, 5 * pi / 12, pi / 2};
}

// For each beta and a uniform xi grid over [0, pi/2], emits the full-search,
// restricted, and fitted I_3 of the (beta, xi) state.
inline std::vector<Fig1Row> fig1_sweep(const std::vector<double>& betas,
                                       int xi_grid, const OptimizerConfig& cfg,
                                       int threads = 1) {
  if (xi_grid < 2) throw std::invalid_argument("fig1_sweep: grid must be >= 2");
  if (betas.empty()) throw std::invalid_argument("fig1_sweep: no beta values");

  const std::int64_t n = static_cast<std::int64_t>(betas.size()) * xi_grid;
  std::vector<Fig1Row> rows(n);
  parallel_for(n, threads, [&](std::int64_t i) {
    const std::size_t b = static_cast<std::size_t>(i) / xi_grid;
    const int g = static_cast<int>(i % xi_grid);
    Fig1Row row;
    row.beta = betas[b];
    row.xi = (std::numbers::pi / 2) * g / (xi_grid - 1);
    const auto kappa = kappa_from_beta_xi({row.beta, row.xi});
    row.kappa0 = kappa[0];
    row.kappa1 = kappa[1];
    row.kappa2 = kappa[2];
    std::vector<double> kv(kappa.begin(), kappa.end());
    row.i3_restricted = maximize_restricted_kappa(kv).best_value;
    row.i3_rough = empirical_i3_rough(kappa[0], kappa[1], kappa[2]);
    OptimizerConfig sub = cfg;
    sub.seed = substream_seed(cfg.seed, static_cast<std::uint64_t>(i));
    row.i3_full = maximize_full(state_from_kappa(kv), sub).best_value;
    rows[i] = row;
  });
  return rows;
}

}  // namespace cglmp
