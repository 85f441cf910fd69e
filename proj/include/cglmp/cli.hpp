#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "cglmp/analytic.hpp"
#include "cglmp/bell.hpp"
#include "cglmp/io.hpp"
#include "cglmp/optimize.hpp"
#include "cglmp/parallel.hpp"
#include "cglmp/qstate.hpp"

namespace cglmp::cli {

using nlohmann::ordered_json;

// stable exit-code contract
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr double kSpotBeta = std::numbers::pi / 6;
constexpr double kSpotXi = 2 * std::numbers::pi / 15;
constexpr double kSpotValue = 2.5366;
constexpr double kSpotTol = 5e-4;

// ---------------------------------------------------------------- verify-analytic

struct VerifyAnalyticOptions {
  int d = 3;
  int grid = 50;     // eta-grid resolution per axis
  std::uint64_t seed = 0;
  bool json = false; // machine-readable failure list
};

struct CheckLine {
  std::string name;
  double deviation;
  double tolerance;
  bool pass;
};

inline int cmd_verify_analytic(const VerifyAnalyticOptions& o,
                               std::ostream& out) {
  const double pi = std::numbers::pi;
  SplitMix64 rng(o.seed);
  std::vector<CheckLine> checks;

  auto random_thetas = [&]() {
    std::vector<double> th(o.d - 1);
    for (double& t : th) t = rng.uniform(0, pi / 2);
    return th;
  };

  // closed form vs the measurement pipeline
  {
    double worst = 0;
    const int draws = 100 * o.grid;
    for (int i = 0; i < draws; ++i) {
      const std::vector<double> th = random_thetas();
      const double e1 = rng.uniform(-pi, pi), e2 = rng.uniform(-pi, pi);
      const double t2 = o.d == 2 ? 0.0 : th[1];
      const double cf = closed_form_value(o.d, th[0], t2, e1, e2);
      const double num = cglmp_value(state_from_schmidt(SchmidtAngles(o.d, th)),
                                     restricted_settings(o.d, {e1, e2}));
      worst = std::max(worst, std::abs(cf - num));
    }
    checks.push_back({"closed-form vs pipeline", worst, 1e-9, worst <= 1e-9});
  }

  // bound attained at the stationary angles
  {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double t1 = rng.uniform(0, pi / 2);
      const double t2 = o.d == 2 ? 0.0 : rng.uniform(0, pi / 2);
      const RestrictedSetting eta = optimal_eta(t1);
      const double cf = closed_form_value(o.d, t1, t2, eta.eta1, eta.eta2);
      worst = std::max(worst, std::abs(cf - restricted_bound(t1, t2, o.d)));
    }
    checks.push_back({"bound attainment at stationary eta", worst, 1e-12,
                      worst <= 1e-12});
  }

  // no eta-grid point exceeds the bound
  {
    double worst = -1e300;
    for (int i = 0; i < 25; ++i) {
      const double t1 = rng.uniform(0, pi / 2);
      const double t2 = o.d == 2 ? 0.0 : rng.uniform(0, pi / 2);
      const double bound = restricted_bound(t1, t2, o.d);
      for (int a = 0; a < o.grid; ++a)
        for (int b = 0; b < o.grid; ++b) {
          const double e1 = -pi / 2 + pi * a / (o.grid - 1);
          const double e2 = -pi / 2 + pi * b / (o.grid - 1);
          worst = std::max(worst,
                           closed_form_value(o.d, t1, t2, e1, e2) - bound);
        }
    }
    checks.push_back({"eta-grid exceedance over bound", worst, 1e-9,
                      worst <= 1e-9});
  }

  // strict violation margin away from the product boundary
  {
    double min_margin = 1e300;
    for (int i = 0; i < 100 * o.grid; ++i) {
      const double t1 = rng.uniform(0.05, pi / 2 - 0.05);
      const double t2 = o.d == 2 ? 0.0 : rng.uniform(0, pi / 2 - 0.05);
      min_margin = std::min(min_margin, restricted_margin(t1, t2, o.d));
    }
    checks.push_back({"strict violation margin (sampled interior)",
                      min_margin, 0.0, min_margin > 0.0});
  }

  bool all_pass = true;
  for (const CheckLine& c : checks) all_pass = all_pass && c.pass;

  if (o.json) {
    ordered_json j;
    j["command"] = "verify-analytic";
    j["d"] = o.d;
    j["grid"] = o.grid;
    j["seed"] = o.seed;
    j["checks"] = ordered_json::array();
    for (const CheckLine& c : checks)
      j["checks"].push_back({{"name", c.name},
                             {"deviation", c.deviation},
                             {"tolerance", c.tolerance},
                             {"pass", c.pass}});
    j["pass"] = all_pass;
    out << j.dump(2) << "\n";
    return all_pass ? kExitOk : kExitCheckFailed;
  }

  out << "verify-analytic d=" << o.d << " grid=" << o.grid
      << " seed=" << o.seed << "\n";
  for (const CheckLine& c : checks)
    out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
        << ": deviation " << fmt_g17(c.deviation) << " (tolerance "
        << fmt_g17(c.tolerance) << ")\n";

  // the two eta conventions, side by side
  out << "  stationary vs full-angle eta1 (d=" << o.d << "):\n";
  out << "    theta1       eta1(stat)    I(stat)       eta1(full)    "
         "I(full)       bound\n";
  for (double t1 : {pi / 8, pi / 6, pi / 4}) {
    const RestrictedSetting st = optimal_eta(t1);
    const RestrictedSetting lit = literal_optimal_eta(t1);
    const double t2 = 0.0;
    char line[256];
    std::snprintf(line, sizeof line,
                  "    %-12.9f %-13.9f %-13.9f %-13.9f %-13.9f %-13.9f\n", t1,
                  st.eta1, closed_form_value(o.d, t1, t2, st.eta1, st.eta2),
                  lit.eta1, closed_form_value(o.d, t1, t2, lit.eta1, lit.eta2),
                  restricted_bound(t1, t2, o.d));
    out << line;
  }
  out << (all_pass ? "verify-analytic: PASS\n" : "verify-analytic: FAIL\n");
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- lhv-bound

struct LhvBoundOptions {
  int d = 3;
  Functional functional = Functional::Cglmp;
};

inline int cmd_lhv_bound(const LhvBoundOptions& o, std::ostream& out) {
  const LhvBound res = lhv_bound_brute_force(o.d, o.functional);
  const bool is_cglmp = o.functional == Functional::Cglmp;
  const double expected = is_cglmp ? 2.0 : 0.0;
  const bool pass = std::abs(res.bound - expected) <= 1e-12;
  out << "lhv-bound d=" << o.d << " functional="
      << (is_cglmp ? "cglmp" : "gill") << "\n";
  out << "  bound = " << fmt_g17(res.bound) << " (expected "
      << fmt_g17(expected) << ")\n";
  out << "  strategies enumerated = " << res.strategy_count << "\n";
  out << "  maximizing strategy: a1=" << res.argmax.a1
      << " a2=" << res.argmax.a2 << " b1=" << res.argmax.b1
      << " b2=" << res.argmax.b2 << "\n";
  out << (pass ? "lhv-bound: PASS\n" : "lhv-bound: FAIL\n");
  return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- gisin-scan

struct GisinScanOptions {
  int d = 3;
  int samples = 1000;
  bool full = false;
  OptimizerConfig opt;
  std::string out_path;       // empty: no file
  std::string format = "csv"; // csv | json
  int threads = 0;
};

inline CsvTable scan_csv_table(const ScanReport& rep) {
  CsvTable t;
  t.header.push_back("sample");
  for (int m = 0; m < rep.d; ++m)
    t.header.push_back("kappa" + std::to_string(m));
  t.header.push_back("restricted");
  t.header.push_back("margin");
  if (rep.full) t.header.push_back("full");
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const ScanRow& r = rep.rows[i];
    std::vector<double> row;
    row.push_back(static_cast<double>(i));
    row.insert(row.end(), r.kappa.begin(), r.kappa.end());
    row.push_back(r.restricted_value);
    row.push_back(r.margin);
    if (rep.full) row.push_back(r.full_value);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline ordered_json scan_json_report(const ScanReport& rep) {
  ordered_json j;
  j["config"] = {{"command", "gisin-scan"},
                 {"d", rep.d},
                 {"samples", rep.samples},
                 {"seed", rep.seed},
                 {"full", rep.full}};
  j["rows"] = ordered_json::array();
  for (const ScanRow& r : rep.rows) {
    ordered_json row = {{"kappa", r.kappa},
                        {"restricted", r.restricted_value},
                        {"margin", r.margin}};
    if (r.has_full) row["full"] = r.full_value;
    j["rows"].push_back(std::move(row));
  }
  j["summary"] = {{"min_margin", rep.min_margin},
                  {"all_violated", rep.all_violated},
                  {"resamples", rep.resamples}};
  return j;
}

inline int cmd_gisin_scan(const GisinScanOptions& o, std::ostream& out) {
  const int threads = resolve_threads(o.threads);
  const ScanReport rep = gisin_scan(o.d, o.samples, o.opt, o.full, threads);

  if (!o.out_path.empty()) {
    try {
      if (o.format == "json")
        write_text_file(o.out_path, scan_json_report(rep).dump(2) + "\n");
      else
        write_text_file(o.out_path, emit_csv(scan_csv_table(rep)));
    } catch (const std::runtime_error& e) {
      out << "gisin-scan: io error: " << e.what() << "\n";
      return kExitIo;
    }
  }

  out << "gisin-scan d=" << rep.d << " samples=" << rep.samples
      << " seed=" << rep.seed << (rep.full ? " full" : "") << "\n";
  out << "  resamples (rank<2 draws rejected) = " << rep.resamples << "\n";
  out << "  min margin = " << fmt_g17(rep.min_margin) << "\n";
  if (rep.full) {
    double worst_gap = 1e300;
    for (const ScanRow& r : rep.rows)
      worst_gap = std::min(worst_gap, r.full_value - r.restricted_value);
    out << "  min (full - restricted) = " << fmt_g17(worst_gap) << "\n";
  }
  out << "  all entangled samples violate: "
      << (rep.all_violated ? "yes" : "NO") << "\n";
  out << (rep.all_violated ? "gisin-scan: PASS\n" : "gisin-scan: FAIL\n");
  return rep.all_violated ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- fig1

struct Fig1Options {
  int grid = 41;  // xi points per curve
  OptimizerConfig opt;
  std::string out_path = "fig1.csv";
  std::string format = "csv";
  std::string svg_path;  // empty: no plot
  int threads = 0;
};

inline CsvTable fig1_csv_table(const std::vector<Fig1Row>& rows) {
  CsvTable t;
  t.header = {"beta",    "xi",      "kappa0",        "kappa1",
              "kappa2",  "i3_full", "i3_restricted", "i3_rough"};
  for (const Fig1Row& r : rows)
    t.rows.push_back({r.beta, r.xi, r.kappa0, r.kappa1, r.kappa2, r.i3_full,
                      r.i3_restricted, r.i3_rough});
  return t;
}

inline ordered_json fig1_json_rows(const std::vector<Fig1Row>& rows) {
  ordered_json arr = ordered_json::array();
  for (const Fig1Row& r : rows)
    arr.push_back({{"beta", r.beta},
                   {"xi", r.xi},
                   {"kappa0", r.kappa0},
                   {"kappa1", r.kappa1},
                   {"kappa2", r.kappa2},
                   {"i3_full", r.i3_full},
                   {"i3_restricted", r.i3_restricted},
                   {"i3_rough", r.i3_rough}});
  return arr;
}

// Minimal line chart: one i3_full curve per beta, reference line at 2.
inline std::string fig1_svg(const std::vector<Fig1Row>& rows) {
  const double W = 800, H = 560, ml = 70, mr = 20, mt = 20, mb = 50;
  double ymin = 1.95, ymax = 2.05;
  for (const Fig1Row& r : rows) {
    ymin = std::min(ymin, r.i3_full - 0.02);
    ymax = std::max(ymax, r.i3_full + 0.02);
  }
  const double xmax = std::numbers::pi / 2;
  auto px = [&](double xi) { return ml + (W - ml - mr) * xi / xmax; };
  auto py = [&](double v) {
    return H - mb - (H - mt - mb) * (v - ymin) / (ymax - ymin);
  };
  const char* palette[] = {"#d62728", "#ff7f0e", "#2ca02c",
                           "#1f77b4", "#9467bd", "#8c564b"};
  std::string s;
  s += "<svg xmlns='http://www.w3.org/2000/svg' width='" + fmt_g17(W) +
       "' height='" + fmt_g17(H) + "'>\n";
  s += "<rect width='100%' height='100%' fill='white'/>\n";
  // axes and classical bound
  s += "<line x1='" + fmt_g17(ml) + "' y1='" + fmt_g17(H - mb) + "' x2='" +
       fmt_g17(W - mr) + "' y2='" + fmt_g17(H - mb) +
       "' stroke='black'/>\n";
  s += "<line x1='" + fmt_g17(ml) + "' y1='" + fmt_g17(mt) + "' x2='" +
       fmt_g17(ml) + "' y2='" + fmt_g17(H - mb) + "' stroke='black'/>\n";
  s += "<line x1='" + fmt_g17(ml) + "' y1='" + fmt_g17(py(2.0)) + "' x2='" +
       fmt_g17(W - mr) + "' y2='" + fmt_g17(py(2.0)) +
       "' stroke='gray' stroke-dasharray='6,4'/>\n";
  s += "<text x='" + fmt_g17(W / 2) + "' y='" + fmt_g17(H - 12) +
       "' text-anchor='middle'>xi (rad)</text>\n";
  s += "<text x='18' y='" + fmt_g17(H / 2) +
       "' text-anchor='middle' transform='rotate(-90 18 " + fmt_g17(H / 2) +
       ")'>I3 (full search)</text>\n";

  std::vector<double> betas;
  for (const Fig1Row& r : rows)
    if (std::find(betas.begin(), betas.end(), r.beta) == betas.end())
      betas.push_back(r.beta);
  for (std::size_t b = 0; b < betas.size(); ++b) {
    std::string pts;
    for (const Fig1Row& r : rows)
      if (r.beta == betas[b])
        pts += fmt_g17(px(r.xi)) + "," + fmt_g17(py(r.i3_full)) + " ";
    s += "<polyline fill='none' stroke='" +
         std::string(palette[b % 6]) + "' stroke-width='1.5' points='" + pts +
         "'/>\n";
    s += "<text x='" + fmt_g17(W - mr - 120) + "' y='" +
         fmt_g17(mt + 18.0 * (b + 1)) + "' fill='" +
         std::string(palette[b % 6]) + "'>beta=" + fmt_g17(betas[b]) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

inline int cmd_fig1(const Fig1Options& o, std::ostream& out) {
  const int threads = resolve_threads(o.threads);
  const std::vector<Fig1Row> rows =
      fig1_sweep(fig1_default_betas(), o.grid, o.opt, threads);

  try {
    if (o.format == "json")
      write_text_file(o.out_path, fig1_json_rows(rows).dump(2) + "\n");
    else
      write_text_file(o.out_path, emit_csv(fig1_csv_table(rows)));
    if (!o.svg_path.empty()) write_text_file(o.svg_path, fig1_svg(rows));
  } catch (const std::runtime_error& e) {
    out << "fig1: io error: " << e.what() << "\n";
    return kExitIo;
  }

  const auto spot = kappa_from_beta_xi({kSpotBeta, kSpotXi});
  const double rough = empirical_i3_rough(spot[0], spot[1], spot[2]);
  const bool spot_pass = std::abs(rough - kSpotValue) <= kSpotTol;
  out << "fig1: " << rows.size() << " rows -> " << o.out_path << "\n";
  out << "  spot check I3_rough(beta=pi/6, xi=2pi/15) = " << fmt_g17(rough)
      << " vs " << fmt_g17(kSpotValue) << " +/- " << fmt_g17(kSpotTol) << " "
      << (spot_pass ? "PASS" : "FAIL") << "\n";
  return spot_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- empirical-check

struct EmpiricalCheckOptions {
  int grid = 9;  // (beta, xi) grid per axis
  OptimizerConfig opt;
  int threads = 0;
};

inline int cmd_empirical_check(const EmpiricalCheckOptions& o,
                               std::ostream& out) {
  const double pi = std::numbers::pi;
  const int threads = resolve_threads(o.threads);
  const std::int64_t n = static_cast<std::int64_t>(o.grid) * o.grid;
  std::vector<double> residual(n);
  parallel_for(n, threads, [&](std::int64_t i) {
    const int a = static_cast<int>(i) / o.grid, b = static_cast<int>(i) % o.grid;
    const double beta = (pi / 2) * a / (o.grid - 1);
    const double xi = (pi / 2) * b / (o.grid - 1);
    const auto k = kappa_from_beta_xi({beta, xi});
    OptimizerConfig sub = o.opt;
    sub.seed = substream_seed(o.opt.seed, static_cast<std::uint64_t>(i));
    const double full =
        maximize_full(state_from_kappa({k[0], k[1], k[2]}), sub).best_value;
    residual[i] = std::abs(empirical_i3_rough(k[0], k[1], k[2]) - full);
  });
  double max_res = 0, mean_res = 0;
  for (double r : residual) {
    max_res = std::max(max_res, r);
    mean_res += r;
  }
  mean_res /= static_cast<double>(n);

  const auto spot = kappa_from_beta_xi({kSpotBeta, kSpotXi});
  const double rough = empirical_i3_rough(spot[0], spot[1], spot[2]);
  const bool spot_pass = std::abs(rough - kSpotValue) <= kSpotTol;

  // two reference points: concentrated and uniform kappa
  const double at_product = empirical_i3_rough(1, 0, 0);
  const double u = 1 / std::sqrt(3.0);
  OptimizerConfig sub = o.opt;
  sub.seed = substream_seed(o.opt.seed, static_cast<std::uint64_t>(n) + 1);
  const double full_uniform =
      maximize_full(state_from_kappa({u, u, u}), sub, threads).best_value;

  out << "empirical-check grid=" << o.grid << "x" << o.grid
      << " seed=" << o.opt.seed << "\n";
  out << "  |rough - full| residual: max = " << fmt_g17(max_res)
      << ", mean = " << fmt_g17(mean_res) << " (informational)\n";
  out << "  rough at kappa=(1,0,0) = " << fmt_g17(at_product) << "\n";
  out << "  uniform kappa: rough = " << fmt_g17(empirical_i3_rough(u, u, u))
      << ", full = " << fmt_g17(full_uniform) << ", residual = "
      << fmt_g17(std::abs(empirical_i3_rough(u, u, u) - full_uniform)) << "\n";
  out << "  spot check I3_rough(beta=pi/6, xi=2pi/15) = " << fmt_g17(rough)
      << " vs " << fmt_g17(kSpotValue) << " +/- " << fmt_g17(kSpotTol) << " "
      << (spot_pass ? "PASS" : "FAIL") << "\n";
  return spot_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace cglmp::cli
