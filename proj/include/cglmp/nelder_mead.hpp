#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace cglmp {

struct NelderMeadOptions {
  int max_iters = 2000;
  double f_tol = 1e-10;       // stop when the simplex f-spread falls below
  double initial_step = 0.5;  // edge length of the starting simplex
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iters = 0;
  int evals = 0;
  bool converged = false;
};

// Classic simplex descent (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2). Fully deterministic: ties are broken by vertex index.
inline NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> verts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 1; i <= n; ++i) verts[i](i - 1) += opt.initial_step;

  NelderMeadResult res;
  for (int i = 0; i <= n; ++i) {
    fv[i] = f(verts[i]);
    ++res.evals;
  }
  std::vector<int> order(n + 1);

  for (res.iters = 0; res.iters < opt.max_iters; ++res.iters) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (fv[worst] - fv[best] <= opt.f_tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += verts[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + (centroid - verts[worst]);
    const double fr = f(xr);
    ++res.evals;
    if (fr < fv[order[0]]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - verts[worst]);
      const double fe = f(xe);
      ++res.evals;
      if (fe < fr) {
        verts[worst] = std::move(xe);
        fv[worst] = fe;
      } else {
        verts[worst] = std::move(xr);
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      verts[worst] = std::move(xr);
      fv[worst] = fr;
      continue;
    }
    // contraction, outside or inside of the worst vertex
    if (fr < fv[worst]) {
      Eigen::VectorXd xc = centroid + 0.5 * (xr - centroid);
      const double fc = f(xc);
      ++res.evals;
      if (fc <= fr) {
        verts[worst] = std::move(xc);
        fv[worst] = fc;
        continue;
      }
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (verts[worst] - centroid);
      const double fc = f(xc);
      ++res.evals;
      if (fc < fv[worst]) {
        verts[worst] = std::move(xc);
        fv[worst] = fc;
        continue;
      }
    }
    // shrink toward the best vertex
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      verts[i] = verts[best] + 0.5 * (verts[i] - verts[best]);
      fv[i] = f(verts[i]);
      ++res.evals;
    }
  }

  int arg = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[arg]) arg = i;
  res.x = verts[arg];
  res.f = fv[arg];
  return res;
}

}  // namespace cglmp
