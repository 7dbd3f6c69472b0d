#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "rcg/charts.hpp"
#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/numerics.hpp"
#include "rcg/radial.hpp"
#include "rcg/rng.hpp"

namespace rcg {

struct OdeProblem {
  int dim = 1;
  std::function<void(double, const Vec&, Vec&)> rhs;
  double t0 = 0.0;
  double t1 = 1.0;
  double rtol = 1e-6;
  double atol = 1e-8;
};

struct OdeResult {
  Vec y;
  std::size_t nfes = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
inline constexpr double kDpC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kDpA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double kDpB5[7] = {35.0 / 384,      0.0,     500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double kDpB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695,
                                    393.0 / 640,       -92097.0 / 339200,
                                    187.0 / 2100,      1.0 / 40};

// One trial step from (t, y) with k[0] already holding f(t, y); fills k[1..6]
// (6 evaluations) and returns the scaled RMS error estimate.
inline double dopri_try_step(const OdeProblem& p, double t, const Vec& y, double h,
                             std::vector<Vec>& k, Vec& y5, Vec& y4, Vec& scratch) {
  const int d = p.dim;
  for (int s = 1; s < 7; ++s) {
    for (int i = 0; i < d; ++i) {
      double acc = y[i];
      for (int j = 0; j < s; ++j) acc += h * kDpA[s][j] * k[j][i];
      scratch[i] = acc;
    }
    p.rhs(t + kDpC[s] * h, scratch, k[s]);
  }
  double err2 = 0.0;
  for (int i = 0; i < d; ++i) {
    double acc5 = y[i], acc4 = y[i];
    for (int s = 0; s < 7; ++s) {
      acc5 += h * kDpB5[s] * k[s][i];
      acc4 += h * kDpB4[s] * k[s][i];
    }
    y5[i] = acc5;
    y4[i] = acc4;
    double sc = p.atol + p.rtol * std::max(std::fabs(y[i]), std::fabs(acc5));
    double e = (acc5 - acc4) / sc;
    err2 += e * e;
  }
  return std::sqrt(err2 / d);
}

}  // namespace detail

// Adaptive Dormand-Prince 5(4) with FSAL and a PI step controller
// (exponents 0.7/order and 0.4/order, safety 0.9, factor clamp [0.2, 5]).
// nfes counts right-hand-side evaluations: 6 per attempted step plus the
// initial one, with the FSAL stage reused across accepted steps.
inline OdeResult dopri45(const OdeProblem& p, const Vec& y0) {
  if (static_cast<int>(y0.size()) != p.dim)
    throw DomainError("dopri45: state size does not match problem dim");
  const double span = p.t1 - p.t0;
  if (!(span > 0.0)) throw DomainError("dopri45: need t1 > t0");

  OdeResult res;
  res.y = y0;
  std::vector<Vec> k(7, Vec(p.dim));
  Vec y5(p.dim), y4(p.dim), scratch(p.dim);

  double t = p.t0;
  double h = span / 100.0;
  double errold = 1e-4;
  p.rhs(t, res.y, k[0]);
  res.nfes = 1;

  while (t < p.t1) {
    if (h < 1e-12 * span)
      throw StepSizeUnderflow("dopri45: step size underflow");
    if (t + h > p.t1) h = p.t1 - t;

    double err = detail::dopri_try_step(p, t, res.y, h, k, y5, y4, scratch);
    res.nfes += 6;
    if (err <= 1.0) {
      t += h;
      res.y = y5;
      k[0] = k[6];
      res.accepted++;
      double fac = 0.9 * std::pow(err > 0.0 ? err : 1e-30, -0.14) * std::pow(errold, 0.08);
      h *= std::min(5.0, std::max(0.2, fac));
      errold = std::max(err, 1e-4);
    } else {
      res.rejected++;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return res;
}

// Fixed-step variant used to measure the convergence order of the scheme.
inline Vec dopri45_fixed(const OdeProblem& p, const Vec& y0, std::size_t n_steps) {
  Vec y = y0;
  std::vector<Vec> k(7, Vec(p.dim));
  Vec y5(p.dim), y4(p.dim), scratch(p.dim);
  const double h = (p.t1 - p.t0) / static_cast<double>(n_steps);
  for (std::size_t s = 0; s < n_steps; ++s) {
    double t = p.t0 + h * static_cast<double>(s);
    p.rhs(t, y, k[0]);
    detail::dopri_try_step(p, t, y, h, k, y5, y4, scratch);
    y = y5;
  }
  return y;
}

// ---------------------------------------------------------------------------
// CNF-style stiffness benchmark for the bExp(alpha) chart term.
// ---------------------------------------------------------------------------

struct CnfAlphaResult {
  double alpha = 0.0;
  double mean_nfe = 0.0;
  double sd_nfe = 0.0;
  double chart_var = 0.0;  // Var of the alpha chart term over the start radii
};

struct CnfBenchResult {
  std::vector<CnfAlphaResult> rows;
  double fit_a = 0.0;  // mean_nfe ~ a + b / alpha
  double fit_b = 0.0;
  double fit_r2 = 0.0;
};

// Integrates the log-density update of a contraction flow v = -(x - x*) in
// the 2D tangent plane, where the divergence correction carries the chart
// term chi_alpha(r) = alpha (n-1) log(s_kappa(r)/r).  The same radius and
// direction draws are shared across alphas; only the chart (and hence the
// start radius and the stiffness of the correction) changes.
inline CnfBenchResult chart_cnf_bench(const ManifoldSpec& spec, const RadialLaw& law,
                                      const std::vector<double>& alphas, double tol,
                                      std::size_t n_trajectories, Pcg32& rng) {
  if (spec.n != 2) throw DomainError("chart_cnf_bench: tangent flow defined for n = 2");
  if (alphas.empty()) throw DomainError("chart_cnf_bench: empty alpha list");

  std::vector<double> draws_R;
  std::vector<Vec> draws_omega;
  for (std::size_t i = 0; i < n_trajectories; ++i) {
    draws_R.push_back(law.sample(rng));
    draws_omega.push_back(sample_uniform_direction(2, rng));
  }
  const Vec x_star{3.0 * spec.R_c, 0.0};

  CnfBenchResult out;
  std::vector<double> inv_alpha, means;
  for (double a : alphas) {
    Chart chart = Chart::bexp(spec, a);
    OdeProblem prob;
    prob.dim = 3;
    prob.t0 = 0.0;
    prob.t1 = 1.0;
    prob.rtol = tol;
    prob.atol = tol;
    const double coef = a * (spec.n - 1);
    prob.rhs = [&](double, const Vec& y, Vec& dy) {
      Vec v{x_star[0] - y[0], x_star[1] - y[1]};
      double r = std::hypot(y[0], y[1]);
      double xv = y[0] * v[0] + y[1] * v[1];
      double fac = (r < 1e-8 * spec.R_c)
                       ? -spec.kappa() / 3.0
                       : log_sratio_deriv(spec, r) / r;
      dy[0] = v[0];
      dy[1] = v[1];
      dy[2] = coef * fac * xv;
    };

    std::vector<double> nfes, chart_terms;
    for (std::size_t i = 0; i < n_trajectories; ++i) {
      double r0 = chart.radius_map_inverse(draws_R[i]);
      chart_terms.push_back(coef * log_sratio(spec, r0));
      Vec y0{r0 * draws_omega[i][0], r0 * draws_omega[i][1], 0.0};
      OdeResult r = dopri45(prob, y0);
      nfes.push_back(static_cast<double>(r.nfes));
    }
    CnfAlphaResult row;
    row.alpha = a;
    row.mean_nfe = mean_of(nfes);
    row.sd_nfe = sd_of(nfes);
    row.chart_var = variance_of(chart_terms);
    out.rows.push_back(row);
    inv_alpha.push_back(1.0 / a);
    means.push_back(row.mean_nfe);
  }
  LinearFit fit = linear_fit(inv_alpha, means);
  out.fit_a = fit.intercept;
  out.fit_b = fit.slope;
  out.fit_r2 = fit.r2;
  return out;
}

// ---------------------------------------------------------------------------
// Hutchinson trace probes of the chart-term Hessian.
// ---------------------------------------------------------------------------

struct HutchinsonResult {
  double mean = 0.0;            // estimates Laplacian of chi_alpha
  double probe_variance = 0.0;  // per-point probe variance, averaged
};

// For chi(r) = alpha (n-1) log(s_kappa(r)/r) the Hessian at x (radius r,
// direction u) gives z^T H z = chi''(r) (z.u)^2 + (chi'(r)/r)(|z|^2 - (z.u)^2);
// Rademacher probes make the mean the Laplacian chi'' + (n-1) chi'/r.  Both
// derivative factors scale with alpha, so the probe variance scales as
// alpha^2.
inline HutchinsonResult hutchinson_chart_divergence(const ManifoldSpec& spec,
                                                    double alpha,
                                                    const std::vector<Vec>& points,
                                                    std::size_t n_probes, Pcg32& rng) {
  if (points.empty()) throw DomainError("hutchinson: no points");
  if (n_probes < 2) throw DomainError("hutchinson: need at least two probes");
  const int n = spec.n;
  const double coef = alpha * (n - 1);

  double acc_mean = 0.0, acc_var = 0.0;
  for (const Vec& x : points) {
    double r = vec_norm(x);
    if (r <= 0.0) throw DomainError("hutchinson: point at the pole");
    double d1 = coef * log_sratio_deriv(spec, r);
    double d2 = coef * log_sratio_second(spec, r);
    std::vector<double> vals;
    vals.reserve(n_probes);
    for (std::size_t p = 0; p < n_probes; ++p) {
      double zu = 0.0;
      for (int i = 0; i < n; ++i) {
        double z = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        zu += z * x[i] / r;
      }
      vals.push_back(d2 * zu * zu + (d1 / r) * (n - zu * zu));
    }
    acc_mean += mean_of(vals);
    acc_var += variance_of(vals);
  }
  HutchinsonResult out;
  out.mean = acc_mean / static_cast<double>(points.size());
  out.probe_variance = acc_var / static_cast<double>(points.size());
  return out;
}

}  // namespace rcg
