#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "rcg/errors.hpp"
#include "rcg/rng.hpp"

namespace rcg {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Normal distribution special functions.
// ---------------------------------------------------------------------------

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

// Inverse standard normal CDF.  Rational initial guess (Acklam's
// approximation) polished by two Halley steps against erfc, giving full
// double precision on (0,1).  Endpoints map to +-infinity.
inline double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("normal_quantile: p outside [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};

  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

inline double standard_normal(Pcg32& rng) { return normal_quantile(rng.uniform01()); }

// Regularized lower incomplete gamma P(a, x), by power series for
// x < a + 1 and by Lentz's continued fraction for the complement otherwise.
inline double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw DomainError("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16)
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    throw ConvergenceError("gamma_p: series failed to converge");
  }
  const double tiny = 1e-300;
  double b0 = x + 1.0 - a, c0 = 1.0 / tiny, d0 = 1.0 / b0, h = d0;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b0 += 2.0;
    d0 = an * d0 + b0;
    if (std::fabs(d0) < tiny) d0 = tiny;
    c0 = b0 + an / c0;
    if (std::fabs(c0) < tiny) c0 = tiny;
    d0 = 1.0 / d0;
    double del = d0 * c0;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16)
      return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
  }
  throw ConvergenceError("gamma_p: continued fraction failed to converge");
}

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature with adaptive bisection.
//
// Node/weight pairs are computed at runtime by Newton iteration on the
// Legendre recurrence (no hard-coded tables).  The adaptive driver uses the
// embedded GL7/GL15 pair on each segment, splitting the segment with the
// largest |GL15 - GL7| discrepancy until the summed estimate meets the
// tolerance.
// ---------------------------------------------------------------------------

struct GlRule {
  std::vector<double> nodes;    // in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

inline GlRule make_gl_rule(int n) {
  GlRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline const GlRule& gl_rule(int n) {
  static std::mutex mu;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gl_rule(n)).first;
  return it->second;
}

template <class F>
double gl_apply(const GlRule& rule, F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a), acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0) {
  if (a == b) return 0.0;
  const GlRule& g7 = gl_rule(7);
  const GlRule& g15 = gl_rule(15);

  struct Seg {
    double a, b, val, err;
  };
  auto eval_seg = [&](double lo, double hi) {
    double v15 = gl_apply(g15, f, lo, hi);
    double v7 = gl_apply(g7, f, lo, hi);
    return Seg{lo, hi, v15, std::fabs(v15 - v7)};
  };
  auto cmp = [](const Seg& x, const Seg& y) { return x.err < y.err; };
  std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> heap(cmp);

  Seg whole = eval_seg(a, b);
  double total = whole.val, total_err = whole.err;
  heap.push(whole);
  int splits = 0;
  while (total_err > std::max(abs_tol, rel_tol * std::fabs(total))) {
    if (++splits > 4000)
      throw ConvergenceError("integrate: tolerance not reached after 4000 splits");
    Seg s = heap.top();
    heap.pop();
    double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) continue;  // interval at rounding floor
    Seg l = eval_seg(s.a, mid), r = eval_seg(mid, s.b);
    total += l.val + r.val - s.val;
    total_err += l.err + r.err - s.err;
    heap.push(l);
    heap.push(r);
  }
  return total;
}

// Integral over [a, inf) through the substitution r = a + t/(1-t).
template <class F>
double integrate_to_inf(F&& f, double a, double rel_tol = 1e-10,
                        double abs_tol = 0.0) {
  auto g = [&](double t) {
    double om = 1.0 - t;
    double r = a + t / om;
    return f(r) / (om * om);
  };
  return integrate(g, 0.0, 1.0, rel_tol, abs_tol);
}

// ---------------------------------------------------------------------------
// Monotone root finding: bisection to a narrow bracket, then Newton.
// ---------------------------------------------------------------------------

// Solves f(x) = target for strictly increasing f on [lo, hi].  With a
// derivative available, bisection narrows the bracket to ~1e-6 relative and
// Newton polishes to xtol; each Newton iterate is kept inside the current
// bracket so convergence is guaranteed.
template <class F, class DF>
double solve_increasing(F&& f, DF&& df, double target, double lo, double hi,
                        double xtol_rel = 1e-12) {
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw ConvergenceError("solve_increasing: target not bracketed");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  const double scale = std::max({std::fabs(lo), std::fabs(hi), 1.0});
  const double coarse = 1e-6 * scale;

  while (hi - lo > coarse) {
    double mid = 0.5 * (lo + hi);
    if ((f(mid) - target) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    double fx = f(x) - target;
    if (fx < 0.0)
      lo = x;
    else
      hi = x;
    double dfx = df(x);
    double step = (dfx > 0.0) ? fx / dfx : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) < xtol_rel * (std::fabs(xn) + 1e-9 * scale)) return xn;
    x = xn;
  }
  return x;
}

template <class F>
double solve_increasing(F&& f, double target, double lo, double hi,
                        double xtol_rel = 1e-12) {
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw ConvergenceError("solve_increasing: target not bracketed");
  const double scale = std::max({std::fabs(lo), std::fabs(hi), 1.0});
  while (hi - lo > xtol_rel * scale) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((f(mid) - target) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Chebyshev interpolation on [a, b] from samples at the Chebyshev-Lobatto
// points x_k = cos(pi k / N), evaluated by Clenshaw recurrence.
// ---------------------------------------------------------------------------

class Chebyshev {
 public:
  Chebyshev() = default;

  // values[k] = f(node(k)), k = 0..N, where node(k) maps cos(pi k/N) onto
  // [a, b] (node(0) = b, node(N) = a).
  static Chebyshev from_values(double a, double b, const std::vector<double>& values) {
    Chebyshev c;
    c.a_ = a;
    c.b_ = b;
    const int n = static_cast<int>(values.size()) - 1;
    c.coef_.assign(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
      double acc = 0.5 * (values[0] + (j % 2 == 0 ? values[n] : -values[n]));
      for (int k = 1; k < n; ++k) acc += values[k] * std::cos(kPi * j * k / n);
      c.coef_[j] = 2.0 * acc / n;
    }
    return c;
  }

  static std::vector<double> lobatto_nodes(double a, double b, int n) {
    std::vector<double> xs(n + 1);
    for (int k = 0; k <= n; ++k)
      xs[k] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(kPi * k / n);
    return xs;
  }

  double eval(double x) const {
    double t = (2.0 * x - a_ - b_) / (b_ - a_);
    t = std::clamp(t, -1.0, 1.0);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coef_.size(); j-- > 1;) {
      double tmp = 2.0 * t * b1 - b2 + coef_[j];
      b2 = b1;
      b1 = tmp;
    }
    return t * b1 - b2 + 0.5 * coef_[0];
  }

  double lo() const { return a_; }
  double hi() const { return b_; }
  bool empty() const { return coef_.empty(); }

 private:
  double a_ = 0.0, b_ = 1.0;
  std::vector<double> coef_;
};

// ---------------------------------------------------------------------------
// Small-sample statistics.
// ---------------------------------------------------------------------------

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Unbiased sample variance.
inline double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double sd_of(const std::vector<double>& v) { return std::sqrt(variance_of(v)); }

inline double pearson_corr(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

// One-sample Kolmogorov-Smirnov statistic against a cdf callable.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double ks_two_sample_statistic(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] <= y[j])
      ++i;
    else
      ++j;
    double fx = static_cast<double>(i) / x.size();
    double fy = static_cast<double>(j) / y.size();
    d = std::max(d, std::fabs(fx - fy));
  }
  return d;
}

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    s += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

inline double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
  double ne = static_cast<double>(n) * m / static_cast<double>(n + m);
  return kolmogorov_q(std::sqrt(ne) * d);
}

}  // namespace rcg
