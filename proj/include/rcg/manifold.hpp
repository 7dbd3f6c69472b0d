#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rcg/errors.hpp"
#include "rcg/numerics.hpp"
#include "rcg/rng.hpp"

namespace rcg {

using Vec = std::vector<double>;

inline double vec_dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double vec_norm(const Vec& a) { return std::sqrt(vec_dot(a, a)); }

// Minkowski form with the last coordinate timelike: sum x_i y_i - x_n y_n.
inline double minkowski_dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  const std::size_t last = a.size() - 1;
  for (std::size_t i = 0; i < last; ++i) s += a[i] * b[i];
  return s - a[last] * b[last];
}

inline double unit_sphere_area(int n) {
  // Surface area of S^{n-1} in R^n.
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

enum class ManifoldKind { Sphere, Hyperbolic };

// Constant-curvature space of dimension n and curvature radius R_c, realized
// as the sphere of radius R_c in R^{n+1} or the upper hyperboloid sheet
// <p,p>_L = -R_c^2 in Minkowski space (last coordinate timelike).
struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Sphere;
  int n = 2;
  double R_c = 1.0;

  static ManifoldSpec sphere(int n, double R_c = 1.0) {
    return validated({ManifoldKind::Sphere, n, R_c});
  }
  static ManifoldSpec hyperbolic(int n, double R_c = 1.0) {
    return validated({ManifoldKind::Hyperbolic, n, R_c});
  }
  static ManifoldSpec validated(ManifoldSpec s) {
    if (s.n < 2) throw DomainError("manifold: dimension must be >= 2");
    if (!(s.R_c > 0.0)) throw DomainError("manifold: curvature radius must be > 0");
    return s;
  }

  double kappa_hat() const { return kind == ManifoldKind::Sphere ? 1.0 : -1.0; }
  double kappa() const { return kappa_hat() / (R_c * R_c); }
  // Largest geodesic radius from a pole with a well-defined polar chart.
  double r_max() const {
    return kind == ManifoldKind::Sphere ? kPi * R_c
                                        : std::numeric_limits<double>::infinity();
  }
  int ambient_dim() const { return n + 1; }

  bool operator==(const ManifoldSpec& o) const {
    return kind == o.kind && n == o.n && R_c == o.R_c;
  }
};

// ---------------------------------------------------------------------------
// The curvature-scaled sine s_kappa(r) = R_c sin(r/R_c) (sphere) or
// R_c sinh(r/R_c) (hyperbolic), its cosine partner, and log(s_kappa(r)/r)
// with derivatives.  Near r = 0 the log-ratio family switches to power
// series in y = kappa_hat (r/R_c)^2 to avoid cancellation; the closed forms
// take over at r/R_c >= 1e-2 and the seam agrees to ~1e-14.
// ---------------------------------------------------------------------------

namespace detail {
// log(s_kappa(r)/r) = sum c_k y^k, y = kappa_hat (r/R_c)^2.
inline constexpr double kLogSratioCoef[6] = {
    -1.0 / 6.0,     -1.0 / 180.0,   -1.0 / 2835.0,
    -1.0 / 37800.0, -1.0 / 467775.0, -691.0 / 3831077250.0};
inline constexpr double kSeriesSwitch = 1e-2;
}  // namespace detail

inline double s_kappa(const ManifoldSpec& spec, double r) {
  double x = r / spec.R_c;
  return spec.kind == ManifoldKind::Sphere ? spec.R_c * std::sin(x)
                                           : spec.R_c * std::sinh(x);
}

// Generalized cosine, d/dr s_kappa(r). Dimensionless.
inline double c_kappa(const ManifoldSpec& spec, double r) {
  double x = r / spec.R_c;
  return spec.kind == ManifoldKind::Sphere ? std::cos(x) : std::cosh(x);
}

// log(s_kappa(r)), overflow-safe for large hyperbolic arguments.
inline double log_s_kappa(const ManifoldSpec& spec, double r) {
  double x = r / spec.R_c;
  if (spec.kind == ManifoldKind::Sphere) {
    return std::log(spec.R_c) + std::log(std::sin(x));
  }
  if (x < 1.0) return std::log(spec.R_c * std::sinh(x));
  return std::log(spec.R_c) + x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

inline double log_sratio(const ManifoldSpec& spec, double r) {
  double x = r / spec.R_c;
  if (x < detail::kSeriesSwitch) {
    double y = spec.kappa_hat() * x * x;
    double acc = 0.0;
    for (int k = 5; k >= 0; --k) acc = (acc + detail::kLogSratioCoef[k]) * y;
    return acc;
  }
  if (spec.kind == ManifoldKind::Sphere) return std::log(std::sin(x) / x);
  if (x > 30.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * x);
  return std::log(std::sinh(x) / x);
}

// d/dr log(s_kappa(r)/r) = (c_kappa/s_kappa) - 1/r.
inline double log_sratio_deriv(const ManifoldSpec& spec, double r) {
  double x = r / spec.R_c;
  if (x < detail::kSeriesSwitch) {
    double kh = spec.kappa_hat();
    double acc = 0.0, khk = 1.0;
    double x2 = x * x;
    double pow_x = x;  // x^{2k-1}
    for (int k = 1; k <= 6; ++k) {
      khk *= kh;
      acc += 2.0 * k * detail::kLogSratioCoef[k - 1] * khk * pow_x;
      pow_x *= x2;
    }
    return acc / spec.R_c;
  }
  double cot = spec.kind == ManifoldKind::Sphere ? std::cos(x) / std::sin(x)
                                                 : 1.0 / std::tanh(x);
  return (cot - 1.0 / x) / spec.R_c;
}

// d^2/dr^2 log(s_kappa(r)/r) = 1/r^2 - kappa_hat/s_kappa^2 ... written via
// 1/x^2 - 1/sin^2 x (sphere) or 1/x^2 - 1/sinh^2 x (hyperbolic), scaled.
inline double log_sratio_second(const ManifoldSpec& spec, double r) {
  double x = r / spec.R_c;
  if (x < detail::kSeriesSwitch) {
    double kh = spec.kappa_hat();
    double acc = 0.0, khk = 1.0;
    double x2 = x * x;
    double pow_x = 1.0;  // x^{2k-2}
    for (int k = 1; k <= 6; ++k) {
      khk *= kh;
      acc += 2.0 * k * (2.0 * k - 1.0) * detail::kLogSratioCoef[k - 1] * khk * pow_x;
      pow_x *= x2;
    }
    return acc / (spec.R_c * spec.R_c);
  }
  double inv_s2;
  if (spec.kind == ManifoldKind::Sphere) {
    double s = std::sin(x);
    inv_s2 = 1.0 / (s * s);
  } else {
    double t = std::tanh(x);
    inv_s2 = (1.0 - t * t) / (t * t);  // 1/sinh^2, safe for large x
  }
  return (1.0 / (x * x) - inv_s2) / (spec.R_c * spec.R_c);
}

// Unit-curvature inverse of s: arcsine on the sphere (|z| <= 1 required),
// area-hyperbolic sine otherwise.
inline double ars(const ManifoldSpec& spec, double z) {
  if (spec.kind == ManifoldKind::Sphere) {
    if (std::fabs(z) > 1.0) throw DomainError("ars: |z| > 1 on the sphere");
    return std::asin(z);
  }
  return std::asinh(z);
}

// ---------------------------------------------------------------------------
// Points, poles, frames, and the exponential/logarithm maps.
// ---------------------------------------------------------------------------

inline Vec default_pole(const ManifoldSpec& spec) {
  Vec p(spec.ambient_dim(), 0.0);
  p.back() = spec.R_c;
  return p;
}

inline Vec antipode(const ManifoldSpec& spec, const Vec& p) {
  if (spec.kind != ManifoldKind::Sphere)
    throw DomainError("antipode: defined only on the sphere");
  Vec q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = -p[i];
  return q;
}

// Orthonormal basis of the tangent space at p, obtained by projecting the
// standard ambient basis and running Gram-Schmidt under the ambient metric
// (Euclidean or Minkowski; the form is positive definite on hyperboloid
// tangent spaces).  At the default pole this yields e_1, ..., e_n.
struct Frame {
  std::vector<Vec> basis;  // n ambient vectors
};

inline Frame tangent_frame(const ManifoldSpec& spec, const Vec& p) {
  const bool sph = spec.kind == ManifoldKind::Sphere;
  auto form = [&](const Vec& a, const Vec& b) {
    return sph ? vec_dot(a, b) : minkowski_dot(a, b);
  };
  const double pp = form(p, p);  // R_c^2 or -R_c^2
  Frame fr;
  for (int j = 0; j < spec.ambient_dim() && static_cast<int>(fr.basis.size()) < spec.n;
       ++j) {
    Vec v(spec.ambient_dim(), 0.0);
    v[j] = 1.0;
    double c = form(v, p) / pp;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * p[i];
    for (const Vec& b : fr.basis) {
      double d = form(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * b[i];
    }
    double nrm2 = form(v, v);
    if (nrm2 < 1e-20 * spec.R_c * spec.R_c) continue;
    double inv = 1.0 / std::sqrt(nrm2);
    for (double& x : v) x *= inv;
    fr.basis.push_back(std::move(v));
  }
  if (static_cast<int>(fr.basis.size()) != spec.n)
    throw ConvergenceError("tangent_frame: degenerate projection");
  return fr;
}

// Ambient tangent vector from coordinates in a frame.
inline Vec frame_vector(const Frame& fr, const Vec& coords) {
  Vec v(fr.basis[0].size(), 0.0);
  for (std::size_t k = 0; k < coords.size(); ++k)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += coords[k] * fr.basis[k][i];
  return v;
}

inline Vec frame_coords(const ManifoldSpec& spec, const Frame& fr, const Vec& v) {
  const bool sph = spec.kind == ManifoldKind::Sphere;
  Vec c(fr.basis.size());
  for (std::size_t k = 0; k < fr.basis.size(); ++k)
    c[k] = sph ? vec_dot(v, fr.basis[k]) : minkowski_dot(v, fr.basis[k]);
  return c;
}

// Geodesic exponential at p applied to an ambient tangent vector v.
inline Vec exp_map(const ManifoldSpec& spec, const Vec& p, const Vec& v) {
  const bool sph = spec.kind == ManifoldKind::Sphere;
  double r = sph ? vec_norm(v) : std::sqrt(std::max(0.0, minkowski_dot(v, v)));
  if (r == 0.0) return p;
  double x = r / spec.R_c;
  double cf = sph ? std::cos(x) : std::cosh(x);
  double sf = (sph ? std::sin(x) : std::sinh(x)) / x;  // s_kappa(r)/r
  Vec q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = cf * p[i] + sf * v[i];
  return q;
}

inline double geodesic_distance(const ManifoldSpec& spec, const Vec& p, const Vec& q) {
  double R2 = spec.R_c * spec.R_c;
  if (spec.kind == ManifoldKind::Sphere) {
    double c = std::clamp(vec_dot(p, q) / R2, -1.0, 1.0);
    return spec.R_c * std::acos(c);
  }
  double c = std::max(1.0, -minkowski_dot(p, q) / R2);
  return spec.R_c * std::acosh(c);
}

// Geodesic logarithm: the tangent vector at p pointing to q with length
// d(p, q).  Throws CutLocusError on the sphere when q is at (or numerically
// at) the antipode of p, where the direction is undefined.
inline Vec log_map(const ManifoldSpec& spec, const Vec& p, const Vec& q) {
  const bool sph = spec.kind == ManifoldKind::Sphere;
  double r = geodesic_distance(spec, p, q);
  if (sph && r >= kPi * spec.R_c * (1.0 - 1e-12))
    throw CutLocusError("log_map: point at the cut locus of the base point");
  Vec u(p.size());
  double x = r / spec.R_c;
  double cf = sph ? std::cos(x) : std::cosh(x);
  for (std::size_t i = 0; i < p.size(); ++i) u[i] = q[i] - cf * p[i];
  double nrm = sph ? vec_norm(u) : std::sqrt(std::max(0.0, minkowski_dot(u, u)));
  if (nrm < 1e-300 || r == 0.0) return Vec(p.size(), 0.0);
  double scale = r / nrm;
  for (double& ui : u) ui *= scale;
  return u;
}

// Uniform direction on S^{n-1} subset R^n (frame coordinates).
inline Vec sample_uniform_direction(int n, Pcg32& rng) {
  Vec u(n);
  for (;;) {
    for (int i = 0; i < n; ++i) u[i] = standard_normal(rng);
    double nrm = vec_norm(u);
    if (nrm > 1e-12) {
      for (double& x : u) x /= nrm;
      return u;
    }
  }
}

// Point at geodesic radius r from the pole in direction omega (frame coords).
inline Vec point_from_polar(const ManifoldSpec& spec, const Vec& pole,
                            const Frame& fr, double r, const Vec& omega) {
  Vec coords(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) coords[i] = r * omega[i];
  return exp_map(spec, pole, frame_vector(fr, coords));
}

}  // namespace rcg
