#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/numerics.hpp"

namespace rcg {

// Model charts for the eight Thurston geometries, each a volume-preserving
// map from a star-shaped domain in R^3 into either an ambient embedding
// (with the indicated metric) or a group model carrying a left-invariant
// density.
enum class ThurstonKind { E3, S3, H3, S2xR, H2xR, Nil, Sol, SL2tilde };

inline const char* thurston_kind_name(ThurstonKind k) {
  switch (k) {
    case ThurstonKind::E3: return "e3";
    case ThurstonKind::S3: return "s3";
    case ThurstonKind::H3: return "h3";
    case ThurstonKind::S2xR: return "s2xr";
    case ThurstonKind::H2xR: return "h2xr";
    case ThurstonKind::Nil: return "nil";
    case ThurstonKind::Sol: return "sol";
    case ThurstonKind::SL2tilde: return "sl2tilde";
  }
  return "?";
}

inline ThurstonKind parse_thurston_kind(const std::string& name) {
  for (ThurstonKind k : {ThurstonKind::E3, ThurstonKind::S3, ThurstonKind::H3,
                         ThurstonKind::S2xR, ThurstonKind::H2xR, ThurstonKind::Nil,
                         ThurstonKind::Sol, ThurstonKind::SL2tilde})
    if (name == thurston_kind_name(k)) return k;
  throw ParseError("unknown thurston geometry: " + name);
}

// Group models are checked through a 3x3 Jacobian against a density on the
// image; embedded models through the pullback metric of an ambient form.
inline bool thurston_is_group(ThurstonKind k) {
  return k == ThurstonKind::Nil || k == ThurstonKind::Sol ||
         k == ThurstonKind::SL2tilde;
}

namespace detail {

// Equal-volume radial reparametrizations for the 3D round factors: R solves
// 3 int_0^R s(t)^2 dt = r^3, so that s(R)^2 R'(r) = r^2 and the azimuthal
// chart preserves volume.  (The 2D Lambert factor lambda(r) does this job
// only for surfaces; scaling it to 3D leaves a residual Jacobian lambda(r).)
inline double equal_volume_radius_s3(double r) {
  auto v = [](double R) { return std::cbrt(1.5 * (R - std::sin(R) * std::cos(R))); };
  double r_cap = v(kPi);
  if (!(r < r_cap)) throw DomainError("thurston_chart: s3 needs |x| < (3*pi/2)^(1/3)");
  if (r < 1e-12) return r;
  auto dv = [&](double R) {
    double s = std::sin(R), vv = v(R);
    return s * s / (vv * vv);
  };
  return solve_increasing(v, dv, r, 0.0, kPi, 1e-15);
}

inline double equal_volume_radius_h3(double r) {
  auto v = [](double R) { return std::cbrt(1.5 * (std::sinh(R) * std::cosh(R) - R)); };
  if (r < 1e-12) return r;
  double hi = 2.0;
  while (v(hi) < r) hi *= 2.0;
  auto dv = [&](double R) {
    double s = std::sinh(R), vv = v(R);
    return s * s / (vv * vv);
  };
  return solve_increasing(v, dv, r, 0.0, hi, 1e-15);
}

}  // namespace detail

inline Vec thurston_chart(ThurstonKind kind, const Vec& x) {
  if (x.size() != 3) throw DomainError("thurston_chart: expected a point in R^3");
  const double r2_full = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double r2_pair = x[0] * x[0] + x[1] * x[1];
  switch (kind) {
    case ThurstonKind::E3:
      return x;
    case ThurstonKind::S3: {
      double r = std::sqrt(r2_full);
      if (r < 1e-300) return Vec{0.0, 0.0, 0.0, -1.0};
      double R = detail::equal_volume_radius_s3(r);
      double f = std::sin(R) / r;
      return Vec{f * x[0], f * x[1], f * x[2], -std::cos(R)};
    }
    case ThurstonKind::H3: {
      double r = std::sqrt(r2_full);
      if (r < 1e-300) return Vec{0.0, 0.0, 0.0, 1.0};
      double R = detail::equal_volume_radius_h3(r);
      double f = std::sinh(R) / r;
      return Vec{f * x[0], f * x[1], f * x[2], std::cosh(R)};
    }
    case ThurstonKind::S2xR: {
      if (!(r2_pair < 4.0)) throw DomainError("thurston_chart: s2xr needs |(x,y)| < 2");
      double lam = std::sqrt(1.0 - r2_pair / 4.0);
      return Vec{lam * x[0], lam * x[1], -1.0 + r2_pair / 2.0, x[2]};
    }
    case ThurstonKind::H2xR: {
      double lam = std::sqrt(1.0 + r2_pair / 4.0);
      return Vec{lam * x[0], lam * x[1], 1.0 + r2_pair / 2.0, x[2]};
    }
    case ThurstonKind::Nil:
      return Vec{x[0], x[1], x[2] + x[0] * x[1] / 2.0};
    case ThurstonKind::Sol:
      return Vec{std::exp(x[2] / 2.0) * x[0], std::exp(-x[2] / 2.0) * x[1], x[2]};
    case ThurstonKind::SL2tilde:
      return Vec{x[0], x[1] * std::exp(-2.0 * x[0]), x[2]};
  }
  throw DomainError("thurston_chart: unknown kind");
}

namespace detail {

inline std::array<double, 4> thurston_metric_diag(ThurstonKind k) {
  switch (k) {
    case ThurstonKind::E3: return {1.0, 1.0, 1.0, 0.0};
    case ThurstonKind::S3: return {1.0, 1.0, 1.0, 1.0};
    case ThurstonKind::H3: return {1.0, 1.0, 1.0, -1.0};
    case ThurstonKind::S2xR: return {1.0, 1.0, 1.0, 1.0};
    case ThurstonKind::H2xR: return {1.0, 1.0, -1.0, 1.0};
    default: return {1.0, 1.0, 1.0, 1.0};
  }
}

inline double thurston_density(ThurstonKind k, const Vec& image) {
  if (k == ThurstonKind::SL2tilde) return std::exp(2.0 * image[0]);
  return 1.0;
}

inline double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

// |volume factor - 1| at x, with the differential taken by central
// differences (exact for the quadratic charts).  Embedded kinds pull back
// the ambient (pseudo-)metric; group kinds combine det DL with the model
// density at the image point.
inline double volume_check(ThurstonKind kind, const Vec& x, double h = 1e-5) {
  if (x.size() != 3) throw DomainError("volume_check: expected a point in R^3");
  Vec cols[3];
  for (int j = 0; j < 3; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    Vec fp = thurston_chart(kind, xp), fm = thurston_chart(kind, xm);
    cols[j].resize(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) cols[j][i] = (fp[i] - fm[i]) / (2.0 * h);
  }

  if (thurston_is_group(kind)) {
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = cols[j][i];
    double det = detail::det3(m);
    return std::fabs(det * detail::thurston_density(kind, thurston_chart(kind, x)) - 1.0);
  }

  auto eta = detail::thurston_metric_diag(kind);
  std::array<std::array<double, 3>, 3> g{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < cols[a].size(); ++i)
        acc += eta[i] * cols[a][i] * cols[b][i];
      g[a][b] = acc;
    }
  double det = detail::det3(g);
  if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
  return std::fabs(std::sqrt(det) - 1.0);
}

// Smallest image separation over paired probe points; positive separation
// for distinct inputs witnesses injectivity on the sampled region.
inline double min_image_separation(ThurstonKind kind, const std::vector<Vec>& xs,
                                   const std::vector<Vec>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw DomainError("min_image_separation: need matching nonempty point lists");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Vec a = thurston_chart(kind, xs[i]), b = thurston_chart(kind, ys[i]);
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
    best = std::min(best, std::sqrt(d2));
  }
  return best;
}

}  // namespace rcg
