#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/numerics.hpp"

namespace rcg {

enum class ChartKind { Exp, Lambert, BExp, Gcl };

// Verbatim (CLI name `paper`): the planar base radius map 2 R_c ars(rho/(2R_c))
// together with the classical printed log-determinants; Riemannian-exact at
// n = 2.  EqualArea (CLI name `equal-area`): the base radius map defined by
// geodesic-ball volume matching, which makes the scalar log-determinant the
// true change of volume in every dimension (and makes Exp, GCL, and bExp(1)
// coincide for n >= 3).
enum class BaseConvention { Verbatim, EqualArea };

inline BaseConvention default_convention(const ManifoldSpec& spec) {
  return spec.n == 2 ? BaseConvention::Verbatim : BaseConvention::EqualArea;
}

inline const char* chart_kind_name(ChartKind k) {
  switch (k) {
    case ChartKind::Exp: return "exp";
    case ChartKind::Lambert: return "lambert";
    case ChartKind::BExp: return "bexp";
    case ChartKind::Gcl: return "gcl";
  }
  return "?";
}

struct TangentPolar {
  double r = 0.0;
  Vec omega;  // unit direction in the pole frame, size n
};

// ---------------------------------------------------------------------------
// The balanced profile rho_alpha(r) = [ n * Int_0^r t^{(n-1)(1-alpha)}
// s_kappa(t)^{(n-1)alpha} dt ]^{1/n}, evaluated directly by adaptive
// quadrature (free functions below) or through a cached Chebyshev table of
// w(r) = log(rho(r)/r) (inside Chart).  Everything runs through logarithms of
// the integrand so large hyperbolic radii cannot overflow.
// ---------------------------------------------------------------------------

namespace detail {

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double bexp_integrand_log(const ManifoldSpec& spec, double alpha, double t) {
  return (spec.n - 1) * ((1.0 - alpha) * std::log(t) + alpha * log_s_kappa(spec, t));
}

// log( n * Int_0^r exp(h) ), scaled by the integrand's peak to stay finite.
inline double bexp_log_integral(const ManifoldSpec& spec, double alpha, double r) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 64; ++i)
    m = std::max(m, bexp_integrand_log(spec, alpha, r * i / 64.0));
  double scaled = integrate(
      [&](double t) { return std::exp(bexp_integrand_log(spec, alpha, t) - m); }, 0.0,
      r, 1e-11);
  return std::log(static_cast<double>(spec.n)) + m + std::log(scaled);
}

}  // namespace detail

inline double bexp_profile(const ManifoldSpec& spec, double alpha, double r) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("bexp_profile: alpha outside [0,1]");
  if (r < 0.0 || r >= spec.r_max())
    throw DomainError("bexp_profile: r outside [0, r_max)");
  if (r == 0.0) return 0.0;
  if (alpha == 0.0) return r;
  return std::exp(detail::bexp_log_integral(spec, alpha, r) / spec.n);
}

// d rho_alpha / dr = (r/rho)^{n-1} (s_kappa(r)/r)^{(n-1)alpha}.
inline double bexp_profile_deriv(const ManifoldSpec& spec, double alpha, double r) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("bexp_profile_deriv: alpha outside [0,1]");
  if (r < 0.0 || r >= spec.r_max())
    throw DomainError("bexp_profile_deriv: r outside [0, r_max)");
  if (alpha == 0.0) return 1.0;
  if (r == 0.0) return 1.0;
  double w = std::log(bexp_profile(spec, alpha, r) / r);
  return std::exp((spec.n - 1) * (alpha * log_sratio(spec, r) - w));
}

namespace detail {

// Chebyshev table of w(r) = log(rho_alpha(r)/r) on [0, r_end], fitted in the
// variable u with r = r_end sin^2(pi u / 2).  The cosine stretching doubles
// the approximation order at both endpoints, which matters on spheres where
// the integrand has a fractional-power zero at the far cut locus.  Node
// values come from cumulative per-segment GL15 integration of the
// log-scaled integrand; derivatives are never taken from the table.
struct BexpTable {
  double alpha = 1.0;
  double r_end = 0.0;
  double rho_end = 0.0;
  Chebyshev w;

  double u_of(double r) const {
    double q = std::clamp(r / r_end, 0.0, 1.0);
    return (2.0 / kPi) * std::asin(std::sqrt(q));
  }
  double w_at(double r) const { return w.eval(u_of(r)); }
  double rho_at(double r) const { return r * std::exp(w_at(r)); }
};

inline BexpTable build_bexp_table(const ManifoldSpec& spec, double alpha,
                                  double r_end) {
  const GlRule& g15 = gl_rule(15);
  const int n = spec.n;
  auto node_values = [&](int N) {
    std::vector<double> vals(N + 1, 0.0);
    std::vector<double> rs(N + 1);
    for (int k = 0; k <= N; ++k) {
      double u = 0.5 * (1.0 + std::cos(kPi * k / N));
      double su = std::sin(0.5 * kPi * u);
      rs[k] = r_end * su * su;  // rs[0] = r_end, rs[N] = 0
    }
    double log_i = -std::numeric_limits<double>::infinity();
    for (int k = N - 1; k >= 0; --k) {
      double a = rs[k + 1], b = rs[k];
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      double hs[15], m = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 15; ++i) {
        hs[i] = bexp_integrand_log(spec, alpha, mid + half * g15.nodes[i]);
        m = std::max(m, hs[i]);
      }
      double acc = 0.0;
      for (int i = 0; i < 15; ++i) acc += g15.weights[i] * std::exp(hs[i] - m);
      log_i = log_add_exp(log_i, m + std::log(acc * half));
      vals[k] = (std::log(static_cast<double>(n)) + log_i) / n - std::log(rs[k]);
    }
    vals[N] = 0.0;
    return vals;
  };

  BexpTable tab;
  tab.alpha = alpha;
  tab.r_end = r_end;
  Chebyshev prev;
  double last_diff = std::numeric_limits<double>::infinity();
  for (int N : {64, 128, 256, 512, 1024}) {
    Chebyshev cur = Chebyshev::from_values(0.0, 1.0, node_values(N));
    if (!prev.empty()) {
      double d = 0.0;
      for (int i = 0; i <= 500; ++i) {
        double u = 0.995 * i / 500.0;
        d = std::max(d, std::fabs(cur.eval(u) - prev.eval(u)));
      }
      last_diff = d;
      if (d <= 3e-12) {
        tab.w = cur;
        tab.rho_end = tab.rho_at(r_end);
        return tab;
      }
    }
    prev = cur;
    tab.w = cur;
  }
  // Fractional-power cut-locus behavior caps the convergence rate; accept a
  // looser absolute level on log(rho/r) there, refuse anything worse.
  if (last_diff > 1e-7)
    throw ConvergenceError("bexp table: profile interpolant did not converge");
  tab.rho_end = tab.rho_at(r_end);
  return tab;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Azimuthal scalar-Jacobian chart.  The map sends r*omega in the pole's
// tangent frame to the manifold point at geodesic radius R_T(r) in direction
// omega, with R_T determined by the chart kind, the dial alpha (bExp only),
// and the base convention.  Immutable after construction; any interpolation
// tables are built eagerly, so instances may be shared across threads.
// ---------------------------------------------------------------------------

class Chart {
 public:
  Chart(const ManifoldSpec& spec, ChartKind kind, double alpha,
        BaseConvention conv, Vec pole)
      : spec_(spec), kind_(kind), conv_(conv), alpha_(alpha), pole_(std::move(pole)) {
    if (kind_ == ChartKind::BExp) {
      if (!(alpha_ >= 0.0 && alpha_ <= 1.0))
        throw DomainError("chart: bexp alpha outside [0,1]");
    } else {
      alpha_ = 0.0;
    }
    frame_ = tangent_frame(spec_, pole_);
    build_tables();
  }
  Chart(const ManifoldSpec& spec, ChartKind kind, double alpha = 0.0)
      : Chart(spec, kind, alpha, default_convention(spec), default_pole(spec)) {}
  Chart(const ManifoldSpec& spec, ChartKind kind, double alpha, BaseConvention conv)
      : Chart(spec, kind, alpha, conv, default_pole(spec)) {}

  static Chart exp(const ManifoldSpec& s) { return Chart(s, ChartKind::Exp); }
  static Chart lambert(const ManifoldSpec& s) { return Chart(s, ChartKind::Lambert); }
  static Chart bexp(const ManifoldSpec& s, double a) { return Chart(s, ChartKind::BExp, a); }
  static Chart gcl(const ManifoldSpec& s) { return Chart(s, ChartKind::Gcl); }

  const ManifoldSpec& spec() const { return spec_; }
  ChartKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  BaseConvention convention() const { return conv_; }
  const Vec& pole() const { return pole_; }
  const Frame& frame() const { return frame_; }
  // Largest valid tangent radius.
  double r_dom() const { return r_dom_; }

  bool geodesic_exact() const {
    return kind_ == ChartKind::Exp || kind_ == ChartKind::Gcl;
  }

  // Tangent-plane profile rho(r) feeding the base radius map.
  double profile(double r) const {
    if (identity_profile()) return r;
    return table_->rho_at(r);
  }
  double profile_deriv(double r) const {
    if (identity_profile()) return 1.0;
    if (r == 0.0) return 1.0;
    return std::exp((spec_.n - 1) *
                    (alpha_ * log_sratio(spec_, r) - table_->w_at(r)));
  }

  double radius_map(double r) const {
    check_domain(r);
    if (geodesic_exact()) return std::min(r, spec_.r_max());
    return base_forward(profile(r));
  }

  double radius_map_deriv(double r) const {
    check_domain(r);
    if (geodesic_exact()) return 1.0;
    if (r == 0.0) return 1.0;
    double rho = profile(r), drho = profile_deriv(r);
    if (conv_ == BaseConvention::Verbatim || spec_.n == 2) {
      double z = rho / (2.0 * spec_.R_c);
      double under = 1.0 - spec_.kappa_hat() * z * z;
      if (under <= 0.0) throw DomainError("radius_map_deriv: at the chart boundary");
      return drho / std::sqrt(under);
    }
    double R = base_forward(rho);
    return drho *
           std::exp((spec_.n - 1) * (std::log(rho) - log_s_kappa(spec_, R)));
  }

  double radius_map_inverse(double R) const {
    if (R < 0.0) throw DomainError("radius_map_inverse: negative radius");
    if (R > spec_.r_max()) throw DomainError("radius_map_inverse: beyond the cut locus");
    if (geodesic_exact()) return R;
    if (R == 0.0) return 0.0;
    double rho_t = base_inverse(R);
    double rho_top = profile(r_dom_finite());
    if (rho_t > rho_top * (1.0 + 1e-9))
      throw DomainError("radius_map_inverse: geodesic radius not attainable in this chart");
    return profile_inverse(std::min(rho_t, rho_top));
  }

  // Scalar log-Jacobian declared by the chart kind.
  double log_det(double r) const {
    switch (kind_) {
      case ChartKind::Exp: return (spec_.n - 1) * log_sratio(spec_, r);
      case ChartKind::Lambert: return 0.0;
      case ChartKind::BExp:
        return alpha_ * (spec_.n - 1) * log_sratio(spec_, r);
      case ChartKind::Gcl:
        if (conv_ == BaseConvention::EqualArea)
          return (spec_.n - 1) * log_sratio(spec_, r);
        return (spec_.n - 1) * log_sratio(spec_, 0.5 * r) +
               std::log(c_kappa(spec_, 0.5 * r));
    }
    return 0.0;
  }

  double log_det_deriv(double r) const {
    switch (kind_) {
      case ChartKind::Exp: return (spec_.n - 1) * log_sratio_deriv(spec_, r);
      case ChartKind::Lambert: return 0.0;
      case ChartKind::BExp:
        return alpha_ * (spec_.n - 1) * log_sratio_deriv(spec_, r);
      case ChartKind::Gcl: {
        if (conv_ == BaseConvention::EqualArea)
          return (spec_.n - 1) * log_sratio_deriv(spec_, r);
        double half = 0.5 * r;
        double cot_term = -spec_.kappa_hat() * s_kappa(spec_, half) /
                          (2.0 * spec_.R_c * spec_.R_c * c_kappa(spec_, half));
        return 0.5 * (spec_.n - 1) * log_sratio_deriv(spec_, half) + cot_term;
      }
    }
    return 0.0;
  }

  double log_det_second(double r) const {
    switch (kind_) {
      case ChartKind::Exp: return (spec_.n - 1) * log_sratio_second(spec_, r);
      case ChartKind::Lambert: return 0.0;
      case ChartKind::BExp:
        return alpha_ * (spec_.n - 1) * log_sratio_second(spec_, r);
      case ChartKind::Gcl: {
        if (conv_ == BaseConvention::EqualArea)
          return (spec_.n - 1) * log_sratio_second(spec_, r);
        double half = 0.5 * r;
        double c = c_kappa(spec_, half);
        return 0.25 * (spec_.n - 1) * log_sratio_second(spec_, half) -
               spec_.kappa_hat() / (4.0 * spec_.R_c * spec_.R_c * c * c);
      }
    }
    return 0.0;
  }

  Vec forward(const TangentPolar& x) const {
    if (x.r == 0.0) return pole_;
    double R = radius_map(x.r);
    return point_from_polar(spec_, pole_, frame_, R, x.omega);
  }
  Vec forward(const Vec& coords) const {
    double r = vec_norm(coords);
    if (r == 0.0) return pole_;
    Vec omega(coords);
    for (double& c : omega) c /= r;
    return forward(TangentPolar{r, omega});
  }

  TangentPolar inverse(const Vec& q) const {
    double R = geodesic_distance(spec_, pole_, q);
    if (R < 1e-14 * spec_.R_c) {
      Vec e1(spec_.n, 0.0);
      e1[0] = 1.0;
      return TangentPolar{0.0, e1};
    }
    Vec v = log_map(spec_, pole_, q);
    Vec omega = frame_coords(spec_, frame_, v);
    for (double& c : omega) c /= R;
    return TangentPolar{radius_map_inverse(R), omega};
  }

 private:
  bool identity_profile() const {
    return kind_ == ChartKind::Lambert ||
           (kind_ == ChartKind::BExp && alpha_ == 0.0);
  }

  double r_dom_finite() const {
    if (std::isfinite(r_dom_)) return r_dom_;
    return table_ ? table_->r_end : spec_.r_max();
  }

  void check_domain(double r) const {
    if (r < 0.0) throw DomainError("chart: negative tangent radius");
    if (r > r_dom_ * (1.0 + 1e-9))
      throw DomainError("chart: tangent radius outside the chart domain");
  }

  // Base radius map R = B(rho) and inverse, per convention.  At n = 2 the
  // volume-matching map coincides with the planar one, so both conventions
  // share the closed form there.
  double base_forward(double rho) const {
    if (conv_ == BaseConvention::Verbatim || spec_.n == 2) {
      double z = rho / (2.0 * spec_.R_c);
      if (spec_.kind == ManifoldKind::Sphere) {
        if (z > 1.0 + 1e-12)
          throw DomainError("chart: profile radius beyond the base map range");
        z = std::min(z, 1.0);
      }
      return 2.0 * spec_.R_c * ars(spec_, z);
    }
    const detail::BexpTable& vt = *vtable_;
    if (rho > vt.rho_end * (1.0 + 1e-9))
      throw DomainError("chart: profile radius beyond the base map range");
    auto f = [&](double R) { return vt.rho_at(R); };
    auto df = [&](double R) {
      return std::exp((spec_.n - 1) *
                      (log_s_kappa(spec_, R) - std::log(vt.rho_at(R))));
    };
    return solve_increasing(f, df, std::min(rho, vt.rho_end), 0.0, vt.r_end);
  }

  double base_inverse(double R) const {
    if (conv_ == BaseConvention::Verbatim || spec_.n == 2)
      return 2.0 * s_kappa(spec_, 0.5 * R);
    const detail::BexpTable& vt = *vtable_;
    if (R > vt.r_end * (1.0 + 1e-9))
      throw DomainError("chart: geodesic radius beyond the cached base range");
    return vt.rho_at(std::min(R, vt.r_end));
  }

  double profile_inverse(double y) const {
    if (identity_profile()) return y;
    auto f = [&](double r) { return profile(r); };
    auto df = [&](double r) { return profile_deriv(r); };
    return solve_increasing(f, df, y, 0.0, table_->r_end);
  }

  void build_tables() {
    const bool sphere = spec_.kind == ManifoldKind::Sphere;
    const bool need_vtable = conv_ == BaseConvention::EqualArea && spec_.n >= 3 &&
                             !geodesic_exact();
    if (need_vtable) {
      double r_v = sphere ? kPi * spec_.R_c : 36.0 * spec_.R_c;
      vtable_ = std::make_shared<const detail::BexpTable>(
          detail::build_bexp_table(spec_, 1.0, r_v));
    }
    const bool need_table = kind_ == ChartKind::BExp && alpha_ > 0.0;
    if (need_table) {
      if (sphere) {
        if (alpha_ == 1.0 && vtable_) {
          table_ = vtable_;
        } else {
          table_ = std::make_shared<const detail::BexpTable>(
              detail::build_bexp_table(spec_, alpha_, kPi * spec_.R_c));
        }
      } else {
        double r_end = grow_hyperbolic_domain();
        table_ = std::make_shared<const detail::BexpTable>(
            detail::build_bexp_table(spec_, alpha_, r_end));
      }
    }
    r_dom_ = compute_r_dom();
  }

  // Extend the tangent domain until the pushforward covers geodesic radii up
  // to 32 R_c, stopping earlier if the profile integrand would leave the
  // representable range.
  double grow_hyperbolic_domain() {
    double target_R = 32.0 * spec_.R_c;
    double target_rho = base_inverse(target_R);
    auto guard_ok = [&](double r) {
      double rh = r / spec_.R_c;
      return (spec_.n - 1) * (alpha_ * rh + (1.0 - alpha_) * std::log(std::max(rh, 1.0))) <=
             600.0;
    };
    double r_hi = 4.0 * spec_.R_c;
    while (bexp_profile(spec_, alpha_, r_hi) < target_rho && guard_ok(2.0 * r_hi))
      r_hi *= 2.0;
    return r_hi;
  }

  double compute_r_dom() const {
    const bool sphere = spec_.kind == ManifoldKind::Sphere;
    if (geodesic_exact()) return spec_.r_max();
    if (identity_profile()) {
      if (conv_ == BaseConvention::Verbatim || spec_.n == 2)
        return sphere ? 2.0 * spec_.R_c : std::numeric_limits<double>::infinity();
      return vtable_->rho_end;
    }
    if (!sphere) return table_->r_end;
    double rho_cap = (conv_ == BaseConvention::EqualArea && spec_.n >= 3)
                         ? vtable_->rho_end
                         : 2.0 * spec_.R_c;
    if (table_->rho_end <= rho_cap * (1.0 - 1e-12)) return kPi * spec_.R_c;
    return profile_inverse(rho_cap * (1.0 - 1e-12));
  }

  ManifoldSpec spec_;
  ChartKind kind_;
  BaseConvention conv_;
  double alpha_;
  Vec pole_;
  Frame frame_;
  double r_dom_ = 0.0;
  std::shared_ptr<const detail::BexpTable> table_;
  std::shared_ptr<const detail::BexpTable> vtable_;
};

// ---------------------------------------------------------------------------
// Chart diagnostics.
// ---------------------------------------------------------------------------

// log_det minus the true polar Riemannian change of volume
// (n-1) log(s_kappa(R_T(r))/r) + log R_T'(r), with R_T' taken by central
// differences.  Zero certifies the declared log-det.
inline double jacobian_consistency_check(const Chart& chart, double r) {
  const ManifoldSpec& spec = chart.spec();
  double h = 1e-5 * spec.R_c;
  double lo = std::max(r - h, 0.0), hi = std::min(r + h, chart.r_dom());
  double deriv = (chart.radius_map(hi) - chart.radius_map(lo)) / (hi - lo);
  double R = chart.radius_map(r);
  double truth = (spec.n - 1) * (log_s_kappa(spec, R) - std::log(r)) + std::log(deriv);
  return chart.log_det(r) - truth;
}

inline double geodesic_mismatch(const Chart& chart, double r) {
  return std::fabs(chart.radius_map(r) - r);
}

struct BiLipschitz {
  double m = 0.0;
  double L = 0.0;
};

// Extremes of the differential's polar singular values (radial R_T'(r),
// angular s_kappa(R_T(r))/r) over the shell delta <= r <= R.
inline BiLipschitz bilipschitz_constants(const Chart& chart, double delta, double R) {
  if (!(0.0 < delta && delta < R && R <= chart.r_dom()))
    throw DomainError("bilipschitz_constants: invalid shell");
  const ManifoldSpec& spec = chart.spec();
  const int grid = 4096;
  BiLipschitz out{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i <= grid; ++i) {
    double r = delta + (R - delta) * i / grid;
    double radial = chart.radius_map_deriv(r);
    double angular = s_kappa(spec, chart.radius_map(r)) / r;
    out.m = std::min({out.m, radial, angular});
    out.L = std::max({out.L, radial, angular});
  }
  return out;
}

// Log-log slope of |d/dr log_det| against (pi R_c - r); the spherical GCL
// gradient diverges like 1/(pi R_c - r), so the expected exponent is -1.
inline double cutlocus_blowup_rate(const Chart& chart, const std::vector<double>& r_grid) {
  const ManifoldSpec& spec = chart.spec();
  if (spec.kind != ManifoldKind::Sphere)
    throw DomainError("cutlocus_blowup_rate: no cut-locus blow-up off the sphere");
  std::vector<double> xs, ys;
  for (double r : r_grid) {
    double g = std::fabs(chart.log_det_deriv(r));
    xs.push_back(std::log(kPi * spec.R_c - r));
    ys.push_back(std::log(g));
  }
  return linear_fit(xs, ys).slope;
}

// User-supplied increasing radial profile for the energy functional.
struct RadialProfile {
  std::function<double(double)> rho;
  std::function<double(double)> deriv;
};

// E_alpha[rho] = Int_0^{r*} r^{n-1} [ (1-alpha) A(r)^2
//                                    + alpha (A(r) - (n-1) log(s_kappa(r)/r))^2 ] dr
// with A = (n-1) log(rho/r) + log rho', the chart's scalar log-det.  The first
// term penalizes volume distortion (A = 0 is Lambert), the second the gap to
// the geodesic-exact log-det (A = (n-1) log_sratio is Exp).  Pointwise strict
// convexity in A makes the balanced profile, A = alpha (n-1) log_sratio, the
// unique minimizer over admissible profiles.
inline double variational_energy(const ManifoldSpec& spec, double alpha,
                                 const RadialProfile& profile, double r_star) {
  if (!(r_star > 0.0 && r_star < spec.r_max()))
    throw DomainError("variational_energy: r_star outside (0, r_max)");
  return integrate(
      [&](double r) {
        double rho = profile.rho(r);
        if (spec.kind == ManifoldKind::Sphere && rho > 2.0 * spec.R_c * (1.0 + 1e-12))
          throw DomainError("variational_energy: profile leaves the base map domain");
        double a = (spec.n - 1) * std::log(rho / r) + std::log(profile.deriv(r));
        double g = a - (spec.n - 1) * log_sratio(spec, r);
        return std::pow(r, spec.n - 1) * ((1.0 - alpha) * a * a + alpha * g * g);
      },
      0.0, r_star, 1e-9);
}

// ---------------------------------------------------------------------------
// Two-chart atlas gate on the sphere.
// ---------------------------------------------------------------------------

// Smooth partition of unity subordinate to the two polar caps: psi_plus = 1
// within delta of the north pole, 0 within delta of the south pole (its own
// cut locus), transitioning over a band of the given width.
struct AtlasGate {
  ManifoldSpec spec;
  double delta = 0.0;
  double width = 0.0;
  Vec pole_north;
  Vec pole_south;

  // C-infinity monotone step: 0 for t <= 0, 1 for t >= 1.
  static double bump(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double f = std::exp(-1.0 / t);
    double g = std::exp(-1.0 / (1.0 - t));
    return f / (f + g);
  }

  double psi_plus(const Vec& q) const {
    double rp = geodesic_distance(spec, pole_north, q);
    return bump((kPi * spec.R_c - delta - rp) / width);
  }
  double psi_minus(const Vec& q) const {
    double rp = geodesic_distance(spec, pole_north, q);
    return bump(1.0 - (kPi * spec.R_c - delta - rp) / width);
  }
};

inline AtlasGate make_atlas_gate(const ManifoldSpec& spec, double delta, double width) {
  if (spec.kind != ManifoldKind::Sphere)
    throw DomainError("atlas gate: defined on the sphere only");
  if (!(delta > 0.0 && width > 0.0))
    throw DomainError("atlas gate: delta and width must be > 0");
  if (width > kPi * spec.R_c - 2.0 * delta)
    throw DomainError("atlas gate: width exceeds pi R_c - 2 delta");
  AtlasGate g;
  g.spec = spec;
  g.delta = delta;
  g.width = width;
  g.pole_north = default_pole(spec);
  g.pole_south = antipode(spec, g.pole_north);
  return g;
}

}  // namespace rcg
