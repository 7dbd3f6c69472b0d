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

enum class LawKind { TruncNormal, HalfNormal, Gamma, Weibull, LogNormal, HalfCauchy };

inline const char* law_kind_name(LawKind k) {
  switch (k) {
    case LawKind::TruncNormal: return "truncnormal";
    case LawKind::HalfNormal: return "halfnormal";
    case LawKind::Gamma: return "gamma";
    case LawKind::Weibull: return "weibull";
    case LawKind::LogNormal: return "lognormal";
    case LawKind::HalfCauchy: return "halfcauchy";
  }
  return "?";
}

// A positive scalar law truncated to [0, r_max).  Construction renormalizes
// the base density to the truncated support; cdf/quantile/sampling all act on
// the truncated law.  r_max may be infinite.
//
// Parameter layouts (params() order):
//   truncnormal: mu, sigma      gamma:   k (shape), beta (scale)
//   halfnormal:  sigma          weibull: k (shape), lambda (scale)
//   lognormal:   mu, sigma      halfcauchy: s (scale)
class RadialLaw {
 public:
  static RadialLaw trunc_normal(double mu, double sigma, double r_max) {
    require(sigma > 0.0, "truncnormal: sigma must be > 0");
    return RadialLaw(LawKind::TruncNormal, {mu, sigma}, r_max);
  }
  static RadialLaw half_normal(double sigma, double r_max) {
    require(sigma > 0.0, "halfnormal: sigma must be > 0");
    return RadialLaw(LawKind::HalfNormal, {sigma}, r_max);
  }
  static RadialLaw gamma(double k, double beta, double r_max) {
    require(k > 0.0 && beta > 0.0, "gamma: shape and scale must be > 0");
    return RadialLaw(LawKind::Gamma, {k, beta}, r_max);
  }
  static RadialLaw weibull(double k, double lambda, double r_max) {
    require(k > 0.0 && lambda > 0.0, "weibull: shape and scale must be > 0");
    return RadialLaw(LawKind::Weibull, {k, lambda}, r_max);
  }
  static RadialLaw log_normal(double mu, double sigma, double r_max) {
    require(sigma > 0.0, "lognormal: sigma must be > 0");
    return RadialLaw(LawKind::LogNormal, {mu, sigma}, r_max);
  }
  static RadialLaw half_cauchy(double s, double r_max) {
    require(s > 0.0, "halfcauchy: scale must be > 0");
    return RadialLaw(LawKind::HalfCauchy, {s}, r_max);
  }
  static RadialLaw make(LawKind kind, const std::vector<double>& params, double r_max) {
    std::size_t want = (kind == LawKind::HalfNormal || kind == LawKind::HalfCauchy) ? 1 : 2;
    require(params.size() == want, "radial law: wrong parameter count");
    switch (kind) {
      case LawKind::TruncNormal: return trunc_normal(params.at(0), params.at(1), r_max);
      case LawKind::HalfNormal: return half_normal(params.at(0), r_max);
      case LawKind::Gamma: return gamma(params.at(0), params.at(1), r_max);
      case LawKind::Weibull: return weibull(params.at(0), params.at(1), r_max);
      case LawKind::LogNormal: return log_normal(params.at(0), params.at(1), r_max);
      case LawKind::HalfCauchy: return half_cauchy(params.at(0), r_max);
    }
    throw DomainError("radial law: unknown kind");
  }

  LawKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double r_max() const { return r_max_; }
  // Probability the base law assigns to [0, r_max).
  double truncation_mass() const { return mass_; }

  double log_pdf(double r) const {
    if (r < 0.0 || r >= r_max_) return -std::numeric_limits<double>::infinity();
    return log_pdf_raw(r) - std::log(mass_);
  }
  double pdf(double r) const {
    if (r < 0.0 || r >= r_max_) return 0.0;
    return std::exp(log_pdf(r));
  }

  double cdf(double r) const {
    if (r <= 0.0) return 0.0;
    if (r >= r_max_) return 1.0;
    return std::clamp((cdf_raw(r) - low0_) / mass_, 0.0, 1.0);
  }

  double quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p outside [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return r_max_;
    return quantile_raw(low0_ + p * mass_);
  }

  double sample(Pcg32& rng) const { return quantile(rng.uniform01()); }

  // E[R^m] under the truncated law, by adaptive quadrature (infinite tails
  // mapped through r = 1 + t/(1-t)).
  double moment(int m) const {
    if (m == 0) return 1.0;
    if (m < 0) throw DomainError("moment: order must be >= 0");
    if (kind_ == LawKind::HalfCauchy && !std::isfinite(r_max_))
      throw DivergentMomentError("halfcauchy: moments of order >= 1 diverge without truncation");
    auto f = [&](double r) { return std::pow(r, m) * pdf(r); };
    if (std::isfinite(r_max_)) return integrate(f, 0.0, r_max_, 1e-10);
    return integrate(f, 0.0, 1.0, 1e-10) + integrate_to_inf(f, 1.0, 1e-10);
  }

  // Fisher information of parameter i: E[(d/dtheta_i log pdf)^2], with the
  // score from central differences (h = 1e-5 max(|theta_i|, 1)) so the
  // truncation normalization is differentiated along with the density.
  double fisher_1d(std::size_t iparam) const {
    if (iparam >= params_.size()) throw DomainError("fisher_1d: parameter index out of range");
    double h = 1e-5 * std::max(std::fabs(params_[iparam]), 1.0);
    std::vector<double> up = params_, dn = params_;
    up[iparam] += h;
    dn[iparam] -= h;
    RadialLaw lp = make(kind_, up, r_max_);
    RadialLaw lm = make(kind_, dn, r_max_);
    auto f = [&](double r) {
      double score = (lp.log_pdf(r) - lm.log_pdf(r)) / (2.0 * h);
      return score * score * pdf(r);
    };
    if (std::isfinite(r_max_)) return integrate(f, 0.0, r_max_, 1e-8);
    return integrate(f, 0.0, 1.0, 1e-8) + integrate_to_inf(f, 1.0, 1e-8);
  }

 private:
  RadialLaw(LawKind kind, std::vector<double> params, double r_max)
      : kind_(kind), params_(std::move(params)), r_max_(r_max) {
    require(r_max_ > 0.0, "radial law: r_max must be > 0");
    low0_ = cdf_raw(0.0);
    double hi = std::isfinite(r_max_) ? cdf_raw(r_max_) : 1.0;
    mass_ = hi - low0_;
    require(mass_ > 1e-300, "radial law: truncated support carries no mass");
  }

  static void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
  }

  double log_pdf_raw(double r) const {
    const std::vector<double>& p = params_;
    switch (kind_) {
      case LawKind::TruncNormal: {
        double z = (r - p[0]) / p[1];
        return -0.5 * z * z - std::log(p[1]) - 0.5 * std::log(2.0 * kPi);
      }
      case LawKind::HalfNormal: {
        double z = r / p[0];
        return 0.5 * std::log(2.0 / kPi) - std::log(p[0]) - 0.5 * z * z;
      }
      case LawKind::Gamma:
        return (p[0] - 1.0) * std::log(r) - r / p[1] - p[0] * std::log(p[1]) -
               std::lgamma(p[0]);
      case LawKind::Weibull: {
        double z = r / p[1];
        return std::log(p[0] / p[1]) + (p[0] - 1.0) * std::log(z) - std::pow(z, p[0]);
      }
      case LawKind::LogNormal: {
        if (r <= 0.0) return -std::numeric_limits<double>::infinity();
        double z = (std::log(r) - p[0]) / p[1];
        return -std::log(r) - std::log(p[1]) - 0.5 * std::log(2.0 * kPi) - 0.5 * z * z;
      }
      case LawKind::HalfCauchy:
        return std::log(2.0 / kPi) + std::log(p[0]) - std::log(p[0] * p[0] + r * r);
    }
    return 0.0;
  }

  double cdf_raw(double r) const {
    const std::vector<double>& p = params_;
    switch (kind_) {
      case LawKind::TruncNormal: return normal_cdf((r - p[0]) / p[1]);
      case LawKind::HalfNormal:
        return r <= 0.0 ? 0.0 : 2.0 * normal_cdf(r / p[0]) - 1.0;
      case LawKind::Gamma: return r <= 0.0 ? 0.0 : gamma_p(p[0], r / p[1]);
      case LawKind::Weibull:
        return r <= 0.0 ? 0.0 : -std::expm1(-std::pow(r / p[1], p[0]));
      case LawKind::LogNormal:
        return r <= 0.0 ? 0.0 : normal_cdf((std::log(r) - p[0]) / p[1]);
      case LawKind::HalfCauchy:
        return r <= 0.0 ? 0.0 : (2.0 / kPi) * std::atan(r / p[0]);
    }
    return 0.0;
  }

  double quantile_raw(double q) const {
    const std::vector<double>& p = params_;
    switch (kind_) {
      case LawKind::TruncNormal: return p[0] + p[1] * normal_quantile(q);
      case LawKind::HalfNormal: return p[0] * normal_quantile(0.5 * (1.0 + q));
      case LawKind::Gamma: {
        double hi = p[1] * (p[0] + 10.0 * std::sqrt(p[0]) + 10.0);
        while (cdf_raw(hi) < q) hi *= 2.0;
        auto f = [&](double x) { return cdf_raw(x); };
        auto df = [&](double x) { return std::exp(log_pdf_raw(x)); };
        return solve_increasing(f, df, q, 0.0, hi);
      }
      case LawKind::Weibull:
        return p[1] * std::pow(-std::log1p(-q), 1.0 / p[0]);
      case LawKind::LogNormal: return std::exp(p[0] + p[1] * normal_quantile(q));
      case LawKind::HalfCauchy: return p[0] * std::tan(0.5 * kPi * q);
    }
    return 0.0;
  }

  LawKind kind_;
  std::vector<double> params_;
  double r_max_;
  double low0_ = 0.0;
  double mass_ = 1.0;
};

}  // namespace rcg
