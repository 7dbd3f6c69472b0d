#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rcg/charts.hpp"
#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/numerics.hpp"
#include "rcg/radial.hpp"
#include "rcg/rng.hpp"

namespace rcg {

// Radially compensated model: the tangent base density is chosen so that the
// pushforward geodesic radius R = d(pole, Q) has exactly the target law,
// whatever the chart.  The radius law, Fisher information, and KL structure
// are therefore chart-independent.
struct RcModel {
  ManifoldSpec spec;
  Chart chart;
  RadialLaw law;

  RcModel(const ManifoldSpec& s, Chart c, RadialLaw l)
      : spec(s), chart(std::move(c)), law(std::move(l)) {
    if (!(chart.spec() == spec))
      throw DomainError("rc model: chart built on a different manifold");
    bool both_inf = !std::isfinite(law.r_max()) && !std::isfinite(spec.r_max());
    if (!both_inf && std::fabs(law.r_max() - spec.r_max()) > 1e-12 * spec.R_c)
      throw DomainError("rc model: law truncation must equal the manifold radius bound");
  }
};

// Raw baseline: isotropic N(0, sigma^2 I_n) in the tangent frame pushed
// through the exponential map; the radius law is chi_n scaled by sigma.
struct WrappedModel {
  ManifoldSpec spec;
  Chart chart;
  double sigma;

  WrappedModel(const ManifoldSpec& s, double sig)
      : spec(s), chart(Chart::exp(s)), sigma(sig) {
    if (!(sigma > 0.0)) throw DomainError("wrapped model: sigma must be > 0");
  }
};

struct SampleBatch {
  std::vector<Vec> points;
  std::vector<double> radii;  // the radius each point was drawn at
};

// ---------------------------------------------------------------------------
// RC base density and sampling.
// ---------------------------------------------------------------------------

// f_base(r) = law.pdf(R_T(r)) * R_T'(r); the change of variables through the
// radius map makes it integrate to 1 with no explicit normalizer.
inline double rc_base_radial_density(const RcModel& model, double r) {
  return model.law.pdf(model.chart.radius_map(r)) * model.chart.radius_map_deriv(r);
}

// Draw R ~ law and a uniform direction, place the point at tangent radius
// radius_map_inverse(R) so that d(pole, Q) = R for every chart kind.
inline SampleBatch sample_rc(const RcModel& model, std::size_t n_samples, Pcg32& rng) {
  SampleBatch out;
  out.points.reserve(n_samples);
  out.radii.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double R = model.law.sample(rng);
    Vec omega = sample_uniform_direction(model.spec.n, rng);
    double r = model.chart.radius_map_inverse(R);
    out.points.push_back(model.chart.forward(TangentPolar{r, omega}));
    out.radii.push_back(R);
  }
  return out;
}

// Density of the geodesic radius (the 1D law itself).
inline double log_density_radial(const RcModel& model, const Vec& q) {
  double R = geodesic_distance(model.spec, model.chart.pole(), q);
  if (model.spec.kind == ManifoldKind::Sphere &&
      R >= model.spec.r_max() * (1.0 - 1e-12))
    throw CutLocusError("log_density_radial: point at the cut locus");
  return model.law.log_pdf(R);
}

// Density with respect to the Riemannian volume: the radius law spread
// uniformly over the geodesic sphere of area A_{n-1} s_kappa(R)^{n-1}.
inline double log_density_volume(const RcModel& model, const Vec& q) {
  double R = geodesic_distance(model.spec, model.chart.pole(), q);
  if (model.spec.kind == ManifoldKind::Sphere &&
      R >= model.spec.r_max() * (1.0 - 1e-12))
    throw CutLocusError("log_density_volume: point at the cut locus");
  return model.law.log_pdf(R) - std::log(unit_sphere_area(model.spec.n)) -
         (model.spec.n - 1) * log_s_kappa(model.spec, R);
}

inline SampleBatch sample_wrapped(const WrappedModel& model, std::size_t n_samples,
                                  Pcg32& rng) {
  SampleBatch out;
  out.points.reserve(n_samples);
  out.radii.reserve(n_samples);
  const Frame& fr = model.chart.frame();
  for (std::size_t i = 0; i < n_samples; ++i) {
    Vec coords(model.spec.n);
    for (int k = 0; k < model.spec.n; ++k)
      coords[k] = model.sigma * standard_normal(rng);
    out.points.push_back(
        exp_map(model.spec, model.chart.pole(), frame_vector(fr, coords)));
    out.radii.push_back(vec_norm(coords));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radius-histogram KL.
// ---------------------------------------------------------------------------

// KL of a binned empirical radius distribution against precomputed bin
// masses; empty bins contribute zero (0 log 0 = 0 convention), which
// lower-bounds the KL.
inline double kl_histogram(const std::vector<std::size_t>& counts,
                           const std::vector<double>& bin_masses, std::size_t n_total) {
  double kl = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    double q = static_cast<double>(counts[i]) / static_cast<double>(n_total);
    kl += q * std::log(q / bin_masses[i]);
  }
  return kl;
}

// Histogram KL of sample radii against the law on [0, hi): the law's bin
// masses are integrated over a fixed uniform evaluation grid (grid_points
// midpoints), the empirical histogram uses hist_bins bins.  At N = 2e4 the
// zero-bias floor for a matching law sits near 1e-3.
inline double radius_kl(const std::vector<double>& samples_r, const RadialLaw& law,
                        double hi, int grid_points = 500, int hist_bins = 50) {
  if (samples_r.size() < 1000) throw DomainError("radius_kl: need at least 1e3 samples");
  if (grid_points % hist_bins != 0)
    throw DomainError("radius_kl: grid must refine the histogram bins");
  std::vector<double> masses(hist_bins, 0.0);
  const double dg = hi / grid_points;
  for (int j = 0; j < grid_points; ++j) {
    double r = (j + 0.5) * dg;
    masses[j / (grid_points / hist_bins)] += law.pdf(r) * dg;
  }
  std::vector<std::size_t> counts(hist_bins, 0);
  const double db = hi / hist_bins;
  for (double r : samples_r) {
    if (r < 0.0 || r >= hi) continue;
    counts[static_cast<std::size_t>(r / db)]++;
  }
  return kl_histogram(counts, masses, samples_r.size());
}

// ---------------------------------------------------------------------------
// Fisher information and related diagnostics.
// ---------------------------------------------------------------------------

struct FisherEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Monte Carlo Fisher information of law parameter iparam from RC samples:
// scores are finite differences of the log radius density (h = 1e-5
// max(|theta|,1)), radii are recomputed from ambient distances so the whole
// chart pipeline is exercised.
inline FisherEstimate fisher_manifold_mc(const RcModel& model, std::size_t iparam,
                                         std::size_t n_samples, Pcg32& rng) {
  double h = 1e-5 * std::max(std::fabs(model.law.params().at(iparam)), 1.0);
  std::vector<double> up = model.law.params(), dn = model.law.params();
  up[iparam] += h;
  dn[iparam] -= h;
  RadialLaw lp = RadialLaw::make(model.law.kind(), up, model.law.r_max());
  RadialLaw lm = RadialLaw::make(model.law.kind(), dn, model.law.r_max());

  SampleBatch batch = sample_rc(model, n_samples, rng);
  std::vector<double> sq;
  sq.reserve(n_samples);
  double cap = std::isfinite(model.law.r_max())
                   ? model.law.r_max() * (1.0 - 1e-12)
                   : std::numeric_limits<double>::infinity();
  for (const Vec& q : batch.points) {
    double R = std::min(geodesic_distance(model.spec, model.chart.pole(), q), cap);
    double score = (lp.log_pdf(R) - lm.log_pdf(R)) / (2.0 * h);
    sq.push_back(score * score);
  }
  FisherEstimate est;
  est.value = mean_of(sq);
  est.stderr_ = sd_of(sq) / std::sqrt(static_cast<double>(sq.size()));
  return est;
}

struct ChartTermVariance {
  double alpha = 0.0;
  double variance = 0.0;
  double ratio_to_one = 0.0;
};

// Var[ alpha (n-1) log(s_kappa(R)/R) ] under the model's radius law.  The
// alpha-term is a scalar multiple of the alpha = 1 term, so the variance is
// computed once and scaled by alpha^2 (the ratio law is an identity).
inline std::vector<ChartTermVariance> chart_term_variance(
    const RcModel& model, const std::vector<double>& alphas, std::size_t n_samples,
    Pcg32& rng) {
  std::vector<double> base;
  base.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double R = model.law.sample(rng);
    base.push_back((model.spec.n - 1) * log_sratio(model.spec, R));
  }
  double v1 = variance_of(base);
  std::vector<ChartTermVariance> out;
  for (double a : alphas) out.push_back({a, a * a * v1, a * a});
  return out;
}

struct MisspecSensitivity {
  double sup_grad = 0.0;  // sup |d/dr Delta| over [0, R0], chart-term scaled
  double bound = 0.0;     // small-radius model alpha (n-1) |kappa - kappa~| R0 / 3
};

// Sensitivity of the bExp(alpha) chart term to a mis-specified curvature:
// Delta(r) = log(s_kappa~(r)/s_kappa(r)), scanned by central differences on a
// dense grid; both outputs carry the chart-term scale alpha (n-1).
inline MisspecSensitivity misspec_sensitivity(const ManifoldSpec& spec,
                                              const ManifoldSpec& spec_tilde,
                                              double R0, double alpha) {
  if (spec.kind != spec_tilde.kind)
    throw DomainError("misspec_sensitivity: curvature proxies must share the space family");
  if (spec.n != spec_tilde.n)
    throw DomainError("misspec_sensitivity: dimensions must match");
  if (!(R0 > 0.0 && R0 < std::min(spec.r_max(), spec_tilde.r_max())))
    throw DomainError("misspec_sensitivity: R0 outside the shared domain");
  auto delta = [&](double r) {
    return log_sratio(spec_tilde, r) - log_sratio(spec, r);
  };
  const double scale = alpha * (spec.n - 1);
  const double h = 1e-5 * R0;
  const int grid = 2000;
  double sup = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double r = R0 * i / grid;
    double lo = std::max(r - h, 0.5 * h), hi = std::min(r + h, R0);
    sup = std::max(sup, std::fabs((delta(hi) - delta(lo)) / (hi - lo)));
  }
  MisspecSensitivity out;
  out.sup_grad = scale * sup;
  out.bound = scale * std::fabs(spec.kappa() - spec_tilde.kappa()) * R0 / 3.0;
  return out;
}

// ---------------------------------------------------------------------------
// Products of constant-curvature factors.
// ---------------------------------------------------------------------------

struct ProductBatch {
  std::vector<SampleBatch> factors;  // factors[k].points[i] belong to joint sample i
};

// Independent per-factor RC sampling; factor radii are independent with
// their own laws, and Fisher information adds across factors.
inline ProductBatch rc_product(const std::vector<RcModel>& models,
                               std::size_t n_samples, Pcg32& rng) {
  if (models.size() < 2) throw DomainError("rc_product: need at least two factors");
  ProductBatch out;
  for (const RcModel& m : models) out.factors.push_back(sample_rc(m, n_samples, rng));
  return out;
}

struct ProductFisher {
  std::vector<FisherEstimate> per_factor;
  FisherEstimate total;
};

inline ProductFisher product_fisher_mc(const std::vector<RcModel>& models,
                                       std::size_t iparam, std::size_t n_samples,
                                       Pcg32& rng) {
  ProductFisher out;
  double var = 0.0;
  for (const RcModel& m : models) {
    FisherEstimate e = fisher_manifold_mc(m, iparam, n_samples, rng);
    out.total.value += e.value;
    var += e.stderr_ * e.stderr_;
    out.per_factor.push_back(e);
  }
  out.total.stderr_ = std::sqrt(var);
  return out;
}

// ---------------------------------------------------------------------------
// Balanced polar pushforward for user-supplied volume factors.
// ---------------------------------------------------------------------------

struct PolarVolumeFactor {
  int n = 2;                                       // tangent dimension
  std::function<double(double, const Vec&)> J;     // polar volume density
  bool radial_only = true;
  double envelope_bound = 1.0;  // M with J(r, omega) <= M * angular average
};

struct PolarSample {
  double r = 0.0;
  Vec omega;
};

// Radial-only factors: R ~ law with a uniform direction, so the radius law
// is exact.  Angular factors (n = 2): rejection against the uniform-direction
// envelope; the joint density is law.pdf(r) J(r,omega)/Jbar(r), whose radius
// marginal is still exactly the law.
inline std::vector<PolarSample> balanced_polar_sample(const PolarVolumeFactor& factor,
                                                      const RadialLaw& law,
                                                      std::size_t n_samples,
                                                      Pcg32& rng) {
  std::vector<PolarSample> out;
  out.reserve(n_samples);
  if (factor.radial_only) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      double r = law.sample(rng);
      out.push_back({r, sample_uniform_direction(factor.n, rng)});
    }
    return out;
  }
  if (factor.n != 2)
    throw DomainError("balanced_polar_sample: angular factors supported at n = 2");
  auto j_bar = [&](double r) {
    double acc = 0.0;
    for (int k = 0; k < 64; ++k) {
      double th = 2.0 * kPi * k / 64.0;
      acc += factor.J(r, Vec{std::cos(th), std::sin(th)});
    }
    return acc / 64.0;
  };
  std::size_t attempts = 0, cap = 10000 * n_samples;
  while (out.size() < n_samples) {
    if (++attempts > cap)
      throw ConvergenceError("balanced_polar_sample: rejection rate too high");
    double r = law.sample(rng);
    Vec omega = sample_uniform_direction(2, rng);
    double p = factor.J(r, omega) / (j_bar(r) * factor.envelope_bound);
    if (p > 1.0 + 1e-12)
      throw EnvelopeError("balanced_polar_sample: envelope bound violated");
    if (rng.uniform01() < p) out.push_back({r, omega});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-chart atlas density blend.
// ---------------------------------------------------------------------------

// psi+ log p+ + psi- log p-; each pole's model is evaluated only where its
// gate is nonzero, so no chart is queried within delta of its own cut locus.
// Both models must represent the same global density from antipodal poles
// (the south law mirrors the north law).
inline double atlas_log_density(const AtlasGate& gate, const RcModel& north,
                                const RcModel& south, const Vec& q) {
  double dp = geodesic_distance(gate.spec, south.chart.pole(),
                                antipode(gate.spec, north.chart.pole()));
  if (dp > 1e-9 * gate.spec.R_c)
    throw DomainError("atlas_log_density: poles are not antipodal");
  double wp = gate.psi_plus(q);
  double wm = gate.psi_minus(q);
  double acc = 0.0;
  if (wp > 0.0) acc += wp * log_density_volume(north, q);
  if (wm > 0.0) acc += wm * log_density_volume(south, q);
  return acc;
}

}  // namespace rcg
