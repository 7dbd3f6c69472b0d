#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rcg/charts.hpp"
#include "rcg/manifold.hpp"
#include "rcg/numerics.hpp"
#include "rcg/radial.hpp"
#include "rcg/rc.hpp"
#include "rcg/rng.hpp"

namespace rcg {

using ordered_json = nlohmann::ordered_json;

// Worker cap for per-seed parallelism; results are merged in seed order, so
// the report bytes do not depend on the thread count.
inline unsigned rc_thread_cap() {
  if (const char* env = std::getenv("RC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

struct SeedStats {
  std::uint64_t seed = 0;
  double mean_r = 0.0;
  double var_r = 0.0;
  double kl = 0.0;
  double fisher = 0.0;
};

struct AggStat {
  double value = 0.0;
  double sd = 0.0;  // unbiased sd across seeds
};

struct RowReport {
  std::string label;
  ManifoldSpec spec = ManifoldSpec::sphere(2, 1.0);
  std::string variant;  // "rc" or "raw"
  std::string chart;
  double alpha = 0.0;
  bool has_kl = false;
  bool has_fisher = false;
  AggStat mean_r, var_r, kl, fisher;
  std::vector<SeedStats> per_seed;
};

struct BlockReport {
  std::string name;
  std::vector<RowReport> rows;
};

struct DiagnosticsReport {
  int schema_version = 1;
  std::uint64_t base_seed = 0;
  std::size_t n_samples = 0;
  int n_seeds = 0;
  std::vector<BlockReport> blocks;
};

// One experiment row: an RC model (chart kind + target law) or a wrapped
// baseline at raw_sigma.  When a law is present it is also the KL reference.
struct RunRowSpec {
  std::string label;
  ManifoldSpec spec = ManifoldSpec::sphere(2, 1.0);
  bool rc = true;
  ChartKind kind = ChartKind::Exp;
  double alpha = 0.0;
  std::optional<RadialLaw> law;
  double raw_sigma = 0.0;
};

namespace detail {

inline double kl_upper_edge(const ManifoldSpec& spec) {
  return spec.kind == ManifoldKind::Sphere ? spec.r_max() : 5.0 * spec.R_c;
}

// Radii are always recomputed from ambient distances so every statistic
// reflects the realized points, not the sampler's bookkeeping.
inline SeedStats run_row_seed(const RunRowSpec& row, std::uint64_t seed,
                              std::uint64_t stream, std::size_t n_samples) {
  Pcg32 rng(seed, stream);
  SeedStats st;
  st.seed = seed;

  std::vector<double> radii;
  radii.reserve(n_samples);
  if (row.rc) {
    RcModel model(row.spec, Chart(row.spec, row.kind, row.alpha,
                                  default_convention(row.spec)),
                  *row.law);
    SampleBatch batch = sample_rc(model, n_samples, rng);
    for (const Vec& q : batch.points)
      radii.push_back(geodesic_distance(row.spec, model.chart.pole(), q));

    double h = 1e-5 * std::max(std::fabs(model.law.params()[0]), 1.0);
    std::vector<double> up = model.law.params(), dn = model.law.params();
    up[0] += h;
    dn[0] -= h;
    RadialLaw lp = RadialLaw::make(model.law.kind(), up, model.law.r_max());
    RadialLaw lm = RadialLaw::make(model.law.kind(), dn, model.law.r_max());
    double cap = std::isfinite(model.law.r_max())
                     ? model.law.r_max() * (1.0 - 1e-12)
                     : std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double R : radii) {
      double s = (lp.log_pdf(std::min(R, cap)) - lm.log_pdf(std::min(R, cap))) / (2.0 * h);
      acc += s * s;
    }
    st.fisher = acc / static_cast<double>(radii.size());
  } else {
    WrappedModel model(row.spec, row.raw_sigma);
    SampleBatch batch = sample_wrapped(model, n_samples, rng);
    for (const Vec& q : batch.points)
      radii.push_back(geodesic_distance(row.spec, model.chart.pole(), q));
  }

  st.mean_r = mean_of(radii);
  st.var_r = variance_of(radii);
  if (row.law) st.kl = radius_kl(radii, *row.law, kl_upper_edge(row.spec));
  return st;
}

inline AggStat aggregate(const std::vector<SeedStats>& seeds, double SeedStats::*field) {
  std::vector<double> vals;
  for (const SeedStats& s : seeds) vals.push_back(s.*field);
  AggStat a;
  a.value = mean_of(vals);
  a.sd = vals.size() > 1 ? sd_of(vals) : 0.0;
  return a;
}

inline RowReport run_row(const RunRowSpec& row, std::uint64_t base_seed, int n_seeds,
                         std::uint64_t stream, std::size_t n_samples) {
  std::vector<SeedStats> seeds(n_seeds);
  unsigned cap = rc_thread_cap();
  int next = 0;
  while (next < n_seeds) {
    int batch = std::min<int>(static_cast<int>(cap), n_seeds - next);
    std::vector<std::thread> pool;
    for (int j = 0; j < batch; ++j) {
      int i = next + j;
      pool.emplace_back([&, i] {
        seeds[i] = run_row_seed(row, base_seed + static_cast<std::uint64_t>(i),
                                stream, n_samples);
      });
    }
    for (std::thread& th : pool) th.join();
    next += batch;
  }

  RowReport rep;
  rep.label = row.label;
  rep.spec = row.spec;
  rep.variant = row.rc ? "rc" : "raw";
  rep.chart = chart_kind_name(row.rc ? row.kind : ChartKind::Exp);
  rep.alpha = row.alpha;
  rep.per_seed = seeds;
  rep.mean_r = aggregate(seeds, &SeedStats::mean_r);
  rep.var_r = aggregate(seeds, &SeedStats::var_r);
  rep.has_kl = row.law.has_value();
  if (rep.has_kl) rep.kl = aggregate(seeds, &SeedStats::kl);
  rep.has_fisher = row.rc;
  if (rep.has_fisher) rep.fisher = aggregate(seeds, &SeedStats::fisher);
  return rep;
}

}  // namespace detail

inline DiagnosticsReport run_rows(const std::vector<std::pair<std::string, std::vector<RunRowSpec>>>& blocks,
                                  std::uint64_t base_seed, std::size_t n_samples,
                                  int n_seeds) {
  DiagnosticsReport rep;
  rep.base_seed = base_seed;
  rep.n_samples = n_samples;
  rep.n_seeds = n_seeds;
  std::uint64_t stream = 0;
  for (const auto& [name, rows] : blocks) {
    BlockReport block;
    block.name = name;
    for (const RunRowSpec& row : rows)
      block.rows.push_back(detail::run_row(row, base_seed, n_seeds, stream++, n_samples));
    rep.blocks.push_back(std::move(block));
  }
  return rep;
}

// Synthetic benchmark: RC charts against the wrapped baseline on a sphere
// block (truncated normal target) and a hyperbolic block (half-normal
// target), five seeds each.
inline DiagnosticsReport run_e1(std::uint64_t base_seed = 2024,
                                std::size_t n_samples = 20000, int n_seeds = 5) {
  ManifoldSpec s2 = ManifoldSpec::sphere(2, 1.0);
  ManifoldSpec h2 = ManifoldSpec::hyperbolic(2, 1.0);
  RadialLaw law_s2 = RadialLaw::trunc_normal(1.0, 0.35, s2.r_max());
  RadialLaw law_h2 = RadialLaw::half_normal(0.8, h2.r_max());

  auto rc_row = [](const std::string& label, const ManifoldSpec& sp, ChartKind k,
                   double a, const RadialLaw& law) {
    RunRowSpec r;
    r.label = label;
    r.spec = sp;
    r.rc = true;
    r.kind = k;
    r.alpha = a;
    r.law = law;
    return r;
  };
  auto raw_row = [](const std::string& label, const ManifoldSpec& sp, double sigma,
                    std::optional<RadialLaw> kl_ref) {
    RunRowSpec r;
    r.label = label;
    r.spec = sp;
    r.rc = false;
    r.raw_sigma = sigma;
    r.law = std::move(kl_ref);
    return r;
  };

  std::vector<RunRowSpec> sphere_rows{
      rc_row("rc-exp", s2, ChartKind::Exp, 0.0, law_s2),
      rc_row("rc-bexp-0.5", s2, ChartKind::BExp, 0.5, law_s2),
      rc_row("rc-gcl", s2, ChartKind::Gcl, 0.0, law_s2),
      raw_row("raw-exp", s2, 0.35, law_s2),
  };
  std::vector<RunRowSpec> hyper_rows{
      rc_row("rc-exp", h2, ChartKind::Exp, 0.0, law_h2),
      rc_row("rc-bexp-0.5", h2, ChartKind::BExp, 0.5, law_h2),
      rc_row("rc-gcl", h2, ChartKind::Gcl, 0.0, law_h2),
      raw_row("raw-exp", h2, 0.8, law_h2),
  };
  return run_rows({{"sphere", sphere_rows}, {"hyperbolic", hyper_rows}}, base_seed,
                  n_samples, n_seeds);
}

// Baseline cross-check: the wrapped model at a common sigma on both
// curvature signs, plus one RC row for contrast.
inline DiagnosticsReport run_e1b(std::uint64_t base_seed = 2024,
                                 std::size_t n_samples = 20000, int n_seeds = 5) {
  ManifoldSpec s2 = ManifoldSpec::sphere(2, 1.0);
  ManifoldSpec h2 = ManifoldSpec::hyperbolic(2, 1.0);
  RadialLaw law_s2 = RadialLaw::trunc_normal(1.0, 0.35, s2.r_max());

  RunRowSpec raw_s2;
  raw_s2.label = "raw-exp-sphere";
  raw_s2.spec = s2;
  raw_s2.rc = false;
  raw_s2.raw_sigma = 0.5;

  RunRowSpec raw_h2;
  raw_h2.label = "raw-exp-hyperbolic";
  raw_h2.spec = h2;
  raw_h2.rc = false;
  raw_h2.raw_sigma = 0.5;

  RunRowSpec rc_s2;
  rc_s2.label = "rc-exp-sphere";
  rc_s2.spec = s2;
  rc_s2.rc = true;
  rc_s2.kind = ChartKind::Exp;
  rc_s2.law = law_s2;

  return run_rows({{"baseline", {raw_s2, raw_h2, rc_s2}}}, base_seed, n_samples,
                  n_seeds);
}

inline ordered_json to_json(const AggStat& a) {
  return ordered_json{{"value", a.value}, {"sd", a.sd}};
}

inline ordered_json to_json(const DiagnosticsReport& rep) {
  ordered_json root;
  root["schema_version"] = rep.schema_version;
  root["protocol"] = ordered_json{{"base_seed", rep.base_seed},
                                  {"n_samples", rep.n_samples},
                                  {"n_seeds", rep.n_seeds}};
  ordered_json blocks = ordered_json::array();
  for (const BlockReport& block : rep.blocks) {
    ordered_json jb;
    jb["name"] = block.name;
    ordered_json rows = ordered_json::array();
    for (const RowReport& row : block.rows) {
      ordered_json jr;
      jr["label"] = row.label;
      jr["manifold"] = ordered_json{
          {"kind", row.spec.kind == ManifoldKind::Sphere ? "sphere" : "hyperbolic"},
          {"n", row.spec.n},
          {"R_c", row.spec.R_c}};
      jr["variant"] = row.variant;
      jr["chart"] = row.chart;
      jr["alpha"] = row.alpha;
      jr["mean_r"] = to_json(row.mean_r);
      jr["var_r"] = to_json(row.var_r);
      jr["kl"] = row.has_kl ? to_json(row.kl) : ordered_json(nullptr);
      jr["fisher"] = row.has_fisher ? to_json(row.fisher) : ordered_json(nullptr);
      ordered_json seeds = ordered_json::array();
      for (const SeedStats& s : row.per_seed) {
        ordered_json js;
        js["seed"] = s.seed;
        js["mean_r"] = s.mean_r;
        js["var_r"] = s.var_r;
        js["kl"] = row.has_kl ? ordered_json(s.kl) : ordered_json(nullptr);
        js["fisher"] = row.has_fisher ? ordered_json(s.fisher) : ordered_json(nullptr);
        seeds.push_back(std::move(js));
      }
      jr["per_seed"] = std::move(seeds);
      rows.push_back(std::move(jr));
    }
    jb["rows"] = std::move(rows);
    blocks.push_back(std::move(jb));
  }
  root["blocks"] = std::move(blocks);
  return root;
}

struct AtlasDiagnostics {
  double partition_max_dev = 0.0;  // max |psi+ + psi- - 1|
  double seam_grad_jump = 0.0;     // derivative mismatch across the band edges
  double band_sup_grad = 0.0;      // sup |d/dR log p| inside the blend band
};

// Probes the two-chart blended density along a meridian: the gates must
// partition unity, and the blended log density must stay C^1 across the
// edges of the handover band.  North carries TruncNormal(mu, sigma), south
// its mirror TruncNormal(R_max - mu, sigma).
inline AtlasDiagnostics atlas_diagnostics(const ManifoldSpec& spec, double delta,
                                          double width, double mu, double sigma,
                                          int grid = 400) {
  AtlasGate gate = make_atlas_gate(spec, delta, width);
  double r_max = spec.r_max();
  RcModel north(spec, Chart::exp(spec), RadialLaw::trunc_normal(mu, sigma, r_max));
  Chart south_chart(spec, ChartKind::Exp, 0.0, default_convention(spec),
                    antipode(spec, default_pole(spec)));
  RcModel south(spec, south_chart, RadialLaw::trunc_normal(r_max - mu, sigma, r_max));

  Vec e0(spec.n, 0.0);
  e0[0] = 1.0;
  auto at_radius = [&](double R) {
    return point_from_polar(spec, north.chart.pole(), north.chart.frame(), R, e0);
  };
  auto logp = [&](double R) { return atlas_log_density(gate, north, south, at_radius(R)); };
  const double fd = 1e-5 * spec.R_c;
  auto d1 = [&](double R) { return (logp(R + fd) - logp(R - fd)) / (2.0 * fd); };

  AtlasDiagnostics out;
  for (int i = 1; i < grid; ++i) {
    double R = r_max * i / grid;
    Vec q = at_radius(R);
    out.partition_max_dev = std::max(
        out.partition_max_dev, std::fabs(gate.psi_plus(q) + gate.psi_minus(q) - 1.0));
  }
  // A C^1 blend shows |d1(b+eps) - d1(b-eps)| ~ 2 eps |g''| -> 0, while a
  // kink in the gate handover would leave an eps-independent gap.
  const double b_lo = r_max - delta - width, b_hi = r_max - delta;
  const double eps = 1e-6 * spec.R_c;
  for (int i = 0; i <= 20; ++i) {
    double b = b_lo + (b_hi - b_lo) * i / 20;
    out.seam_grad_jump = std::max(out.seam_grad_jump, std::fabs(d1(b + eps) - d1(b - eps)));
  }
  for (int i = 0; i <= grid; ++i) {
    double R = b_lo + eps + (b_hi - b_lo - 2 * eps) * i / grid;
    out.band_sup_grad = std::max(out.band_sup_grad, std::fabs(d1(R)));
  }
  return out;
}

struct CoveragePoint {
  double predicted = 0.0;
  double empirical = 0.0;
};

struct CoverageCurve {
  std::vector<CoveragePoint> points;
  double dkw_band = 0.0;  // 1.36 / sqrt(N)
};

// Empirical CDF of the radii evaluated at the law's quantiles; for a correct
// radius law the curve hugs the diagonal within the DKW band.
inline CoverageCurve coverage_curve(const std::vector<double>& samples_r,
                                    const RadialLaw& law,
                                    const std::vector<double>& quantile_grid) {
  if (samples_r.empty()) throw DomainError("coverage_curve: no samples");
  CoverageCurve out;
  out.dkw_band = 1.36 / std::sqrt(static_cast<double>(samples_r.size()));
  for (double p : quantile_grid) {
    double q = law.quantile(p);
    std::size_t c = 0;
    for (double r : samples_r)
      if (r <= q) ++c;
    out.points.push_back(
        {p, static_cast<double>(c) / static_cast<double>(samples_r.size())});
  }
  return out;
}

}  // namespace rcg
