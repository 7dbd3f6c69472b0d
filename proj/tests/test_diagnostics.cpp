#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "rcg/diagnostics.hpp"
#include "rcg/errors.hpp"
#include "rcg/radial.hpp"
#include "rcg/rng.hpp"

using namespace rcg;

namespace {

DiagnosticsReport small_e1() { return run_e1(2024, 2000, 3); }

}  // namespace

TEST_CASE("experiment harness emits the expected table shape") {
  DiagnosticsReport rep = small_e1();
  REQUIRE(rep.schema_version == 1);
  REQUIRE(rep.blocks.size() == 2);
  REQUIRE(rep.blocks[0].name == "sphere");
  REQUIRE(rep.blocks[1].name == "hyperbolic");
  for (const BlockReport& block : rep.blocks) {
    REQUIRE(block.rows.size() == 4);
    REQUIRE(block.rows[0].label == "rc-exp");
    REQUIRE(block.rows[1].label == "rc-bexp-0.5");
    REQUIRE(block.rows[2].label == "rc-gcl");
    REQUIRE(block.rows[3].label == "raw-exp");
    for (const RowReport& row : block.rows) {
      REQUIRE(row.per_seed.size() == 3);
      REQUIRE(row.per_seed[0].seed == 2024);
      REQUIRE(row.per_seed[2].seed == 2026);
      bool rc = row.variant == "rc";
      REQUIRE(row.has_kl);
      REQUIRE(row.has_fisher == rc);
      if (!rc) REQUIRE(row.variant == "raw");
    }
  }
}

TEST_CASE("aggregates recompute from the per-seed entries") {
  DiagnosticsReport rep = small_e1();
  for (const BlockReport& block : rep.blocks) {
    for (const RowReport& row : block.rows) {
      std::vector<double> means, vars;
      for (const SeedStats& s : row.per_seed) {
        means.push_back(s.mean_r);
        vars.push_back(s.var_r);
      }
      REQUIRE(row.mean_r.value == Catch::Approx(mean_of(means)).epsilon(1e-14));
      REQUIRE(row.mean_r.sd == Catch::Approx(sd_of(means)).epsilon(1e-12));
      REQUIRE(row.var_r.value == Catch::Approx(mean_of(vars)).epsilon(1e-14));
    }
  }
}

TEST_CASE("runs are deterministic and thread-count independent") {
  ordered_json a = to_json(small_e1());
  ordered_json b = to_json(small_e1());
  REQUIRE(a.dump() == b.dump());

  setenv("RC_THREADS", "1", 1);
  ordered_json serial = to_json(small_e1());
  setenv("RC_THREADS", "7", 1);
  ordered_json threaded = to_json(small_e1());
  unsetenv("RC_THREADS");
  REQUIRE(serial.dump() == a.dump());
  REQUIRE(threaded.dump() == a.dump());
}

TEST_CASE("json schema carries nulls only where a metric is absent") {
  ordered_json j = to_json(small_e1());
  REQUIRE(j["schema_version"] == 1);
  REQUIRE(j["protocol"]["base_seed"] == 2024);
  REQUIRE(j["protocol"]["n_samples"] == 2000);
  REQUIRE(j["protocol"]["n_seeds"] == 3);
  REQUIRE(j["blocks"].size() == 2);
  for (const auto& block : j["blocks"]) {
    for (const auto& row : block["rows"]) {
      bool rc = row["variant"] == "rc";
      REQUIRE_FALSE(row["kl"].is_null());
      REQUIRE(row["fisher"].is_null() == !rc);
      REQUIRE(row["per_seed"].size() == 3);
      for (const auto& s : row["per_seed"])
        REQUIRE(s["fisher"].is_null() == !rc);
      REQUIRE(row["manifold"]["n"] == 2);
    }
  }
  REQUIRE(j.dump().find("timestamp") == std::string::npos);
}

TEST_CASE("baseline block has the wrapped rows on both curvature signs") {
  DiagnosticsReport rep = run_e1b(2024, 2000, 2);
  REQUIRE(rep.blocks.size() == 1);
  REQUIRE(rep.blocks[0].name == "baseline");
  REQUIRE(rep.blocks[0].rows.size() == 3);
  REQUIRE(rep.blocks[0].rows[0].label == "raw-exp-sphere");
  REQUIRE(rep.blocks[0].rows[1].label == "raw-exp-hyperbolic");
  REQUIRE(rep.blocks[0].rows[2].label == "rc-exp-sphere");
  REQUIRE_FALSE(rep.blocks[0].rows[0].has_kl);
  REQUIRE(rep.blocks[0].rows[2].has_kl);
}

TEST_CASE("atlas diagnostics stay under the smoothness thresholds") {
  ManifoldSpec m = ManifoldSpec::sphere(2, 1.0);
  AtlasDiagnostics d = atlas_diagnostics(m, 0.3, 1.0, 1.0, 0.35);
  REQUIRE(d.partition_max_dev <= 1e-12);
  REQUIRE(d.seam_grad_jump <= 1e-4);
  REQUIRE(d.band_sup_grad > 0.0);
  REQUIRE(std::isfinite(d.band_sup_grad));
}

TEST_CASE("coverage curve hugs the diagonal for a correct law") {
  ManifoldSpec m = ManifoldSpec::sphere(2, 1.0);
  RadialLaw law = RadialLaw::trunc_normal(1.0, 0.35, m.r_max());
  Pcg32 rng(3, 3);
  std::vector<double> radii;
  for (int i = 0; i < 10000; ++i) radii.push_back(law.sample(rng));
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
  CoverageCurve c = coverage_curve(radii, law, grid);
  REQUIRE(c.dkw_band == Catch::Approx(1.36 / 100.0).epsilon(1e-12));
  REQUIRE(c.points.size() == 19);
  for (const CoveragePoint& p : c.points)
    REQUIRE(std::fabs(p.empirical - p.predicted) < c.dkw_band);
  // A wrong law leaves the band.
  CoverageCurve bad =
      coverage_curve(radii, RadialLaw::trunc_normal(0.6, 0.35, m.r_max()), grid);
  double worst = 0.0;
  for (const CoveragePoint& p : bad.points)
    worst = std::max(worst, std::fabs(p.empirical - p.predicted));
  REQUIRE(worst > bad.dkw_band);
  REQUIRE_THROWS_AS(coverage_curve({}, law, grid), DomainError);
}

TEST_CASE("thread cap honors the environment override") {
  setenv("RC_THREADS", "3", 1);
  REQUIRE(rc_thread_cap() == 3);
  setenv("RC_THREADS", "0", 1);
  REQUIRE(rc_thread_cap() >= 1);
  unsetenv("RC_THREADS");
  REQUIRE(rc_thread_cap() >= 1);
}
