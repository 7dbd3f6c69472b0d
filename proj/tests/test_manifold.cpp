#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/numerics.hpp"
#include "rcg/rng.hpp"

using namespace rcg;

TEST_CASE("unit sphere areas") {
  REQUIRE(unit_sphere_area(2) == Catch::Approx(2.0 * kPi).epsilon(1e-14));
  REQUIRE(unit_sphere_area(3) == Catch::Approx(4.0 * kPi).epsilon(1e-14));
  REQUIRE(unit_sphere_area(4) == Catch::Approx(2.0 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("spec validation") {
  REQUIRE_THROWS_AS(ManifoldSpec::validated({ManifoldKind::Sphere, 1, 1.0}), DomainError);
  REQUIRE_THROWS_AS(ManifoldSpec::validated({ManifoldKind::Sphere, 2, 0.0}), DomainError);
  ManifoldSpec s = ManifoldSpec::sphere(3, 2.0);
  REQUIRE(s.kappa() == Catch::Approx(0.25).epsilon(1e-15));
  REQUIRE(s.r_max() == Catch::Approx(2.0 * kPi).epsilon(1e-15));
  ManifoldSpec h = ManifoldSpec::hyperbolic(3, 2.0);
  REQUIRE(h.kappa() == Catch::Approx(-0.25).epsilon(1e-15));
  REQUIRE(std::isinf(h.r_max()));
  REQUIRE(s.ambient_dim() == 4);
}

TEST_CASE("curvature functions match closed forms away from zero") {
  ManifoldSpec s = ManifoldSpec::sphere(2, 2.0);
  ManifoldSpec h = ManifoldSpec::hyperbolic(2, 2.0);
  REQUIRE(s_kappa(s, 1.0) == Catch::Approx(2.0 * std::sin(0.5)).epsilon(1e-14));
  REQUIRE(s_kappa(h, 1.0) == Catch::Approx(2.0 * std::sinh(0.5)).epsilon(1e-14));
  REQUIRE(c_kappa(s, 1.0) == Catch::Approx(std::cos(0.5)).epsilon(1e-14));
  REQUIRE(c_kappa(h, 1.0) == Catch::Approx(std::cosh(0.5)).epsilon(1e-14));
  REQUIRE(log_s_kappa(s, 1.0) == Catch::Approx(std::log(2.0 * std::sin(0.5))).epsilon(1e-14));
  REQUIRE(log_sratio(s, 1.0) ==
          Catch::Approx(std::log(std::sin(0.5) / 0.5)).epsilon(1e-13));
  REQUIRE(log_sratio(h, 1.0) ==
          Catch::Approx(std::log(std::sinh(0.5) / 0.5)).epsilon(1e-13));
}

TEST_CASE("log_sratio series branch agrees with long-double evaluation") {
  ManifoldSpec s = ManifoldSpec::sphere(2, 1.0);
  ManifoldSpec h = ManifoldSpec::hyperbolic(2, 1.0);
  for (double r : {1e-8, 1e-5, 1e-3, 5e-3, 9.9e-3}) {
    long double x = static_cast<long double>(r);
    double sphere_ref = static_cast<double>(std::log(std::sin(x) / x));
    double hyper_ref = static_cast<double>(std::log(std::sinh(x) / x));
    REQUIRE(log_sratio(s, r) == Catch::Approx(sphere_ref).margin(1e-17 + 1e-13 * std::fabs(sphere_ref)));
    REQUIRE(log_sratio(h, r) == Catch::Approx(hyper_ref).margin(1e-17 + 1e-13 * std::fabs(hyper_ref)));
  }
  // Both branches agree with the same-point reference near the switch at
  // x = 1e-2, so the seam mismatch is at rounding level.
  for (double r : {0.0099999, 0.0100001}) {
    long double x = static_cast<long double>(r);
    double sphere_ref = static_cast<double>(std::log(std::sin(x) / x));
    double hyper_ref = static_cast<double>(std::log(std::sinh(x) / x));
    REQUIRE(log_sratio(s, r) == Catch::Approx(sphere_ref).margin(1e-16));
    REQUIRE(log_sratio(h, r) == Catch::Approx(hyper_ref).margin(1e-16));
  }
}

TEST_CASE("log_sratio derivatives match finite differences of the function") {
  for (double R_c : {0.5, 1.0, 2.0}) {
    ManifoldSpec s = ManifoldSpec::sphere(2, R_c);
    ManifoldSpec h = ManifoldSpec::hyperbolic(2, R_c);
    for (const ManifoldSpec& m : {s, h}) {
      for (double r : {1e-4 * R_c, 5e-3 * R_c, 0.3 * R_c, 1.1 * R_c, 2.5 * R_c}) {
        double hh = 1e-6 * std::max(r, 1e-3 * R_c);
        double fd1 = (log_sratio(m, r + hh) - log_sratio(m, r - hh)) / (2.0 * hh);
        double fd2 = (log_sratio_deriv(m, r + hh) - log_sratio_deriv(m, r - hh)) / (2.0 * hh);
        REQUIRE(log_sratio_deriv(m, r) == Catch::Approx(fd1).margin(1e-7 / R_c));
        REQUIRE(log_sratio_second(m, r) == Catch::Approx(fd2).margin(1e-6 / (R_c * R_c)));
      }
    }
  }
}

TEST_CASE("hyperbolic log forms stay finite far out") {
  ManifoldSpec h = ManifoldSpec::hyperbolic(2, 1.0);
  double x = 700.0;
  REQUIRE(log_s_kappa(h, x) == Catch::Approx(x - std::log(2.0)).epsilon(1e-12));
  REQUIRE(log_sratio(h, x) == Catch::Approx(x - std::log(2.0 * x)).epsilon(1e-12));
  REQUIRE(log_sratio_deriv(h, x) == Catch::Approx(1.0 - 1.0 / x).epsilon(1e-10));
}

TEST_CASE("ars inverts s_kappa at half angles") {
  ManifoldSpec s = ManifoldSpec::sphere(2, 1.5);
  ManifoldSpec h = ManifoldSpec::hyperbolic(2, 1.5);
  REQUIRE(ars(s, std::sin(0.4)) == Catch::Approx(0.4).epsilon(1e-14));
  REQUIRE(ars(h, std::sinh(0.4)) == Catch::Approx(0.4).epsilon(1e-14));
  REQUIRE_THROWS_AS(ars(s, 1.5), DomainError);
}

TEST_CASE("default pole lies on the manifold, frame is orthonormal") {
  Pcg32 rng(11, 3);
  for (ManifoldKind kind : {ManifoldKind::Sphere, ManifoldKind::Hyperbolic}) {
    for (int n : {2, 3, 5}) {
      ManifoldSpec m{kind, n, 1.3};
      Vec p = default_pole(m);
      REQUIRE(static_cast<int>(p.size()) == m.ambient_dim());
      if (kind == ManifoldKind::Sphere) {
        REQUIRE(vec_norm(p) == Catch::Approx(m.R_c).epsilon(1e-14));
      } else {
        REQUIRE(minkowski_dot(p, p) == Catch::Approx(-m.R_c * m.R_c).epsilon(1e-14));
      }
      Frame fr = tangent_frame(m, p);
      REQUIRE(static_cast<int>(fr.basis.size()) == n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
          double g = kind == ManifoldKind::Sphere
                         ? vec_dot(fr.basis[i], fr.basis[j])
                         : minkowski_dot(fr.basis[i], fr.basis[j]);
          REQUIRE(g == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
        }
        double gp = kind == ManifoldKind::Sphere ? vec_dot(fr.basis[i], p)
                                                 : minkowski_dot(fr.basis[i], p);
        REQUIRE(gp == Catch::Approx(0.0).margin(1e-12));
      }
    }
  }
}

TEST_CASE("exp/log round trip and distance recovery") {
  Pcg32 rng(21, 9);
  for (ManifoldKind kind : {ManifoldKind::Sphere, ManifoldKind::Hyperbolic}) {
    for (int n : {2, 3, 5}) {
      for (double R_c : {0.5, 2.0}) {
        ManifoldSpec m{kind, n, R_c};
        Vec p = default_pole(m);
        Frame fr = tangent_frame(m, p);
        for (int trial = 0; trial < 40; ++trial) {
          double r = rng.uniform(0.01, kind == ManifoldKind::Sphere ? 0.95 * kPi * R_c
                                                                    : 3.0 * R_c);
          Vec omega = sample_uniform_direction(n, rng);
          Vec q = point_from_polar(m, p, fr, r, omega);
          REQUIRE(geodesic_distance(m, p, q) == Catch::Approx(r).epsilon(1e-10));
          Vec v = log_map(m, p, q);
          Vec coords = frame_coords(m, fr, v);
          REQUIRE(vec_norm(coords) == Catch::Approx(r).epsilon(1e-9));
          for (int i = 0; i < n; ++i)
            REQUIRE(coords[static_cast<std::size_t>(i)] ==
                    Catch::Approx(r * omega[static_cast<std::size_t>(i)]).margin(1e-9 * R_c));
        }
      }
    }
  }
}

TEST_CASE("exp map from a non-pole base point") {
  ManifoldSpec m = ManifoldSpec::sphere(3, 1.0);
  Pcg32 rng(4, 4);
  Vec p0 = default_pole(m);
  Frame fr0 = tangent_frame(m, p0);
  Vec p = point_from_polar(m, p0, fr0, 0.8, sample_uniform_direction(3, rng));
  Frame fr = tangent_frame(m, p);
  Vec q = point_from_polar(m, p, fr, 1.1, sample_uniform_direction(3, rng));
  REQUIRE(vec_norm(q) == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(geodesic_distance(m, p, q) == Catch::Approx(1.1).epsilon(1e-10));
}

TEST_CASE("antipode and the cut locus") {
  ManifoldSpec m = ManifoldSpec::sphere(2, 1.7);
  Vec p = default_pole(m);
  Vec a = antipode(m, p);
  REQUIRE(geodesic_distance(m, p, a) == Catch::Approx(kPi * 1.7).epsilon(1e-12));
  REQUIRE_THROWS_AS(log_map(m, p, a), CutLocusError);
  REQUIRE_THROWS_AS(antipode(ManifoldSpec::hyperbolic(2, 1.0), p), DomainError);
}

TEST_CASE("uniform directions are unit and isotropic") {
  Pcg32 rng(31, 2);
  int n = 4;
  Vec mean(static_cast<std::size_t>(n), 0.0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Vec w = sample_uniform_direction(n, rng);
    REQUIRE(vec_norm(w) == Catch::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < n; ++i) mean[static_cast<std::size_t>(i)] += w[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < n; ++i)
    REQUIRE(std::fabs(mean[static_cast<std::size_t>(i)] / trials) < 0.02);
}
