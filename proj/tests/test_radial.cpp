#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "rcg/errors.hpp"
#include "rcg/numerics.hpp"
#include "rcg/radial.hpp"
#include "rcg/rng.hpp"

using namespace rcg;

static const double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("truncated normal against reference values") {
  RadialLaw law = RadialLaw::trunc_normal(1.0, 0.35, kPi);
  REQUIRE(law.truncation_mass() == Catch::Approx(0.9978626325486074).epsilon(1e-12));
  REQUIRE(law.pdf(1.0) == Catch::Approx(1.142276551583079).epsilon(1e-12));
  REQUIRE(law.cdf(1.3) == Catch::Approx(0.8038978890484332).epsilon(1e-12));
  REQUIRE(law.quantile(0.25) == Catch::Approx(0.7656911743319208).epsilon(1e-10));
  REQUIRE(law.moment(1) == Catch::Approx(1.00236198220519).epsilon(1e-10));
  REQUIRE(law.moment(2) - law.moment(1) * law.moment(1) ==
          Catch::Approx(0.12013243557627519).epsilon(1e-8));
  REQUIRE(law.pdf(-0.1) == 0.0);
  REQUIRE(law.pdf(kPi + 0.1) == 0.0);
  REQUIRE(std::isinf(law.log_pdf(kPi + 0.1)));
}

TEST_CASE("truncated normal fisher information matches quadrature reference") {
  RadialLaw law = RadialLaw::trunc_normal(1.0, 0.35, kPi);
  REQUIRE(law.fisher_1d(0) == Catch::Approx(8.005493416202397).epsilon(1e-6));
  REQUIRE(law.fisher_1d(1) == Catch::Approx(14.881192408890358).epsilon(1e-6));
  REQUIRE_THROWS_AS(law.fisher_1d(2), DomainError);
}

TEST_CASE("half normal against reference values") {
  RadialLaw law = RadialLaw::half_normal(0.8, kInf);
  REQUIRE(law.moment(1) == Catch::Approx(0.6383076486422924).epsilon(1e-10));
  REQUIRE(law.moment(2) - law.moment(1) * law.moment(1) ==
          Catch::Approx(0.23256334568474793).epsilon(1e-8));
  REQUIRE(law.quantile(0.5) == Catch::Approx(0.5395918001568654).epsilon(1e-12));
  REQUIRE(law.pdf(0.3) == Catch::Approx(0.9296377346744223).epsilon(1e-12));
}

TEST_CASE("gamma law against reference values") {
  RadialLaw law = RadialLaw::gamma(2.0, 0.3, kInf);
  REQUIRE(law.cdf(0.5) == Catch::Approx(0.4963317257665017).epsilon(1e-11));
  REQUIRE(law.quantile(0.7) == Catch::Approx(0.7317649449840612).epsilon(1e-9));
  REQUIRE(law.moment(1) == Catch::Approx(0.6).epsilon(1e-10));
  REQUIRE(law.moment(2) - 0.36 == Catch::Approx(0.18).epsilon(1e-8));
}

TEST_CASE("weibull law against reference values") {
  RadialLaw law = RadialLaw::weibull(1.5, 0.8, kInf);
  REQUIRE(law.moment(1) == Catch::Approx(0.7221962343607469).epsilon(1e-10));
  REQUIRE(law.cdf(0.6) == Catch::Approx(0.4777030864174584).epsilon(1e-12));
  REQUIRE(law.quantile(0.9) == Catch::Approx(1.3949772108771294).epsilon(1e-12));
}

TEST_CASE("lognormal law against reference values") {
  RadialLaw law = RadialLaw::log_normal(-0.5, 0.4, kInf);
  REQUIRE(law.moment(1) == Catch::Approx(0.6570468198150569).epsilon(1e-10));
  REQUIRE(law.quantile(0.5) == Catch::Approx(0.6065306597126334).epsilon(1e-11));
  REQUIRE(law.pdf(0.7) == Catch::Approx(1.336204548502302).epsilon(1e-12));
  REQUIRE(law.pdf(0.0) == 0.0);
}

TEST_CASE("half cauchy normalizer, mean, and divergent moments") {
  RadialLaw law = RadialLaw::half_cauchy(1.0, kPi);
  REQUIRE(law.truncation_mass() == Catch::Approx(0.8038134760954128).epsilon(1e-12));
  REQUIRE(law.moment(1) == Catch::Approx(0.9448434983861841).epsilon(1e-10));
  REQUIRE(law.cdf(1.0) == Catch::Approx(0.6220348561817965).epsilon(1e-12));

  RadialLaw open = RadialLaw::half_cauchy(1.0, kInf);
  REQUIRE_THROWS_AS(open.moment(1), DivergentMomentError);
  REQUIRE(open.moment(0) == 1.0);
}

TEST_CASE("parameter validation") {
  REQUIRE_THROWS_AS(RadialLaw::trunc_normal(1.0, 0.0, kPi), DomainError);
  REQUIRE_THROWS_AS(RadialLaw::half_normal(-1.0, kInf), DomainError);
  REQUIRE_THROWS_AS(RadialLaw::gamma(0.0, 0.3, kInf), DomainError);
  REQUIRE_THROWS_AS(RadialLaw::weibull(1.5, -0.1, kInf), DomainError);
  REQUIRE_THROWS_AS(RadialLaw::log_normal(0.0, 0.0, kInf), DomainError);
  REQUIRE_THROWS_AS(RadialLaw::half_cauchy(0.0, kPi), DomainError);
  // A law whose mass all sits beyond the truncation point is rejected.
  REQUIRE_THROWS_AS(RadialLaw::log_normal(900.0, 0.01, 1.0), DomainError);
  REQUIRE_THROWS_AS(RadialLaw::trunc_normal(1.0, 0.35, kPi).moment(-1), DomainError);
}

TEST_CASE("cdf and quantile are mutual inverses on every family") {
  std::vector<RadialLaw> laws{
      RadialLaw::trunc_normal(1.0, 0.35, kPi),  RadialLaw::half_normal(0.8, kInf),
      RadialLaw::gamma(2.0, 0.3, kInf),         RadialLaw::weibull(1.5, 0.8, kInf),
      RadialLaw::log_normal(-0.5, 0.4, kInf),   RadialLaw::half_cauchy(1.0, kPi),
      RadialLaw::half_normal(0.5, 2.0),         RadialLaw::gamma(2.0, 0.3, 1.5),
  };
  for (const RadialLaw& law : laws) {
    for (double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-9}) {
      double q = law.quantile(p);
      REQUIRE(law.cdf(q) == Catch::Approx(p).margin(1e-9));
    }
    REQUIRE(law.quantile(0.0) == 0.0);
    if (std::isfinite(law.r_max()))
      REQUIRE(law.quantile(1.0) == Catch::Approx(law.r_max()).epsilon(1e-12));
    REQUIRE_THROWS_AS(law.quantile(-0.01), DomainError);
    REQUIRE_THROWS_AS(law.quantile(1.01), DomainError);
  }
}

TEST_CASE("pdf integrates to one after truncation") {
  std::vector<RadialLaw> laws{
      RadialLaw::trunc_normal(1.0, 0.35, kPi),
      RadialLaw::half_cauchy(0.3, kPi),
      RadialLaw::weibull(1.5, 0.8, 2.0),
      RadialLaw::half_normal(0.8, kInf),
  };
  for (const RadialLaw& law : laws) {
    double total = std::isfinite(law.r_max())
                       ? integrate([&](double r) { return law.pdf(r); }, 0.0, law.r_max())
                       : integrate_to_inf([&](double r) { return law.pdf(r); }, 0.0);
    REQUIRE(total == Catch::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sampling follows the law (KS at N = 2e4)") {
  Pcg32 rng(1234, 0);
  std::vector<RadialLaw> laws{
      RadialLaw::trunc_normal(1.0, 0.35, kPi),
      RadialLaw::gamma(2.0, 0.3, kInf),
      RadialLaw::half_cauchy(1.0, kPi),
      RadialLaw::weibull(1.5, 0.8, kInf),
  };
  for (const RadialLaw& law : laws) {
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i) xs.push_back(law.sample(rng));
    double d = ks_statistic(xs, [&](double r) { return law.cdf(r); });
    double lambda = d * std::sqrt(20000.0);
    REQUIRE(kolmogorov_q(lambda) > 1e-4);
  }
}

TEST_CASE("moments respect truncation") {
  RadialLaw wide = RadialLaw::half_normal(0.8, kInf);
  RadialLaw tight = RadialLaw::half_normal(0.8, 0.9);
  REQUIRE(tight.moment(1) < wide.moment(1));
  REQUIRE(tight.moment(1) < 0.9);
}

TEST_CASE("law factory dispatch matches direct constructors") {
  RadialLaw a = RadialLaw::make(LawKind::Weibull, {1.5, 0.8}, kInf);
  RadialLaw b = RadialLaw::weibull(1.5, 0.8, kInf);
  REQUIRE(a.pdf(0.6) == b.pdf(0.6));
  REQUIRE(std::string(law_kind_name(a.kind())) == "weibull");
  REQUIRE_THROWS_AS(RadialLaw::make(LawKind::Weibull, {1.5}, kInf), DomainError);
}
