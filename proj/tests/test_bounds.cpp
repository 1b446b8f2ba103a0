#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qmet/bounds.hpp"

using namespace qmet;
using qmet::testing::Rand;

namespace {

BoundQuery make_query(ProbeFamily family, BoundForm form, int n, long long nu,
                      double T, const ChannelParams& params) {
  BoundQuery q;
  q.family = family;
  q.form = form;
  q.n = n;
  q.nu = nu;
  q.T = T;
  q.params = params;
  return q;
}

}  // namespace

TEST_CASE("bound fixed values") {
  const ChannelParams none(0, 0, 0);
  SUBCASE("product nodec, N = 100, T = 1") {
    const auto r = bound(make_query(ProbeFamily::product, BoundForm::nodec, 1,
                                    100, 1.0, none));
    CHECK(r.delta_g == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("product strong, N = 100, T = 1, gamma2 = 1 -> e/10") {
    const auto r = bound(make_query(ProbeFamily::product, BoundForm::strong, 1,
                                    100, 1.0, ChannelParams(0, 1.0, 0)));
    CHECK(r.delta_g ==
          doctest::Approx(std::exp(1.0) / 10.0).epsilon(1e-14));
    CHECK(r.delta_g == doctest::Approx(0.27183).epsilon(1e-4));
  }
  SUBCASE("cat strong, n=2, nu=25, T=1, gamma2=0.25 -> e^{1/2}/10") {
    const auto r = bound(make_query(ProbeFamily::cat, BoundForm::strong, 2, 25,
                                    1.0, ChannelParams(0, 0.25, 0)));
    CHECK(r.delta_g == doctest::Approx(std::exp(0.5) / 10.0).epsilon(1e-14));
    CHECK(r.delta_g == doctest::Approx(0.16487).epsilon(1e-4));
  }
  SUBCASE("cat nodec, n=4, nu=25, T=1 -> 0.05") {
    const auto r = bound(
        make_query(ProbeFamily::cat, BoundForm::nodec, 4, 25, 1.0, none));
    CHECK(r.delta_g == doctest::Approx(0.05).epsilon(1e-14));
  }
  SUBCASE("cat strong without dephasing reduces to cat nodec") {
    const auto strong = bound(
        make_query(ProbeFamily::cat, BoundForm::strong, 3, 40, 0.9, none));
    const auto nodec = bound(
        make_query(ProbeFamily::cat, BoundForm::nodec, 3, 40, 0.9, none));
    CHECK(strong.delta_g == nodec.delta_g);
  }
  SUBCASE("T = 0 is an explicit divergence") {
    CHECK_THROWS_AS(bound(make_query(ProbeFamily::product, BoundForm::nodec, 1,
                                     10, 0.0, none)),
                    DivergentBound);
  }
}

TEST_CASE("every decoherent bound reduces to its nodec form at gamma = 0") {
  const ChannelParams none(0, 0, 0.8);  // mu alone must not matter
  for (ProbeFamily family : {ProbeFamily::product, ProbeFamily::cat}) {
    const auto ref = bound(make_query(family, BoundForm::nodec, 3, 77, 1.3, none));
    for (BoundForm form : {BoundForm::weak, BoundForm::strong}) {
      const auto r = bound(make_query(family, form, 3, 77, 1.3, none));
      CHECK(r.delta_g == ref.delta_g);
    }
  }
}

TEST_CASE("ordering nodec <= weak <= strong on random CP-valid draws") {
  Rand rand(53);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto params = rand.cp_params();
    const int n = 1 + trial % 8;
    const long long nu = 5 + trial % 400;
    const double T = rand.uniform(0.02, 3.0);
    for (ProbeFamily family : {ProbeFamily::product, ProbeFamily::cat}) {
      const double nodec =
          bound(make_query(family, BoundForm::nodec, n, nu, T, params)).delta_g;
      const double weak =
          bound(make_query(family, BoundForm::weak, n, nu, T, params)).delta_g;
      const double strong =
          bound(make_query(family, BoundForm::strong, n, nu, T, params)).delta_g;
      CHECK(weak >= nodec * (1.0 - 1e-12));
      CHECK(strong >= weak * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("strong bounds agree with 1/(sqrt(nu) 2T Delta) from the spectral "
          "closed form at gamma1 = 0") {
  Rand rand(59);
  for (int trial = 0; trial < 200; ++trial) {
    const ChannelParams params(0.0, rand.uniform(0.01, 2.0), 0.0);
    const int n = 1 + trial % 6;
    const long long nu = 10 + trial % 300;
    const double T = rand.uniform(0.05, 2.0);
    for (ProbeFamily family : {ProbeFamily::product, ProbeFamily::cat}) {
      const double dsq = delta_sq_closed(ProbeSpec(family, n, T, 0), params);
      const double ref =
          1.0 / (std::sqrt(static_cast<double>(nu)) * 2.0 * T * std::sqrt(dsq));
      const double strong =
          bound(make_query(family, BoundForm::strong, n, nu, T, params)).delta_g;
      CHECK(strong == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("cat strong at n = 1 equals product strong at N = nu") {
  Rand rand(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto params = rand.cp_params();
    const long long nu = 3 + trial;
    const double T = rand.uniform(0.05, 2.0);
    const auto cat =
        bound(make_query(ProbeFamily::cat, BoundForm::strong, 1, nu, T, params));
    const auto prod = bound(
        make_query(ProbeFamily::product, BoundForm::strong, 1, nu, T, params));
    CHECK(cat.delta_g == prod.delta_g);
  }
}

TEST_CASE("weak_vs_strong_chain") {
  SUBCASE("mu = 0 pins the left term at 1") {
    const auto c = weak_vs_strong_chain(1.7, ChannelParams(0.4, 0.9, 0.0));
    CHECK(c.weak_term == doctest::Approx(1.0));
    CHECK(c.ordered);
  }
  SUBCASE("CP boundary, mu = 1, gamma1 T = 2: middle equals right") {
    const auto c = weak_vs_strong_chain(2.0, ChannelParams(1.0, 0.5, 1.0));
    CHECK(c.mid_term == doctest::Approx(c.strong_term).epsilon(1e-14));
    CHECK(c.ordered);
  }
  SUBCASE("1000 random CP-valid draws never violate the chain") {
    Rand rand(67);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto c = weak_vs_strong_chain(rand.uniform(0.0, 4.0),
                                          rand.cp_params());
      CHECK(c.ordered);
    }
  }
  SUBCASE("CP-invalid parameters rejected") {
    CHECK_THROWS_AS(
        weak_vs_strong_chain(1.0, ChannelParams::unchecked(1.0, 0.2, 0.0)),
        ValidationError);
  }
}

TEST_CASE("dimensionless form and log-space stability") {
  auto q = make_query(ProbeFamily::cat, BoundForm::strong, 5, 100, 1.0,
                      ChannelParams(0, 2.0, 0));
  q.rate = 1e4;
  const auto r = bound(q);
  CHECK(r.dimensionless.has_value());
  CHECK(*r.dimensionless ==
        doctest::Approx(std::sqrt(1e4 / 2.0) * r.delta_g / 2.0).epsilon(1e-12));
  CHECK(std::exp(r.log_delta_g) == doctest::Approx(r.delta_g).epsilon(1e-13));

  // Extreme n gamma2 T: the linear value overflows, the log stays finite.
  auto big = make_query(ProbeFamily::cat, BoundForm::strong, 6, 50, 100.0,
                        ChannelParams(0, 2.0, 0));
  const auto rb = bound(big);
  CHECK(std::isinf(rb.delta_g));
  CHECK(rb.log_delta_g == doctest::Approx(6 * 2.0 * 100.0 - std::log(100.0) -
                                          std::log(6.0) - 0.5 * std::log(50.0)));
}

TEST_CASE("query validation") {
  const ChannelParams none(0, 0, 0);
  auto q = make_query(ProbeFamily::product, BoundForm::nodec, 0, 10, 1.0, none);
  CHECK_THROWS_AS(bound(q), ValidationError);
  q.n = 1;
  q.nu = 0;
  CHECK_THROWS_AS(bound(q), ValidationError);
  q.nu = 10;
  q.T = -1.0;
  CHECK_THROWS_AS(bound(q), ValidationError);
}
