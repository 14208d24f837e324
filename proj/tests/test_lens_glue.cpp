#include "foltor/lens_glue.hpp"

#include <cmath>

#include "doctest.h"
#include "foltor/errors.hpp"
#include "foltor/rng.hpp"

using namespace foltor;

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

LensPoint random_lens_point(SplitMix64& rng, const GlueSpec& spec, int chart) {
  const HomogFn& f = chart == 0 ? spec.f0 : spec.f1;
  return LensPoint{chart, leaf_point(f, rng.uniform(0.02, 0.98), rng.uniform(0.0, kTwoPi),
                                     rng.uniform(0.0, kTwoPi))};
}

double lens_map_distance(const GlueSpec& spec, const LensMap& a, const LensMap& b, int samples,
                         std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const LensPoint x = random_lens_point(rng, spec, i % 2);
    worst = std::fmax(worst, lens_distance(spec, apply(a, x), apply(b, x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("transition map carries leaves to complementary leaves") {
  for (auto [p, q] : {std::pair<int, int>{2, 1}, {1, 0}, {5, 2}}) {
    const GlueSpec spec = lens_glue_spec(canonical_spec(p, q));
    CHECK(psi_boundary_residual(spec) < 1e-12);
    SplitMix64 rng(p * 10 + q);
    double worst = 0.0, worst_rt = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const TorusPoint x = leaf_point(spec.f0, rng.uniform(0.01, 0.99),
                                      rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi));
      const TorusPoint y = xi(spec, x);
      worst = std::fmax(worst, std::fabs(spec.f0.eval(x.angle, x.fiber) +
                                         spec.f1.eval(y.angle, y.fiber) - 1.0));
      if (i % 10 == 0) worst_rt = std::fmax(worst_rt, distance(xi_inverse(spec, y), x));
    }
    CHECK(worst < 1e-12);
    CHECK(worst_rt < 1e-9);
  }
}

TEST_CASE("transition map on a wobbly pair of quadratic functions") {
  const GlueSpec spec =
      lens_glue_spec(canonical_spec(2, 1), homog_from_field(seeded_definite_field(1)),
                     homog_from_field(seeded_definite_field(2)));
  CHECK(psi_boundary_residual(spec) < 1e-12);
  SplitMix64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const TorusPoint x = leaf_point(spec.f0, rng.uniform(0.01, 0.99), rng.uniform(0.0, kTwoPi),
                                    rng.uniform(0.0, kTwoPi));
    const TorusPoint y = xi(spec, x);
    CHECK(std::fabs(spec.f0.eval(x.angle, x.fiber) + spec.f1.eval(y.angle, y.fiber) - 1.0) <
          1e-12);
    CHECK(distance(xi_inverse(spec, y), x) < 1e-9);
  }
}

TEST_CASE("mixed-degree gluing") {
  // theta works per chart with its own degree; only the leaf extraction
  // insists on degree two
  const GlueSpec spec =
      lens_glue_spec(canonical_spec(2, 1), standard_quadratic(), standard_quartic());
  CHECK(psi_boundary_residual(spec) < 1e-12);
  SplitMix64 rng(19);
  for (int i = 0; i < 1000; ++i) {
    const TorusPoint x = leaf_point(spec.f0, rng.uniform(0.01, 0.99), rng.uniform(0.0, kTwoPi),
                                    rng.uniform(0.0, kTwoPi));
    const TorusPoint y = xi(spec, x);
    CHECK(std::fabs(spec.f0.eval(x.angle, x.fiber) + spec.f1.eval(y.angle, y.fiber) - 1.0) <
          1e-12);
    CHECK(distance(xi_inverse(spec, y), x) < 1e-9);
  }
  const LensMap th = theta_glued(spec, seeded_diffeo(20));
  CHECK(compatibility_residual(spec, th, 500, 21) < 1e-8);
  CHECK_THROWS_AS(sigma_glued(spec, th), Error);
}

TEST_CASE("transition map domain errors") {
  const GlueSpec spec = lens_glue_spec(canonical_spec(2, 1));
  CHECK_THROWS_AS(xi(spec, TorusPoint{0.1, Eigen::VectorXd::Zero(2)}), OnCore);
  CHECK_THROWS_AS(xi(spec, leaf_point(spec.f0, 1.0, 0.3, 0.8)), OnBoundary);
}

TEST_CASE("glued level function and chart transfer") {
  const GlueSpec spec = lens_glue_spec(canonical_spec(2, 1));
  CHECK(glued_f(spec, LensPoint{0, TorusPoint{0.4, Eigen::VectorXd::Zero(2)}}) == 0.0);
  CHECK(glued_f(spec, LensPoint{1, TorusPoint{0.4, Eigen::VectorXd::Zero(2)}}) == 1.0);

  const LensPoint x{0, leaf_point(spec.f0, 0.3, 1.0, 2.0)};
  CHECK(glued_f(spec, x) == doctest::Approx(0.3).epsilon(1e-14));

  SplitMix64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const LensPoint p = random_lens_point(rng, spec, i % 2);
    const LensPoint q = transfer(spec, p);
    CHECK(q.chart == 1 - p.chart);
    CHECK(std::fabs(glued_f(spec, p) - glued_f(spec, q)) < 1e-12);
    CHECK(distance(transfer(spec, q).pt, p.pt) < 1e-9);
  }
  CHECK_THROWS_AS(transfer(spec, LensPoint{0, TorusPoint{0.0, Eigen::VectorXd::Zero(2)}}),
                  OnCore);
}

TEST_CASE("glued theta") {
  const GlueSpec spec = lens_glue_spec(canonical_spec(2, 1));
  SUBCASE("identity") {
    CHECK(lens_map_distance(spec, theta_glued(spec, identity_diffeo()), identity_lens_map(),
                            100, 1) < 1e-13);
  }
  SUBCASE("chart 1 sees the flip conjugate") {
    const Diffeo01 sq{poly_fn(0.0, 1.0, {0.0, 0.0, 1.0}), Orientation::preserving};
    const LensMap th = theta_glued(spec, sq);
    SplitMix64 rng(2);
    for (int i = 0; i < 200; ++i) {
      const TorusPoint y = leaf_point(spec.f1, rng.uniform(0.02, 0.98),
                                      rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi));
      const double u = spec.f1.eval(y.angle, y.fiber);
      const TorusPoint img = th.h1(y);
      CHECK(spec.f1.eval(img.angle, img.fiber) ==
            doctest::Approx(2 * u - u * u).epsilon(1e-12));
    }
  }
  SUBCASE("compatibility across the transition") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const LensMap th = theta_glued(spec, seeded_diffeo(seed));
      CHECK(compatibility_residual(spec, th, 1000, seed) < 1e-8);
    }
  }
  SUBCASE("intertwines the glued level function") {
    const Diffeo01 phi = seeded_diffeo(4);
    const LensMap th = theta_glued(spec, phi);
    SplitMix64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const LensPoint x = random_lens_point(rng, spec, i % 2);
      worst = std::fmax(worst, std::fabs(phi(glued_f(spec, x)) - glued_f(spec, apply(th, x))));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("rejects reversing input") {
    CHECK_THROWS_AS(theta_glued(spec, make_diffeo01(poly_fn(0.0, 1.0, {1.0, -1.0}))),
                    NotOrientationPreserving);
  }
  SUBCASE("homomorphism") {
    const Diffeo01 a = seeded_diffeo(8), b = seeded_diffeo(9);
    const LensMap lhs = compose(theta_glued(spec, a), theta_glued(spec, b));
    const LensMap rhs = theta_glued(spec, compose(a, b));
    CHECK(lens_map_distance(spec, lhs, rhs, 300, 5) < 1e-8);
  }
}

TEST_CASE("glued sigma") {
  const GlueSpec spec = lens_glue_spec(canonical_spec(2, 1));
  SUBCASE("identity") {
    const Diffeo01 phi = sigma_glued(spec, identity_lens_map());
    CHECK(phi.orientation == Orientation::preserving);
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) {
      worst = std::fmax(worst, std::fabs(phi(i / 256.0) - i / 256.0));
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("recovers the glued theta input") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Diffeo01 psi = seeded_diffeo(seed);
      const Diffeo01 rec = sigma_glued(spec, theta_glued(spec, psi));
      double worst = 0.0;
      for (int i = 0; i <= 256; ++i) {
        const double t = i / 256.0;
        worst = std::fmax(worst, std::fabs(rec(t) - psi(t)));
      }
      CHECK(worst < 1e-8);
    }
  }
  SUBCASE("chart exchange induces the reversal 1 - t") {
    const GlueSpec s3 = lens_glue_spec(canonical_spec(1, 0));
    const LensMap sp = mcg_diffeo(s3, canonical_spec(1, 0), McgName::sigma_plus);
    const Diffeo01 phi = sigma_glued(s3, sp);
    CHECK(phi.orientation == Orientation::reversing);
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) {
      const double t = i / 256.0;
      worst = std::fmax(worst, std::fabs(phi(t) - (1.0 - t)));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("intertwining identity for the glued map") {
    const Diffeo01 psi = seeded_diffeo(7);
    const LensMap h = theta_glued(spec, psi);
    const Diffeo01 phi = sigma_glued(spec, h);
    SplitMix64 rng(11);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const LensPoint x = random_lens_point(rng, spec, i % 2);
      worst = std::fmax(worst, std::fabs(phi(glued_f(spec, x)) - glued_f(spec, apply(h, x))));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("incompatible pairs are rejected") {
    const GlueSpec s01 = lens_glue_spec(canonical_spec(0, 1));
    const LensMap bad = mcg_diffeo(s01, canonical_spec(0, 1), McgName::sigma_minus);
    CHECK_THROWS_AS(sigma_glued(s01, bad), IncompatiblePair);
  }
}

TEST_CASE("glued retraction") {
  const GlueSpec spec = lens_glue_spec(canonical_spec(2, 1));
  const Diffeo01 phi = seeded_diffeo(31);
  const LensMap rot = mcg_diffeo(spec, canonical_spec(2, 1), McgName::rho, 0.3, 0.4);
  const LensMap h = compose(theta_glued(spec, phi), rot);

  const GluedRetraction family(spec, h);
  SUBCASE("starts at h and ends leaf preserving") {
    CHECK(lens_map_distance(spec, family.at(0.0), h, 200, 21) < 1e-9);
    SplitMix64 rng(22);
    const LensMap end = family.at(1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const LensPoint x = random_lens_point(rng, spec, i % 2);
      worst = std::fmax(worst, std::fabs(glued_f(spec, apply(end, x)) - glued_f(spec, x)));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("glued theta retracts to the identity") {
    const GluedRetraction th_family(spec, theta_glued(spec, phi));
    CHECK(lens_map_distance(spec, th_family.at(1.0), identity_lens_map(), 200, 23) < 1e-8);
  }
  SUBCASE("chart-swapping input is rejected") {
    const LensMap sm = mcg_diffeo(spec, canonical_spec(2, 1), McgName::sigma_minus);
    CHECK_THROWS_AS(GluedRetraction(spec, sm), ChartSwapping);
  }
}

TEST_CASE("mapping-class diffeomorphisms") {
  SUBCASE("pairs for the product case p = 0") {
    const LensSpec lens = canonical_spec(0, 1);
    const GlueSpec spec = lens_glue_spec(lens);
    const LensMap d = mcg_diffeo(spec, lens, McgName::delta_hat);
    // the twist pairs with its inverse on the other chart
    const TorusMap expect = g_A(inverse(gamma_delta()));
    SplitMix64 rng(31);
    for (int i = 0; i < 50; ++i) {
      const TorusPoint y = leaf_point(spec.f1, rng.uniform(0.05, 0.95),
                                      rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi));
      CHECK(distance(d.h1(y), expect.forward(y)) < 1e-13);
    }
    CHECK(compatibility_residual(spec, d) < 1e-9);
    CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, McgName::lambda_hat)) < 1e-9);
    CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, McgName::sigma_plus)) < 1e-9);
    // the listed exchange pair fails the diagram identity here; the
    // residual is reported rather than asserted
    CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, McgName::sigma_minus)) > 1e-2);
  }
  SUBCASE("availability follows the case analysis") {
    const LensSpec l72 = canonical_spec(7, 2);
    const GlueSpec s72 = lens_glue_spec(l72);
    CHECK_THROWS_AS(mcg_diffeo(s72, l72, McgName::sigma_plus), NotDefinedForSpec);
    CHECK_THROWS_AS(mcg_diffeo(s72, l72, McgName::sigma_minus), NotDefinedForSpec);
    CHECK_THROWS_AS(mcg_diffeo(s72, l72, McgName::theta_hat), NotDefinedForSpec);
    CHECK_THROWS_AS(mcg_diffeo(s72, l72, McgName::delta_hat), NotDefinedForSpec);
    CHECK(compatibility_residual(s72, mcg_diffeo(s72, l72, McgName::tau_hat)) < 1e-9);

    const LensSpec l83 = canonical_spec(8, 3);
    const GlueSpec s83 = lens_glue_spec(l83);
    CHECK(compatibility_residual(s83, mcg_diffeo(s83, l83, McgName::sigma_plus)) < 1e-9);
    CHECK_THROWS_AS(mcg_diffeo(s83, l83, McgName::sigma_minus), NotDefinedForSpec);

    const LensSpec l52 = canonical_spec(5, 2);
    const GlueSpec s52 = lens_glue_spec(l52);
    CHECK(compatibility_residual(s52, mcg_diffeo(s52, l52, McgName::sigma_minus)) < 1e-9);
    CHECK_THROWS_AS(mcg_diffeo(s52, l52, McgName::sigma_plus), NotDefinedForSpec);
  }
  SUBCASE("compatibility of every defined pair") {
    for (auto [p, q] : {std::pair<int, int>{1, 0}, {2, 1}}) {
      const LensSpec lens = canonical_spec(p, q);
      const GlueSpec spec = lens_glue_spec(lens);
      for (McgName name : {McgName::tau_hat, McgName::sigma_plus, McgName::sigma_minus}) {
        CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, name)) < 1e-9);
      }
      CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, McgName::rho, 0.7, 1.9)) <
            1e-9);
    }
    const LensSpec l21 = canonical_spec(2, 1);
    const GlueSpec s21 = lens_glue_spec(l21);
    CHECK(compatibility_residual(s21, mcg_diffeo(s21, l21, McgName::theta_hat)) < 1e-9);
    const LensSpec l10 = canonical_spec(1, 0);
    const GlueSpec s10 = lens_glue_spec(l10);
    CHECK(compatibility_residual(s10, mcg_diffeo(s10, l10, McgName::lambda_hat)) < 1e-9);
    CHECK(compatibility_residual(s10, mcg_diffeo(s10, l10, McgName::mu_hat)) < 1e-9);
  }
}

TEST_CASE("mapping-class relations") {
  using W = WordLetter;
  SUBCASE("the 3-sphere case") {
    const LensSpec lens = canonical_spec(1, 0);
    const GlueSpec spec = lens_glue_spec(lens);
    const W sp{McgName::sigma_plus}, sm{McgName::sigma_minus};
    const W sm_inv{McgName::sigma_minus, true};
    CHECK(verify_relation(spec, lens, {sp, sp}, {}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sm, sm, sm, sm}, {}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sm, sm},
                          {W{McgName::lambda_hat}, W{McgName::mu_hat}}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sp, sm, sp}, {sm_inv}) < 1e-9);
    // the ambiguous product: sigma_plus o sigma_minus is the lambda pair,
    // and the reversed product is the mu pair
    CHECK(verify_relation(spec, lens, {sp, sm}, {W{McgName::lambda_hat}}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sp, sm}, {W{McgName::mu_hat}}) > 1e-1);
    CHECK(verify_relation(spec, lens, {sm, sp}, {W{McgName::mu_hat}}) < 1e-9);
    // rotation conjugations
    const W rho{McgName::rho, false, 0.8, 1.7};
    const W rho_flip_a{McgName::rho, false, -0.8, 1.7};
    const W rho_flip_b{McgName::rho, false, 0.8, -1.7};
    CHECK(verify_relation(spec, lens, {W{McgName::lambda_hat}, rho},
                          {rho_flip_a, W{McgName::lambda_hat}}) < 1e-9);
    CHECK(verify_relation(spec, lens, {W{McgName::mu_hat}, rho},
                          {rho_flip_b, W{McgName::mu_hat}}) < 1e-9);
  }
  SUBCASE("the projective-space case") {
    const LensSpec lens = canonical_spec(2, 1);
    const GlueSpec spec = lens_glue_spec(lens);
    const W sp{McgName::sigma_plus}, sm{McgName::sigma_minus}, tau{McgName::tau_hat},
        th{McgName::theta_hat};
    CHECK(verify_relation(spec, lens, {sm, sm}, {tau}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sp, sm}, {th}) < 1e-9);
    CHECK(verify_relation(spec, lens, {th, tau}, {tau, th}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sp, sp}, {}) < 1e-9);
    CHECK(verify_relation(spec, lens, {sp, sm, sp}, {W{McgName::sigma_minus, true}}) < 1e-9);
  }
  SUBCASE("kind mismatch is flagged") {
    const LensSpec lens = canonical_spec(1, 0);
    const GlueSpec spec = lens_glue_spec(lens);
    CHECK_THROWS_AS(verify_relation(spec, lens, {WordLetter{McgName::sigma_plus}}, {}), Error);
  }
  SUBCASE("the product case keeps its twist relations") {
    const LensSpec lens = canonical_spec(0, 1);
    const GlueSpec spec = lens_glue_spec(lens);
    const W l{McgName::lambda_hat}, mu{McgName::mu_hat}, d{McgName::delta_hat};
    CHECK(verify_relation(spec, lens, {l, l}, {}) < 1e-9);
    CHECK(verify_relation(spec, lens, {mu, mu}, {}) < 1e-9);
    CHECK(verify_relation(spec, lens, {l, d, l, d}, {}) < 1e-9);  // (lambda delta)^2 = id
    CHECK(verify_relation(spec, lens, {l, mu}, {W{McgName::tau_hat}}) < 1e-9);
  }
  SUBCASE("exchange transport to the canonical matrix for larger p") {
    for (auto [p, q] : {std::pair<int, int>{12, 5}, {15, 4}, {24, 7}}) {
      const LensSpec lens = canonical_spec(p, q);
      const GlueSpec spec = lens_glue_spec(lens);
      CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, McgName::sigma_plus)) < 1e-9);
      CHECK(verify_relation(spec, lens, {W{McgName::sigma_plus}, W{McgName::sigma_plus}}, {}) <
            1e-9);
    }
    for (auto [p, q] : {std::pair<int, int>{10, 3}, {13, 5}, {17, 4}, {25, 7}}) {
      const LensSpec lens = canonical_spec(p, q);
      const GlueSpec spec = lens_glue_spec(lens);
      CHECK(compatibility_residual(spec, mcg_diffeo(spec, lens, McgName::sigma_minus)) < 1e-9);
      CHECK(verify_relation(spec, lens, {W{McgName::sigma_minus}, W{McgName::sigma_minus}},
                            {W{McgName::tau_hat}}) < 1e-9);
    }
  }
}
