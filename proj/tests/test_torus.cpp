#include "foltor/torus.hpp"

#include <cmath>

#include "doctest.h"
#include "foltor/errors.hpp"
#include "foltor/rng.hpp"

using namespace foltor;

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

TorusPoint random_point(SplitMix64& rng, const HomogFn& f) {
  return leaf_point(f, rng.uniform01(), rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi));
}

double map_distance(const TorusMap& a, const TorusMap& b, const HomogFn& f, int samples,
                    std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const TorusPoint x = random_point(rng, f);
    worst = std::fmax(worst, distance(a.forward(x), b.forward(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("matrix realizations") {
  const HomogFn f = standard_quadratic();
  SUBCASE("identity and the delta twist") {
    CHECK(map_distance(g_A(gamma_identity()), identity_torus_map(), f, 50, 1) < 1e-15);
    // delta sends (a, z) to (a, e^{ia} z)
    const TorusMap d = g_A(gamma_delta());
    const TorusPoint x{0.7, vec2(0.3, 0.1)};
    const TorusPoint y = d.forward(x);
    CHECK(y.angle == doctest::Approx(0.7).epsilon(1e-15));
    const Eigen::Rotation2D<double> rot(0.7);
    CHECK((y.fiber - rot * vec2(0.3, 0.1)).norm() < 1e-15);
  }
  SUBCASE("tau conjugates both factors") {
    const TorusMap t = g_A(gamma_tau());
    const TorusPoint x{1.2, vec2(0.5, 0.2)};
    const TorusPoint y = t.forward(x);
    CHECK(y.angle == doctest::Approx(kTwoPi - 1.2).epsilon(1e-14));
    CHECK(y.fiber[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(y.fiber[1] == doctest::Approx(-0.2).epsilon(1e-14));
  }
  SUBCASE("fiber rank is enforced") {
    const TorusMap d = g_A(gamma_delta());
    CHECK_THROWS_AS(d.forward(TorusPoint{0.0, Eigen::VectorXd::Zero(3)}), FiberRankNot2);
  }
  SUBCASE("A -> g_A is a homomorphism") {
    SplitMix64 rng(5);
    for (int i = 0; i < 40; ++i) {
      GammaElem a{rng.next() & 1 ? 1 : -1, rng.next() & 1 ? 1 : -1, rng.uniform_int(-20, 20)};
      GammaElem b{rng.next() & 1 ? 1 : -1, rng.next() & 1 ? 1 : -1, rng.uniform_int(-20, 20)};
      CHECK(map_distance(compose(g_A(a), g_A(b)), g_A(mul(a, b)), f, 25, 100 + i) < 1e-12);
    }
  }
  SUBCASE("round trips") {
    SplitMix64 rng(6);
    const TorusMap d = g_A(GammaElem{-1, -1, 7});
    for (int i = 0; i < 50; ++i) {
      const TorusPoint x = random_point(rng, f);
      CHECK(distance(d.inverse(d.forward(x)), x) < 1e-12);
    }
  }
}

TEST_CASE("rotation subgroup") {
  const HomogFn f = standard_quadratic();
  CHECK(map_distance(rotation(0.0, 0.0), identity_torus_map(), f, 30, 2) < 1e-15);
  CHECK(map_distance(compose(rotation(0.4, 1.1), rotation(2.9, 0.3)), rotation(3.3, 1.4), f,
                     50, 3) < 1e-12);
  // conjugation by the base reflection flips the base angle of the rotation
  const TorusMap lambda = g_A(gamma_lambda());
  const TorusMap lhs = compose(lambda, compose(rotation(0.8, 0.5), lambda));
  CHECK(map_distance(lhs, rotation(-0.8, 0.5), f, 100, 4) < 1e-12);
}

TEST_CASE("theta section") {
  const HomogFn f = standard_quadratic();
  SUBCASE("identity input gives the identity map") {
    CHECK(map_distance(theta(identity_diffeo(), f), identity_torus_map(), f, 50, 7) < 1e-13);
  }
  SUBCASE("phi(t) = t^2 scales the fiber by |z|") {
    const Diffeo01 sq{poly_fn(0.0, 1.0, {0.0, 0.0, 1.0}), Orientation::preserving};
    const TorusMap th = theta(sq, f);
    const TorusPoint x{0.3, vec2(0.4, 0.2)};
    const TorusPoint y = th.forward(x);
    const double r = std::sqrt(0.4 * 0.4 + 0.2 * 0.2);
    CHECK((y.fiber - r * x.fiber).norm() < 1e-13);
    CHECK(y.angle == doctest::Approx(0.3).epsilon(1e-15));
  }
  SUBCASE("intertwining identity on a wobbly field") {
    const HomogFn g = homog_from_field(seeded_definite_field(77));
    SplitMix64 rng(8);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Diffeo01 phi = seeded_diffeo(seed);
      const TorusMap th = theta(phi, g);
      double worst = 0.0;
      for (int i = 0; i < 2000; ++i) {
        const TorusPoint x = random_point(rng, g);
        const TorusPoint y = th.forward(x);
        worst = std::fmax(worst,
                          std::fabs(phi(g.eval(x.angle, x.fiber)) - g.eval(y.angle, y.fiber)));
      }
      CHECK(worst < 1e-10);
    }
  }
  SUBCASE("monoid homomorphism") {
    const Diffeo01 a = seeded_diffeo(1), b = seeded_diffeo(2);
    CHECK(map_distance(compose(theta(a, f), theta(b, f)), theta(compose(a, b), f), f, 400, 9) <
          1e-9);
  }
  SUBCASE("degree-4 scaling uses the quartic root") {
    const HomogFn quartic = standard_quartic();
    const Diffeo01 phi = seeded_diffeo(12);
    const TorusMap th = theta(phi, quartic);
    SplitMix64 rng(13);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const TorusPoint x = leaf_point(quartic, rng.uniform01(), rng.uniform(0.0, kTwoPi),
                                      rng.uniform(0.0, kTwoPi));
      const TorusPoint y = th.forward(x);
      worst = std::fmax(worst, std::fabs(phi(quartic.eval(x.angle, x.fiber)) -
                                         quartic.eval(y.angle, y.fiber)));
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("boundary is fixed") {
    const Diffeo01 phi = seeded_diffeo(3);
    const TorusMap th = theta(phi, f);
    SplitMix64 rng(10);
    for (int i = 0; i < 100; ++i) {
      const TorusPoint x = leaf_point(f, 1.0, rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi));
      CHECK(distance(th.forward(x), x) < 1e-12);
    }
  }
  SUBCASE("forward and inverse round trip") {
    const TorusMap th = theta(seeded_diffeo(9), f);
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
      const TorusPoint x = random_point(rng, f);
      CHECK(distance(th.inverse(th.forward(x)), x) < 1e-9);
      CHECK(distance(th.forward(th.inverse(x)), x) < 1e-9);
    }
  }
  SUBCASE("rejections") {
    const Diffeo01 rev = make_diffeo01(poly_fn(0.0, 1.0, {1.0, -1.0}));
    CHECK_THROWS_AS(theta(rev, f), NotOrientationPreserving);
    Eigen::MatrixXd indef(2, 2);
    indef << 1, 0, 0, -1;
    CHECK_THROWS_AS(theta(identity_diffeo(), homog_from_field(constant_field(indef))),
                    NotDefinite);
  }
}

TEST_CASE("foliation checking") {
  const HomogFn f = standard_quadratic();
  SUBCASE("rotations are leaf preserving") {
    const FoliationReport rep = is_foliated(rotation(0.9, 2.2), f, f);
    CHECK(rep.foliated);
    CHECK(rep.max_spread < 1e-12);
  }
  SUBCASE("theta images are foliated") {
    const FoliationReport rep = is_foliated(theta(seeded_diffeo(4), f), f, f);
    CHECK(rep.foliated);
    CHECK(rep.max_spread < 1e-10);
  }
  SUBCASE("a fiber shear is rejected") {
    TorusMap shear;
    shear.forward = [](const TorusPoint& x) {
      return TorusPoint{x.angle, Eigen::VectorXd(x.fiber + 0.1 * Eigen::VectorXd::Unit(2, 0))};
    };
    shear.inverse = [](const TorusPoint& x) {
      return TorusPoint{x.angle, Eigen::VectorXd(x.fiber - 0.1 * Eigen::VectorXd::Unit(2, 0))};
    };
    const FoliationReport rep = is_foliated(shear, f, f);
    CHECK(!rep.foliated);
    CHECK(rep.max_spread > 1e-2);
  }
}

TEST_CASE("leaf-value extraction sigma") {
  const HomogFn f = standard_quadratic();
  const TorusPoint ray = default_ray(f);
  SUBCASE("identity map") {
    const Diffeo01 phi = sigma(identity_torus_map(), f, f, ray);
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) {
      const double s = i / 256.0;
      worst = std::fmax(worst, std::fabs(phi(s) - s));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("sigma recovers the theta input") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Diffeo01 psi = seeded_diffeo(seed);
      const Diffeo01 rec = sigma(theta(psi, f), f, f, ray);
      double worst = 0.0;
      for (int i = 0; i <= 256; ++i) {
        const double s = i / 256.0;
        worst = std::fmax(worst, std::fabs(rec(s) - psi(s)));
      }
      CHECK(worst < 1e-8);
    }
  }
  SUBCASE("ray independence") {
    const Diffeo01 psi = seeded_diffeo(11);
    const TorusMap h = theta(psi, homog_from_field(seeded_definite_field(5)));
    const HomogFn g = homog_from_field(seeded_definite_field(5));
    const Diffeo01 a = sigma(h, g, g, default_ray(g));
    const Diffeo01 b = sigma(h, g, g, leaf_point(g, 1.0, 2.1, 0.9));
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) {
      const double s = i / 256.0;
      worst = std::fmax(worst, std::fabs(a(s) - b(s)));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("degree mismatch is not a diffeomorphism") {
    SigmaDiagnostics diag;
    CHECK_THROWS_AS(sigma(identity_torus_map(), f, standard_quartic(), ray, &diag), NotDiffeo);
    CHECK(diag.delta0 < 1e-7);  // phi(s) = s^2 collapses at the core
  }
  SUBCASE("non-foliated input is rejected before extraction") {
    TorusMap shear;
    shear.forward = [](const TorusPoint& x) {
      return TorusPoint{x.angle, Eigen::VectorXd(x.fiber + 0.1 * Eigen::VectorXd::Unit(2, 0))};
    };
    shear.inverse = shear.forward;
    CHECK_THROWS_AS(sigma(shear, f, f, ray), NotFoliated);
  }
}

TEST_CASE("stabilizer residual") {
  const HomogFn f = standard_quadratic();
  CHECK(stabilizer_residual(identity_diffeo(), rotation(1.0, 2.0), f) < 1e-10);
  const Diffeo01 phi = seeded_diffeo(6);
  CHECK(stabilizer_residual(phi, theta(phi, f), f) < 1e-10);
  // identity against theta(t^2): sup |t - t^2| = 1/4
  const Diffeo01 sq{poly_fn(0.0, 1.0, {0.0, 0.0, 1.0}), Orientation::preserving};
  const double res = stabilizer_residual(identity_diffeo(), theta(sq, f), f, 4096, 3);
  CHECK(res > 0.2);
  CHECK(res <= 0.25 + 1e-12);
}

TEST_CASE("deformation retraction on the solid torus") {
  const HomogFn f = standard_quadratic();
  const Diffeo01 phi = seeded_diffeo(21);
  const TorusMap h = compose(theta(phi, f), compose(g_A(gamma_delta()), rotation(0.3, 0.7)));

  const Retraction family(h, f);
  SUBCASE("starts at h") {
    CHECK(map_distance(family.at(0.0), h, f, 200, 12) < 1e-9);
  }
  SUBCASE("ends leaf preserving") {
    CHECK(stabilizer_residual(identity_diffeo(), family.at(1.0), f, 2048, 13) < 1e-8);
  }
  SUBCASE("residual decreases along the deformation") {
    const double r0 = stabilizer_residual(identity_diffeo(), family.at(0.0), f, 512, 14);
    const double rh = stabilizer_residual(identity_diffeo(), family.at(0.5), f, 512, 14);
    const double r1 = stabilizer_residual(identity_diffeo(), family.at(1.0), f, 512, 14);
    CHECK(r1 < rh);
    CHECK(rh < r0);
  }
  SUBCASE("leaf-preserving input stays put") {
    const TorusMap lp = compose(g_A(gamma_delta()), rotation(0.5, 0.1));
    const Retraction flat(lp, f);
    for (double t : {0.0, 0.3, 1.0}) {
      CHECK(map_distance(flat.at(t), lp, f, 100, 15) < 1e-9);
    }
  }
  SUBCASE("theta input retracts to the identity") {
    const Retraction th_family(theta(phi, f), f);
    CHECK(map_distance(th_family.at(1.0), identity_torus_map(), f, 200, 16) < 1e-8);
  }
  SUBCASE("boundary-fixing maps stay fixed on the boundary") {
    const Retraction th_family(theta(phi, f), f);
    SplitMix64 rng(17);
    for (double t : {0.0, 0.5, 1.0}) {
      const TorusMap g = th_family.at(t);
      for (int i = 0; i < 50; ++i) {
        const TorusPoint x =
            leaf_point(f, 1.0, rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi));
        CHECK(distance(g.forward(x), x) < 1e-10);
      }
    }
  }
  SUBCASE("claims are enforced") {
    TorusMap unflagged = h;
    unflagged.claims.foliated = false;
    CHECK_THROWS_AS(retract(unflagged, 0.5, f), NotFoliated);
    TorusMap no_inverse = h;
    no_inverse.inverse = nullptr;
    CHECK_THROWS_AS(retract(no_inverse, 0.5, f), Error);
  }
}
