#include "foltor/torus.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "foltor/errors.hpp"
#include "foltor/rng.hpp"

namespace foltor {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kGolden = 0.61803398874989484820;

void require_rank2(const TorusPoint& x, const char* who) {
  if (x.fiber.size() != 2) {
    throw FiberRankNot2(std::string(who) + " needs a rank-2 fiber, got size " +
                        std::to_string(x.fiber.size()));
  }
}

Eigen::Vector2d rotate2(const Eigen::Vector2d& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

// Hadamard quotient g with phi(t) = t g(t), evaluated in the numerically
// strongest form: plain division away from 0, the quadrature integral
// int_0^1 phi'(s t) ds at the core. The two branches agree for smooth phi;
// the division form also stays exact for merely monotone inputs whose
// extracted interval maps have a corner at the core.
double hadamard_scale(const Diffeo01& phi, double t) {
  if (t >= 1e-6) return phi(t) / t;
  const Fn1D& fn = phi.fn;
  return integrate01([&](double s) { return fn.deriv(s * t); });
}

}  // namespace

double distance(const TorusPoint& a, const TorusPoint& b) {
  double da = std::fabs(wrap_angle(a.angle) - wrap_angle(b.angle));
  da = std::fmin(da, kTwoPi - da);
  if (a.fiber.size() != b.fiber.size()) return std::numeric_limits<double>::infinity();
  return da + (a.fiber - b.fiber).norm();
}

TorusMap identity_torus_map() {
  auto id = [](const TorusPoint& x) { return x; };
  return TorusMap{id, id, MapClaims{true, true, true}};
}

TorusMap compose(const TorusMap& outer, const TorusMap& inner) {
  TorusMap m;
  auto of = outer.forward, inf = inner.forward;
  m.forward = [of, inf](const TorusPoint& x) { return of(inf(x)); };
  if (outer.inverse && inner.inverse) {
    auto oi = outer.inverse, ini = inner.inverse;
    m.inverse = [oi, ini](const TorusPoint& x) { return ini(oi(x)); };
  }
  m.claims.foliated = outer.claims.foliated && inner.claims.foliated;
  m.claims.leaf_preserving = outer.claims.leaf_preserving && inner.claims.leaf_preserving;
  m.claims.boundary_fixed = outer.claims.boundary_fixed && inner.claims.boundary_fixed;
  return m;
}

TorusMap inverse_map(const TorusMap& m) {
  if (!m.inverse) throw Error("inverse_map: no inverse callable supplied");
  return TorusMap{m.inverse, m.forward, m.claims};
}

TorusMap g_A(const GammaElem& a) {
  auto action = [](const GammaElem& e) {
    return [e](const TorusPoint& x) {
      require_rank2(x, "g_A");
      TorusPoint y;
      y.angle = wrap_angle(static_cast<long double>(e.eps) * x.angle);
      Eigen::Vector2d v(x.fiber[0], e.delta == -1 ? -x.fiber[1] : x.fiber[1]);
      const double rot = wrap_angle(static_cast<long double>(e.m) * x.angle);
      y.fiber = rotate2(v, rot);
      return y;
    };
  };
  TorusMap m;
  m.forward = action(a);
  m.inverse = action(inverse(a));
  m.claims = MapClaims{true, true, false};
  return m;
}

TorusMap rotation(double alpha, double beta) {
  auto action = [](double da, double db) {
    return [da, db](const TorusPoint& x) {
      require_rank2(x, "rotation");
      TorusPoint y;
      y.angle = wrap_angle(x.angle + da);
      y.fiber = rotate2(Eigen::Vector2d(x.fiber), db);
      return y;
    };
  };
  TorusMap m;
  m.forward = action(alpha, beta);
  m.inverse = action(-alpha, -beta);
  m.claims = MapClaims{true, true, false};
  return m;
}

TorusMap theta(const Diffeo01& phi, const HomogFn& f) {
  if (!f.definite) throw NotDefinite("theta needs a definite homogeneous function");
  if (phi.orientation != Orientation::preserving) {
    throw NotOrientationPreserving("theta needs an orientation-preserving diffeomorphism");
  }
  const double inv_k = 1.0 / f.degree;
  auto scale_map = [f, inv_k](const Diffeo01& d) {
    return [f, inv_k, d](const TorusPoint& x) {
      if (x.fiber.squaredNorm() == 0.0) return x;  // the core scales to itself
      const double t = std::fmin(f.eval(x.angle, x.fiber), 1.0);
      const double s = std::pow(hadamard_scale(d, t), inv_k);
      return TorusPoint{x.angle, s * x.fiber};
    };
  };
  TorusMap m;
  m.forward = scale_map(phi);
  m.inverse = scale_map(invert(phi));
  m.claims = MapClaims{true, false, true};
  return m;
}

TorusPoint leaf_point(const HomogFn& f, double t, double angle, double dir_angle) {
  Eigen::VectorXd u(2);
  u << std::cos(dir_angle), std::sin(dir_angle);
  const double fu = f.eval(angle, u);
  Eigen::VectorXd v = t > 0.0 ? Eigen::VectorXd(std::pow(t / fu, 1.0 / f.degree) * u)
                              : Eigen::VectorXd(Eigen::VectorXd::Zero(2));
  return TorusPoint{wrap_angle(angle), v};
}

FoliationReport is_foliated(const TorusMap& h, const HomogFn& f0, const HomogFn& f1,
                            int leaves, int per_leaf, double tol) {
  FoliationReport report;
  report.leaves = leaves;
  report.per_leaf = per_leaf;
  for (int j = 0; j <= leaves; ++j) {
    const double t = static_cast<double>(j) / leaves;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < per_leaf; ++i) {
      const double angle = kTwoPi * (i + 0.5 * j) / per_leaf;
      const double dir = kTwoPi * std::fmod(kGolden * (i + 1) + 0.1 * j, 1.0);
      const TorusPoint x = leaf_point(f0, t, angle, dir);  // core when t = 0
      const double val = f1.eval(x.angle, h.forward(x).fiber);
      lo = std::fmin(lo, val);
      hi = std::fmax(hi, val);
    }
    report.max_spread = std::fmax(report.max_spread, hi - lo);
  }
  report.foliated = report.max_spread <= tol;
  return report;
}

Fn1D sigma_fn(const TorusMap& h, const HomogFn& f0, const HomogFn& f1,
              const TorusPoint& ray, double extent, SigmaDiagnostics* diag) {
  if (!f0.definite || !f1.definite) {
    throw NotDefinite("sigma needs definite homogeneous functions");
  }
  if (f0.degree != 2) throw Error("sigma: the source function must be 2-homogeneous");

  // normalize the ray onto the boundary leaf f0 = 1
  const double fr = f0.eval(ray.angle, ray.fiber);
  if (fr <= 0.0) throw Error("sigma: ray must have a nonzero fiber");
  const Eigen::VectorXd w = ray.fiber / std::sqrt(fr);
  const double base = ray.angle;

  auto hf = h.forward;
  Fn1D gamma = make_fn(-extent, extent, [hf, f1, base, w](double t) {
    const TorusPoint x{base, Eigen::VectorXd(t * w)};
    const TorusPoint y = hf(x);
    return f1.eval(y.angle, y.fiber);
  });

  SigmaDiagnostics local;
  for (int i = 1; i <= 128; ++i) {
    const double t = extent * i / 128.0;
    local.evenness = std::fmax(local.evenness, std::fabs(gamma.f(t) - gamma.f(-t)));
  }

  Fn1D phi = whitney_even_root(gamma);

  local.gamma_prime_min = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 128; ++i) {
    const double t = extent * i / 128.0;
    local.gamma_prime_min = std::fmin(local.gamma_prime_min, gamma.deriv(t));
  }
  local.delta0 = phi.deriv(0.0);
  if (diag) *diag = local;

  if (local.gamma_prime_min <= 1e-12) {
    throw NotDiffeo("gamma' <= 0 off the core (min " + std::to_string(local.gamma_prime_min) +
                    "): the induced interval map is not a diffeomorphism");
  }
  if (local.delta0 <= 1e-7) {
    throw NotDiffeo("phi'(0) = " + std::to_string(local.delta0) +
                    " <= 0: degree mismatch collapses the derivative at the core");
  }
  return phi;
}

Diffeo01 sigma(const TorusMap& h, const HomogFn& f0, const HomogFn& f1,
               const TorusPoint& ray, SigmaDiagnostics* diag) {
  const FoliationReport rep = is_foliated(h, f0, f1);
  if (!rep.foliated) {
    throw NotFoliated("leaf spread " + std::to_string(rep.max_spread) + " exceeds tolerance");
  }
  return make_diffeo01(sigma_fn(h, f0, f1, ray, 1.0, diag));
}

double stabilizer_residual(const Diffeo01& phi, const TorusMap& h, const HomogFn& f,
                           int samples, std::uint64_t seed) {
  // stratified grid in (leaf value, base angle, fiber direction)
  SplitMix64 rng(seed ^ 0x6c62272e07bb0142ULL);
  const int leaves = 32;
  const int per_leaf = std::max(1, samples / leaves);
  double worst = 0.0;
  for (int j = 0; j <= leaves; ++j) {
    const double t = static_cast<double>(j) / leaves;
    const double jitter = rng.uniform01();
    for (int i = 0; i < per_leaf; ++i) {
      const double angle = kTwoPi * (i + jitter) / per_leaf;
      const double dir = kTwoPi * std::fmod(kGolden * (i + 1) + jitter, 1.0);
      const TorusPoint x = leaf_point(f, t, angle, dir);
      const TorusPoint y = h.forward(x);
      worst = std::fmax(worst, std::fabs(phi(t) - f.eval(y.angle, y.fiber)));
    }
  }
  return worst;
}

TorusPoint default_ray(const HomogFn& f) {
  // polarize the fiber form at base angle 0 and take its first eigenvector
  auto fiber = [&f](double angle, const Eigen::VectorXd& v) { return f.eval(angle, v); };
  const Eigen::MatrixXd a = polarize(fiber, f.rank, BasePoint{0.0});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  Eigen::VectorXd u = solver.eigenvectors().col(0);
  const double fu = f.eval(0.0, u);
  return TorusPoint{0.0, Eigen::VectorXd(u / std::pow(fu, 1.0 / f.degree))};
}

Retraction::Retraction(TorusMap h, HomogFn f, std::optional<TorusPoint> ray)
    : h_(std::move(h)), f_(std::move(f)), sigma_hinv_(identity_diffeo()) {
  if (!h_.claims.foliated) throw NotFoliated("retract needs a map with the foliated claim");
  if (!h_.inverse) throw Error("retract needs an explicit inverse callable");
  const TorusPoint r = ray ? *ray : default_ray(f_);
  sigma_hinv_ = sigma(inverse_map(h_), f_, f_, r);
}

TorusMap Retraction::at(double t) const {
  const Diffeo01 interp = contract_to_id(sigma_hinv_, 1.0 - t);
  TorusMap g = compose(theta(interp, f_), h_);
  g.claims.foliated = true;
  g.claims.boundary_fixed = h_.claims.boundary_fixed;
  return g;
}

TorusMap retract(const TorusMap& h, double t, const HomogFn& f) {
  return Retraction(h, f).at(t);
}

}  // namespace foltor
