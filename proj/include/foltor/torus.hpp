#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "foltor/fn1d.hpp"
#include "foltor/gamma.hpp"
#include "foltor/homog.hpp"

namespace foltor {

/// Point of the solid torus f^{-1}([0,1]): base angle plus fiber vector.
struct TorusPoint {
  double angle = 0.0;
  Eigen::VectorXd fiber;
};

/// Base-circle distance plus fiber distance.
double distance(const TorusPoint& a, const TorusPoint& b);

/// Advisory flags; verified only by the checking operations below.
struct MapClaims {
  bool foliated = false;
  bool leaf_preserving = false;
  bool boundary_fixed = false;
};

/// Diffeomorphism of the solid torus carried as an explicit pair of
/// callables. Maps without a supplied inverse cannot be retracted.
struct TorusMap {
  std::function<TorusPoint(const TorusPoint&)> forward;
  std::function<TorusPoint(const TorusPoint&)> inverse;
  MapClaims claims;
};

TorusMap identity_torus_map();
TorusMap compose(const TorusMap& outer, const TorusMap& inner);
TorusMap inverse_map(const TorusMap& m);

/// The twist-reflection realization of a group matrix [[eps,0],[m,delta]]:
/// base angle a -> eps*a, fiber rotated by m*a and conjugated when
/// delta = -1. Exact angle arithmetic (reduction mod 2*pi in extended
/// precision), so A -> g_A is a homomorphism to working accuracy.
/// Throws FiberRankNot2 when applied off a rank-2 fiber.
TorusMap g_A(const GammaElem& a);

/// (a, v) -> (a + alpha, R(beta) v): the rotation subgroup.
TorusMap rotation(double alpha, double beta);

/// Section of the leaf-value projection: theta(phi) scales each fiber by
/// [g_phi(f(x))]^{1/k}, where g_phi is the Hadamard quotient of phi. It
/// satisfies phi o f = f o theta(phi), fixes the boundary, and is a monoid
/// homomorphism. Throws NotDefinite / NotOrientationPreserving.
TorusMap theta(const Diffeo01& phi, const HomogFn& f);

struct SigmaDiagnostics {
  double gamma_prime_min = 0.0;  // min of gamma' over (0, extent]
  double delta0 = 0.0;           // gamma(t)/t^2 at t = 0, i.e. phi'(0)
  double evenness = 0.0;         // max |gamma(t) - gamma(-t)|
};

struct FoliationReport {
  int leaves = 0;
  int per_leaf = 0;
  double max_spread = 0.0;
  bool foliated = false;
};

/// Samples each leaf f0^{-1}(t) and reports the spread max-min of f1 o h
/// over it; h is foliated when every spread stays below tol.
FoliationReport is_foliated(const TorusMap& h, const HomogFn& f0, const HomogFn& f1,
                            int leaves = 32, int per_leaf = 64, double tol = 1e-8);

/// Leaf-value extraction: for a foliated h the function gamma(t) =
/// f1(h(t*ray)) is even, and Whitney division yields the unique phi with
/// phi o f0 = f1 o h. The diagnostics gamma' > 0 off 0 and phi'(0) > 0
/// certify phi is a diffeomorphism; a degree mismatch (f1 = |v|^4 against
/// f0 = |v|^2) fails them and raises NotDiffeo. Throws NotFoliated first
/// when the leaf-spread check fails.
Diffeo01 sigma(const TorusMap& h, const HomogFn& f0, const HomogFn& f1,
               const TorusPoint& ray, SigmaDiagnostics* diag = nullptr);

/// Same construction with the sampling ray stopped at |t| <= extent < 1;
/// returns the raw interval function on [0, extent^2] (used for gluing
/// charts, where maps live on the open torus).
Fn1D sigma_fn(const TorusMap& h, const HomogFn& f0, const HomogFn& f1,
              const TorusPoint& ray, double extent, SigmaDiagnostics* diag = nullptr);

/// Max over seeded samples of |phi(f(x)) - f(h(x))|; zero exactly when
/// (phi,h) stabilizes f under the left-right action.
double stabilizer_residual(const Diffeo01& phi, const TorusMap& h, const HomogFn& f,
                           int samples = 2048, std::uint64_t seed = 1);

/// Boundary point at base angle 0 in the first eigen-direction of the
/// polarized form there, scaled onto f = 1.
TorusPoint default_ray(const HomogFn& f);

/// Point on the leaf f^{-1}(t) at the given base angle and fiber direction.
TorusPoint leaf_point(const HomogFn& f, double t, double angle, double dir_angle);

/// Deformation of a foliated h onto the leaf-preserving group:
/// G(h,t) = theta(H(sigma(h^{-1}), 1-t)) o h, with H the linear
/// contraction. G(h,0) = h; G(h,1) is leaf preserving; maps fixing the
/// boundary stay fixed on it. sigma(h^{-1}) is computed once per family.
class Retraction {
 public:
  Retraction(TorusMap h, HomogFn f, std::optional<TorusPoint> ray = std::nullopt);

  TorusMap at(double t) const;
  const Diffeo01& sigma_of_inverse() const { return sigma_hinv_; }

 private:
  TorusMap h_;
  HomogFn f_;
  Diffeo01 sigma_hinv_;
};

/// One-shot form of the retraction; requires the foliated claim and an
/// explicit inverse (NotFoliated / Error otherwise).
TorusMap retract(const TorusMap& h, double t, const HomogFn& f);

}  // namespace foltor
