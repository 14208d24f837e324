#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "foltor/fn1d.hpp"
#include "foltor/homog.hpp"
#include "foltor/lens_arith.hpp"
#include "foltor/torus.hpp"

namespace foltor {

/// Gluing data for the closed manifold assembled from two open solid tori:
/// definite homogeneous functions on each chart and the boundary
/// identification psi between their unit levels.
struct GlueSpec {
  HomogFn f0;
  HomogFn f1;
  std::function<TorusPoint(const TorusPoint&)> psi;
  std::function<TorusPoint(const TorusPoint&)> psi_inv;
};

/// Standard lens gluing: f = |v|^2 on both charts; psi acts on boundary
/// angle pairs (a, theta_z) by the matrix [[r,p],[s,q]], i.e.
/// (a, z) -> (a^r z^p, a^s z^q) on the 2-torus.
GlueSpec lens_glue_spec(const LensSpec& spec);

/// Same boundary matrix action transported to arbitrary definite rank-2
/// degree-2 functions: directions are mapped through the matrix and
/// rescaled onto the unit level of the target function.
GlueSpec lens_glue_spec(const LensSpec& spec, const HomogFn& f0, const HomogFn& f1);

/// Max |f1(psi(x)) - 1| over boundary samples; psi must carry f0 = 1 to
/// f1 = 1.
double psi_boundary_residual(const GlueSpec& spec, int samples = 256);

/// Point of the glued manifold in one of the two charts (open tori).
struct LensPoint {
  int chart = 0;
  TorusPoint pt;
};

/// Transition map between the open charts:
/// xi(x) = (1 - f0(x))^{1/k1} * psi(x / f0(x)^{1/k0}), which carries the
/// leaf f0 = t onto f1 = 1 - t. Undefined on the core (f0 = 0) and the
/// boundary (f0 = 1); throws OnCore / OnBoundary there.
TorusPoint xi(const GlueSpec& spec, const TorusPoint& x);
TorusPoint xi_inverse(const GlueSpec& spec, const TorusPoint& y);

/// The glued level function: f0 on chart 0, 1 - f1 on chart 1; its values
/// agree across the transition.
double glued_f(const GlueSpec& spec, const LensPoint& p);

/// Same underlying point in the other chart, via xi or its inverse.
LensPoint transfer(const GlueSpec& spec, const LensPoint& p);

/// Distance after moving both points into a common chart.
double lens_distance(const GlueSpec& spec, const LensPoint& a, const LensPoint& b);

enum class LensKind { chart_preserving, chart_swapping };

/// Diffeomorphism of the glued manifold as a chart pair (h0; h1):
/// chart-preserving maps send chart i to itself via h_i and must satisfy
/// xi o h0 = h1 o xi; chart-swapping maps send chart i to chart 1-i and
/// must satisfy xi^{-1} o h0 = h1 o xi on the annulus.
struct LensMap {
  LensKind kind = LensKind::chart_preserving;
  std::function<TorusPoint(const TorusPoint&)> h0, h1;
  std::function<TorusPoint(const TorusPoint&)> h0_inv, h1_inv;
};

LensMap identity_lens_map();
LensPoint apply(const LensMap& m, const LensPoint& p);
LensMap compose(const LensMap& outer, const LensMap& inner);
LensMap inverse_map(const LensMap& m);

/// Max distance between the two legs of the defining diagram over annulus
/// samples; the measured form of the LensMap invariant.
double compatibility_residual(const GlueSpec& spec, const LensMap& m, int samples = 256,
                              std::uint64_t seed = 1);

/// Chart-preserving extension of theta: phi acts on chart 0 and its flip
/// conjugate 1 - phi(1-t) on chart 1, so phi o glued_f = glued_f o map.
/// Throws NotOrientationPreserving.
LensMap theta_glued(const GlueSpec& spec, const Diffeo01& phi);

/// Leaf-value extraction on the glued manifold (both degrees must be 2).
/// Chart-preserving maps give preserving diffeomorphisms of [0,1], built
/// from the two chart extractions as phi0(t) / 1 - phi1(1-t); swapping
/// maps give reversing ones. Throws IncompatiblePair / NotFoliated.
Diffeo01 sigma_glued(const GlueSpec& spec, const LensMap& h, SigmaDiagnostics* diag = nullptr);

/// Deformation of a chart-preserving foliated map onto the leaf-preserving
/// group, mirroring the solid-torus retraction. Chart-swapping input is
/// rejected (ChartSwapping): the deformation lives on the subgroup fixing
/// the two cores.
class GluedRetraction {
 public:
  GluedRetraction(GlueSpec spec, LensMap h);

  LensMap at(double t) const;
  const Diffeo01& sigma_of_inverse() const { return sigma_hinv_; }

 private:
  GlueSpec spec_;
  LensMap h_;
  Diffeo01 sigma_hinv_;
};

LensMap retract_glued(const GlueSpec& spec, const LensMap& h, double t);

/// Named mapping-class representatives for the standard lens gluing.
enum class McgName {
  rho,          // rotation pair (needs alpha, beta)
  delta_hat,    // twist pair, defined when Xi conjugates it into the group
  lambda_hat,
  mu_hat,
  tau_hat,      // central, defined for every (p,q)
  theta_hat,    // the order-two twist pair specific to (2,1)
  sigma_plus,   // chart exchange from an involutive gluing matrix
  sigma_minus,  // chart exchange through the reflection pair
};

/// Builds the named diffeomorphism for the given lens space, or throws
/// NotDefinedForSpec when the case analysis does not provide it. The
/// sigma exchanges are transported to the canonical gluing matrix by a
/// twist conjugation; for p = 0 the minus pair is returned as listed even
/// though it fails the measured compatibility there.
LensMap mcg_diffeo(const GlueSpec& spec, const LensSpec& lens, McgName name,
                   double alpha = 0.0, double beta = 0.0);

struct WordLetter {
  McgName name = McgName::tau_hat;
  bool inverted = false;
  double alpha = 0.0;  // rho only
  double beta = 0.0;
};

/// Evaluates both words as composite maps and returns the max pointwise
/// distance over seeded sample points in both charts. An empty word is the
/// identity.
double verify_relation(const GlueSpec& spec, const LensSpec& lens,
                       const std::vector<WordLetter>& lhs, const std::vector<WordLetter>& rhs,
                       int samples = 128, std::uint64_t seed = 1);

}  // namespace foltor
