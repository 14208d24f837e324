#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace foltor {

using RealFn = std::function<double(double)>;

/// Smooth real function on a closed interval. Analytic first/second
/// derivatives may be supplied; otherwise a fourth-order finite-difference
/// scheme with step h = eps^{1/5} * max(1,|t|) is used (one-sided near the
/// interval ends).
struct Fn1D {
  double lo = 0.0;
  double hi = 1.0;
  RealFn f;
  RealFn d1;  // optional
  RealFn d2;  // optional

  double operator()(double t) const { return f(t); }
  double deriv(double t) const;
  double deriv2(double t) const;
};

Fn1D make_fn(double lo, double hi, RealFn f);
Fn1D make_fn(double lo, double hi, RealFn f, RealFn d1);
Fn1D make_fn(double lo, double hi, RealFn f, RealFn d1, RealFn d2);

/// Polynomial sum_i coeffs[i] t^i with analytic derivatives.
Fn1D poly_fn(double lo, double hi, std::vector<double> coeffs);

/// Max relative mismatch between the declared derivative and a central
/// finite difference of the value callable on a uniform grid.
double derivative_consistency(const Fn1D& fn, int grid = 64);

/// Fixed 32-node Gauss-Legendre rule on [0,1].
double integrate01(const std::function<double(double)>& f);

enum class Orientation { preserving, reversing };

/// Diffeomorphism of [0,1]: preserving means f(0)=0, f(1)=1 with positive
/// derivative on an interior grid; reversing swaps the endpoint values and
/// the derivative sign. Monotone maps with a critical endpoint (t^2) pass,
/// since the grid stays interior.
struct Diffeo01 {
  Fn1D fn;
  Orientation orientation = Orientation::preserving;

  double operator()(double t) const { return fn.f(t); }
  double deriv(double t) const { return fn.deriv(t); }
};

/// Validates endpoints and monotonicity (256 interior points); throws
/// NotMonotone / Error on failure.
Diffeo01 make_diffeo01(Fn1D fn);

Diffeo01 identity_diffeo();

/// outer o inner with chain-rule derivatives.
Diffeo01 compose(const Diffeo01& outer, const Diffeo01& inner);

/// Hadamard quotient: for phi with phi(0)=0 returns g with phi(t) = t*g(t),
/// computed as g(t) = int_0^1 phi'(s t) ds by the fixed 32-node rule, so
/// g(0) = phi'(0). Throws NonzeroAtOrigin.
Fn1D hadamard_div(const Fn1D& phi);

/// Whitney even-root division: for even gamma on [-a,a] returns the unique
/// phi on [0,a^2] with gamma(t) = phi(t^2). Values are gamma(sqrt(s)) away
/// from 0 and a quadratic model below s0 = s0_scale*a^2; the derivative
/// comes from phi'(s) = 1/2 int_0^1 gamma''(u sqrt(s)) du, which also
/// yields the bound sup|phi'| <= 1/2 sup|gamma''|. Throws NotEven.
Fn1D whitney_even_root(const Fn1D& gamma, double even_tol = 1e-10,
                       double s0_scale = 1e-4);

/// Linear contraction H(phi,t) = (1-t) phi + t id of the preserving group.
Diffeo01 contract_to_id(const Diffeo01& phi, double t);

/// Inverse diffeomorphism via safeguarded Newton with bisection fallback;
/// derivatives from the inverse function theorem. Throws NotMonotone.
Diffeo01 invert(const Diffeo01& phi);

/// phi1(t) = 1 - phi(1-t); conjugation by the flip of [0,1].
Diffeo01 flip_conjugate(const Diffeo01& phi);

/// Seeded analytic member of the preserving group (for reproducible
/// verification runs): a trig bump composed with a quadratic blend.
Diffeo01 seeded_diffeo(std::uint64_t seed);

}  // namespace foltor
