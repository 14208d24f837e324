#include "foltor/gamma.hpp"

#include <string>

#include "foltor/errors.hpp"

namespace foltor {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("twist exponent out of 64-bit range");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("twist exponent out of 64-bit range");
  return r;
}

}  // namespace

GammaElem gamma_identity() { return {1, 1, 0}; }
GammaElem gamma_delta() { return {1, 1, 1}; }
GammaElem gamma_lambda() { return {-1, 1, 0}; }
GammaElem gamma_mu() { return {1, -1, 0}; }
GammaElem gamma_tau() { return {-1, -1, 0}; }

GammaElem from_matrix(const Mat2i& mat) {
  const auto a = mat[0][0], b = mat[0][1], c = mat[1][0], d = mat[1][1];
  if (b != 0) throw NotInGamma("upper-right entry must be 0, got " + std::to_string(b));
  if (a != 1 && a != -1) throw NotInGamma("top-left entry must be +-1, got " + std::to_string(a));
  if (d != 1 && d != -1) throw NotInGamma("bottom-right entry must be +-1, got " + std::to_string(d));
  return {static_cast<int>(a), static_cast<int>(d), c};
}

GammaElem mul(const GammaElem& a, const GammaElem& b) {
  // [[e1,0],[m1,d1]] * [[e2,0],[m2,d2]] = [[e1 e2, 0],[m1 e2 + d1 m2, d1 d2]]
  GammaElem r;
  r.eps = a.eps * b.eps;
  r.delta = a.delta * b.delta;
  r.m = checked_add(checked_mul(a.m, b.eps), checked_mul(a.delta, b.m));
  return r;
}

GammaElem inverse(const GammaElem& a) {
  // [[e,0],[m,d]]^-1 = [[e,0],[-e d m, d]] since e^2 = d^2 = 1.
  GammaElem r;
  r.eps = a.eps;
  r.delta = a.delta;
  r.m = checked_mul(-static_cast<std::int64_t>(a.eps) * a.delta, a.m);
  return r;
}

GammaElem power(const GammaElem& a, std::int64_t n) {
  GammaElem base = n < 0 ? inverse(a) : a;
  std::int64_t k = n < 0 ? -n : n;
  GammaElem acc = gamma_identity();
  while (k > 0) {
    if (k & 1) acc = mul(acc, base);
    base = k > 1 ? mul(base, base) : base;
    k >>= 1;
  }
  return acc;
}

GammaWord normal_form(const GammaElem& a) {
  // delta^m lambda^b tau^c has (eps,delta) = ((-1)^{b+c}, (-1)^c) and
  // matrix twist entry eps*m, so the word exponents read off directly.
  GammaWord w;
  w.tau_bit = a.delta == -1;
  w.lambda_bit = a.eps * a.delta == -1;
  w.m = checked_mul(a.eps, a.m);
  return w;
}

GammaElem evaluate(const GammaWord& w) {
  GammaElem r{1, 1, w.m};  // delta^m
  if (w.lambda_bit) r = mul(r, gamma_lambda());
  if (w.tau_bit) r = mul(r, gamma_tau());
  return r;
}

GroupDescriptor pi0_descriptor_gamma() {
  return GroupDescriptor::product(
      {GroupDescriptor::dihedral(GroupDescriptor::integers()), GroupDescriptor::cyclic(2)});
}

}  // namespace foltor
