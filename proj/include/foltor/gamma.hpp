#pragma once

#include <array>
#include <cstdint>

#include "foltor/group_descriptor.hpp"

namespace foltor {

using Mat2i = std::array<std::array<std::int64_t, 2>, 2>;

/// Element of the subgroup of GL(2,Z) whose matrices fix the vector (0,1)
/// up to sign: [[eps,0],[m,delta]] with eps,delta in {-1,+1}, m integer.
struct GammaElem {
  int eps = 1;
  int delta = 1;
  std::int64_t m = 0;

  Mat2i matrix() const { return {{{eps, 0}, {m, delta}}}; }
  friend bool operator==(const GammaElem&, const GammaElem&) = default;
};

/// Word normal form delta^m * lambda^b * tau^c. The mu generator is the
/// word lambda*tau, not a separate letter, which keeps the form unique.
struct GammaWord {
  std::int64_t m = 0;
  bool lambda_bit = false;
  bool tau_bit = false;
  friend bool operator==(const GammaWord&, const GammaWord&) = default;
};

GammaElem gamma_identity();
GammaElem gamma_delta();   // [[1,0],[1,1]]
GammaElem gamma_lambda();  // [[-1,0],[0,1]]
GammaElem gamma_mu();      // [[1,0],[0,-1]]
GammaElem gamma_tau();     // [[-1,0],[0,-1]]

/// Accepts exactly the matrices of the group; throws NotInGamma otherwise.
GammaElem from_matrix(const Mat2i& mat);

/// Exact matrix product. Throws Overflow if the twist exponent leaves the
/// 64-bit range (it must be detected, never wrapped).
GammaElem mul(const GammaElem& a, const GammaElem& b);

GammaElem inverse(const GammaElem& a);
GammaElem power(const GammaElem& a, std::int64_t n);

GammaWord normal_form(const GammaElem& a);
GammaElem evaluate(const GammaWord& w);

/// Dih(Z) x Z_2.
GroupDescriptor pi0_descriptor_gamma();

}  // namespace foltor
