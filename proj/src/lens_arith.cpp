#include "foltor/lens_arith.hpp"

#include <numeric>
#include <string>

#include "foltor/errors.hpp"

namespace foltor {

namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Modular inverse of a mod m (m >= 1, gcd(a,m) = 1).
std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = m, new_r = mod_pos(a, m);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  return mod_pos(t, m);
}

void require_coprime(std::int64_t p, std::int64_t q) {
  const std::int64_t g = std::gcd(p, q);  // gcd(0,q) = |q|
  if (g != 1) {
    throw NotCoprime("gcd(" + std::to_string(p) + "," + std::to_string(q) +
                     ") = " + std::to_string(g));
  }
}

}  // namespace

LensSpec canonical_spec(std::int64_t p, std::int64_t q) {
  if (p < 0) throw NotCoprime("p must be >= 0");
  require_coprime(p, q);

  LensSpec spec;
  spec.p = p;
  if (p == 0) {
    spec.q = 1;  // gcd(0,q) = 1 forces q = +-1; both give the same space
    spec.xi = {{{-1, 0}, {0, 1}}};
    return spec;
  }

  spec.q = mod_pos(q, p);  // p = 1 -> q = 0; p >= 2 -> 1 <= q < p
  // r is the least nonnegative residue with r*q = -1 (mod p); then s is
  // forced by the determinant. This reproduces the standard matrices for
  // (1,0) and (2,1).
  const std::int64_t r = p == 1 ? 0 : mod_pos(-mod_inverse(spec.q, p), p);
  const std::int64_t s = (r * spec.q + 1) / p;
  spec.xi = {{{r, p}, {s, spec.q}}};
  return spec;
}

bool sigma_plus_exists(const LensSpec& spec) {
  if (spec.p == 0) return spec.q * spec.q == 1;
  return mod_pos(spec.q * spec.q, spec.p) == mod_pos(1, spec.p);
}

bool sigma_minus_exists(const LensSpec& spec) {
  if (spec.p == 0) return false;  // q^2 = -1 has no integer solution
  return mod_pos(spec.q * spec.q, spec.p) == mod_pos(-1, spec.p);
}

bool sigma_plus_case_listed(const LensSpec& spec) {
  if (spec.p == 0) return false;  // the case table lists only the minus map
  return sigma_plus_exists(spec);
}

bool sigma_minus_case_listed(const LensSpec& spec) {
  if (spec.p == 0) return true;
  return sigma_minus_exists(spec);
}

bool isometry_coincidence(const LensSpec& spec) {
  return spec.p > 2 && !sigma_plus_exists(spec) && !sigma_minus_exists(spec);
}

bool lens_equivalent(std::int64_t p, std::int64_t q, std::int64_t q_prime) {
  if (p < 0) throw NotCoprime("p must be >= 0");
  require_coprime(p, q);
  require_coprime(p, q_prime);
  if (p == 0) return q == q_prime || q * q_prime == 1;
  return mod_pos(q_prime - q, p) == 0 || mod_pos(q * q_prime, p) == mod_pos(1, p);
}

Pi0Table pi0_groups(const LensSpec& spec) {
  using G = GroupDescriptor;
  Pi0Table table;
  table.solid_torus = pi0_descriptor_gamma();

  const G z2 = G::cyclic(2);
  if (spec.p == 0) {
    table.a = pi0_descriptor_gamma();
    table.a_fol = G::semidirect_inversion(G::integers(), G::product({z2, z2, z2}));
  } else if (spec.p == 1 || spec.p == 2) {
    table.a = G::product({z2, z2});
    table.a_fol = G::dihedral(G::cyclic(4));
  } else {
    table.a = z2;
    if (sigma_plus_exists(spec)) {
      table.a_fol = G::product({z2, z2});
    } else if (sigma_minus_exists(spec)) {
      table.a_fol = G::cyclic(4);
    } else {
      table.a_fol = z2;
    }
  }
  return table;
}

}  // namespace foltor
