#pragma once

#include <cstdint>

#include "foltor/gamma.hpp"
#include "foltor/group_descriptor.hpp"

namespace foltor {

/// Arithmetic data of a lens space L(p,q): normalized coprime pair and the
/// canonical gluing matrix Xi = [[r,p],[s,q]] with det(Xi) = rq - ps = -1.
struct LensSpec {
  std::int64_t p = 0;
  std::int64_t q = 1;
  Mat2i xi{};
};

/// Normalizes (p,q) and produces the canonical gluing matrix. q is reduced
/// mod p for p >= 1 (so (1,q) becomes (1,0)); p = 0 only admits q = +-1.
/// The three small cases come out as [[-1,0],[0,1]], [[0,1],[1,0]] and
/// [[1,2],[1,1]]. Throws NotCoprime on invalid input.
LensSpec canonical_spec(std::int64_t p, std::int64_t q);

/// True iff q^2 + p*s = 1 has an integer solution s.
bool sigma_plus_exists(const LensSpec& spec);

/// True iff q^2 - p*s = -1 has an integer solution s (never for p = 0).
bool sigma_minus_exists(const LensSpec& spec);

/// Availability flags as listed in the case-by-case table of mapping
/// classes, which for p = 0 lists only the minus exchange. For p >= 1 they
/// agree with the arithmetic predicates above; for p = 0 they disagree, and
/// both readings are reported side by side.
bool sigma_plus_case_listed(const LensSpec& spec);
bool sigma_minus_case_listed(const LensSpec& spec);

/// True iff p > 2 and q^2 != +-1 mod p: exactly when no diffeomorphism
/// exchanges the two solid tori and the isometry group coincides with the
/// foliated model groups.
bool isometry_coincidence(const LensSpec& spec);

/// True iff q' = q (mod p) or q*q' = 1 (mod p). Throws NotCoprime.
bool lens_equivalent(std::int64_t p, std::int64_t q, std::int64_t q_prime);

/// pi0 of the model subgroups: the solid-torus mapping classes, the
/// torus-preserving group A_{p,q}, and its extension by the exchanges.
struct Pi0Table {
  GroupDescriptor solid_torus;
  GroupDescriptor a;
  GroupDescriptor a_fol;
};

Pi0Table pi0_groups(const LensSpec& spec);

}  // namespace foltor
