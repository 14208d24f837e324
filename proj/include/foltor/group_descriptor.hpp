#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace foltor {

/// Symbolic group expression over the atoms 1, Z, Z_n, closed under Dih(-),
/// direct products and semidirect products N x| H in which H acts on N by
/// inversion. Values are kept in a canonical form (products flattened,
/// trivial factors dropped, factors sorted), so equality is structural and
/// decidable; Z_2 x Z_2 and Z_4 are distinct descriptors.
class GroupDescriptor {
 public:
  GroupDescriptor() = default;

  static GroupDescriptor trivial();
  static GroupDescriptor integers();
  static GroupDescriptor cyclic(std::uint64_t n);
  static GroupDescriptor dihedral(const GroupDescriptor& inner);
  static GroupDescriptor product(std::vector<GroupDescriptor> factors);
  static GroupDescriptor semidirect_inversion(const GroupDescriptor& normal,
                                              const GroupDescriptor& acting);

  /// Group order; nullopt means infinite.
  std::optional<std::uint64_t> order() const;

  /// Abelianization. Defined for the expressions this library builds
  /// (abelian atoms, Dih of abelian, inversion semidirect products).
  GroupDescriptor abelianization() const;

  std::string to_string() const;

  bool operator==(const GroupDescriptor& other) const;
  bool operator!=(const GroupDescriptor& other) const { return !(*this == other); }

 private:
  enum class Kind { Trivial, Z, Zn, Dih, Product, Semidirect };

  Kind kind_ = Kind::Trivial;
  std::uint64_t n_ = 0;                     // for Zn
  std::vector<GroupDescriptor> children_;   // Dih: 1, Product: >=2, Semidirect: 2

  GroupDescriptor mod2_quotient() const;    // A -> A/2A for abelian A
  bool is_abelian_expr() const;
};

}  // namespace foltor
