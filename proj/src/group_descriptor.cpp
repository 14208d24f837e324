#include "foltor/group_descriptor.hpp"

#include <algorithm>

#include "foltor/errors.hpp"

namespace foltor {

GroupDescriptor GroupDescriptor::trivial() { return GroupDescriptor{}; }

GroupDescriptor GroupDescriptor::integers() {
  GroupDescriptor g;
  g.kind_ = Kind::Z;
  return g;
}

GroupDescriptor GroupDescriptor::cyclic(std::uint64_t n) {
  if (n == 0) throw Error("cyclic: order must be positive");
  if (n == 1) return trivial();
  GroupDescriptor g;
  g.kind_ = Kind::Zn;
  g.n_ = n;
  return g;
}

GroupDescriptor GroupDescriptor::dihedral(const GroupDescriptor& inner) {
  GroupDescriptor g;
  g.kind_ = Kind::Dih;
  g.children_ = {inner};
  return g;
}

GroupDescriptor GroupDescriptor::product(std::vector<GroupDescriptor> factors) {
  std::vector<GroupDescriptor> flat;
  for (auto& f : factors) {
    if (f.kind_ == Kind::Trivial) continue;
    if (f.kind_ == Kind::Product) {
      flat.insert(flat.end(), f.children_.begin(), f.children_.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return trivial();
  if (flat.size() == 1) return flat.front();
  std::sort(flat.begin(), flat.end(),
            [](const GroupDescriptor& a, const GroupDescriptor& b) {
              return a.to_string() < b.to_string();
            });
  GroupDescriptor g;
  g.kind_ = Kind::Product;
  g.children_ = std::move(flat);
  return g;
}

GroupDescriptor GroupDescriptor::semidirect_inversion(const GroupDescriptor& normal,
                                                      const GroupDescriptor& acting) {
  GroupDescriptor g;
  g.kind_ = Kind::Semidirect;
  g.children_ = {normal, acting};
  return g;
}

std::optional<std::uint64_t> GroupDescriptor::order() const {
  switch (kind_) {
    case Kind::Trivial: return 1;
    case Kind::Z: return std::nullopt;
    case Kind::Zn: return n_;
    case Kind::Dih: {
      auto inner = children_[0].order();
      if (!inner) return std::nullopt;
      return 2 * *inner;
    }
    case Kind::Product:
    case Kind::Semidirect: {
      std::uint64_t total = 1;
      for (const auto& c : children_) {
        auto o = c.order();
        if (!o) return std::nullopt;
        total *= *o;
      }
      return total;
    }
  }
  return std::nullopt;
}

bool GroupDescriptor::is_abelian_expr() const {
  switch (kind_) {
    case Kind::Trivial:
    case Kind::Z:
    case Kind::Zn: return true;
    case Kind::Product:
      return std::all_of(children_.begin(), children_.end(),
                         [](const GroupDescriptor& c) { return c.is_abelian_expr(); });
    default: return false;
  }
}

GroupDescriptor GroupDescriptor::mod2_quotient() const {
  switch (kind_) {
    case Kind::Trivial: return trivial();
    case Kind::Z: return cyclic(2);
    case Kind::Zn: return n_ % 2 == 0 ? cyclic(2) : trivial();
    case Kind::Product: {
      std::vector<GroupDescriptor> qs;
      qs.reserve(children_.size());
      for (const auto& c : children_) qs.push_back(c.mod2_quotient());
      return product(std::move(qs));
    }
    default: throw Error("mod2_quotient: expression is not abelian");
  }
}

GroupDescriptor GroupDescriptor::abelianization() const {
  switch (kind_) {
    case Kind::Trivial:
    case Kind::Z:
    case Kind::Zn: return *this;
    case Kind::Dih: {
      // Dih(A)^ab = A/2A x Z_2: the reflection inverts A, so 2A dies.
      auto inner = children_[0].abelianization();
      if (!inner.is_abelian_expr()) throw Error("abelianization: Dih of non-abelian");
      return product({inner.mod2_quotient(), cyclic(2)});
    }
    case Kind::Product: {
      std::vector<GroupDescriptor> abs;
      abs.reserve(children_.size());
      for (const auto& c : children_) abs.push_back(c.abelianization());
      return product(std::move(abs));
    }
    case Kind::Semidirect: {
      auto normal = children_[0].abelianization();
      if (!normal.is_abelian_expr()) throw Error("abelianization: non-abelian kernel");
      return product({normal.mod2_quotient(), children_[1].abelianization()});
    }
  }
  return trivial();
}

std::string GroupDescriptor::to_string() const {
  auto wrap = [](const GroupDescriptor& g) {
    std::string s = g.to_string();
    if (g.kind_ == Kind::Product || g.kind_ == Kind::Semidirect) return "(" + s + ")";
    return s;
  };
  switch (kind_) {
    case Kind::Trivial: return "1";
    case Kind::Z: return "Z";
    case Kind::Zn: return "Z_" + std::to_string(n_);
    case Kind::Dih: return "Dih(" + children_[0].to_string() + ")";
    case Kind::Product: {
      std::string s = wrap(children_[0]);
      for (std::size_t i = 1; i < children_.size(); ++i) s += " x " + wrap(children_[i]);
      return s;
    }
    case Kind::Semidirect:
      return wrap(children_[0]) + " x| " + wrap(children_[1]);
  }
  return "?";
}

bool GroupDescriptor::operator==(const GroupDescriptor& other) const {
  if (kind_ != other.kind_ || n_ != other.n_) return false;
  if (children_.size() != other.children_.size()) return false;
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (!(children_[i] == other.children_[i])) return false;
  }
  return true;
}

}  // namespace foltor
