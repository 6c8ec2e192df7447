#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewprod/error.hpp"

namespace skewprod {

// Dense element id; 0 is always the identity.
using ElementId = int;

// A finite group realized as an explicit multiplication table.
//
// Canonical labelings used by the builders:
//   cyclic:        c^i            -> i
//   D/Q/SD:        a^i b^j        -> 2*i + j            (i < order/2, j < 2)
//   family groups: a^i b^j c^k    -> (2*i + j)*2^m + k  (see family.hpp)
// Immutable after construction; safe to share across threads.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  // Validates: Latin square, identity at 0, inverses, associativity
  // (Light's test against a generating set, equivalent to the full
  // triple check). Throws Errc::not_a_group / invalid_parameter.
  static FiniteGroup from_table(std::vector<ElementId> flat_table, int order,
                                std::string descriptor,
                                std::map<std::string, ElementId> generators);

  int order() const { return order_; }
  ElementId identity() const { return 0; }

  ElementId mul(ElementId g, ElementId h) const { return table_[g * order_ + h]; }
  ElementId inv(ElementId g) const { return inverse_[g]; }
  int order_of(ElementId g) const { return element_order_[g]; }

  // g^e for any integer e (negative exponents via the inverse).
  ElementId power(ElementId g, long long e) const;

  // g^h = h^-1 g h
  ElementId conjugate(ElementId g, ElementId h) const {
    return mul(mul(inv(h), g), h);
  }
  // [g,h] = g^-1 h^-1 g h
  ElementId commutator(ElementId g, ElementId h) const {
    return mul(inv(mul(h, g)), mul(g, h));
  }

  void check_element(ElementId g) const {
    if (g < 0 || g >= order_) throw Error(Errc::invalid_element, "id out of range");
  }

  const std::string& descriptor() const { return descriptor_; }
  const std::map<std::string, ElementId>& generators() const { return generators_; }
  ElementId generator(const std::string& name) const;

  // Exposed as flat row-major data for table-level comparisons.
  const std::vector<ElementId>& table() const { return table_; }

  bool is_p_group(int& p_out) const;
  int exponent_of_order(int p) const;  // largest e with p^e dividing |G|

 private:
  int order_ = 0;
  std::vector<ElementId> table_;
  std::vector<ElementId> inverse_;
  std::vector<int> element_order_;
  std::map<std::string, ElementId> generators_;
  std::string descriptor_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) {
  return std::make_shared<const FiniteGroup>(std::move(g));
}

// Standard families. Parameters follow the order of the group, not the
// index of its presentation (dihedral:8 is the 8-element dihedral group).
FiniteGroup build_cyclic(int n);
FiniteGroup build_dihedral(int order);      // even order >= 4
FiniteGroup build_quaternion(int order);    // order >= 8, divisible by 4
FiniteGroup build_semidihedral(int order);  // order = 2^n, n >= 4

// A user-supplied square table; validated exactly like the builders.
FiniteGroup from_cayley_table(const std::vector<std::vector<ElementId>>& table,
                              std::string descriptor = "table");

// Parses cyclic:<n> | dihedral:<o> | quaternion:<o> | semidihedral:<o>.
// family:... descriptors are handled one level up (family.hpp).
FiniteGroup build_from_basic_descriptor(const std::string& descriptor);

std::vector<std::vector<ElementId>> conjugacy_classes(const FiniteGroup& g);
std::vector<int> conjugacy_class_size_by_element(const FiniteGroup& g);

// Greedy minimal generating sequence: repeatedly adjoin the smallest
// element outside the closure. Deterministic.
std::vector<ElementId> minimal_generating_sequence(const FiniteGroup& g);

struct IsoWitness {
  std::vector<std::pair<ElementId, ElementId>> generator_images;
  std::vector<ElementId> element_map;  // g-id -> h-id, bijective homomorphism
};

// Backtracking over generator images with order-profile and
// conjugacy-class-size pruning. |G| = |H| <= 512 (Errc::too_large).
std::optional<IsoWitness> find_isomorphism(const FiniteGroup& g, const FiniteGroup& h);

// Extends generator images to a full homomorphism if one exists.
std::optional<std::vector<ElementId>> hom_from_generator_images(
    const FiniteGroup& g, const FiniteGroup& h,
    const std::vector<std::pair<ElementId, ElementId>>& images);

std::optional<std::vector<ElementId>> automorphism_from_images(
    const FiniteGroup& g, const std::vector<std::pair<ElementId, ElementId>>& images);

// All automorphisms as permutation arrays; |G| <= 64 (Errc::too_large).
std::vector<std::vector<ElementId>> automorphisms(const FiniteGroup& g);
long long aut_order(const FiniteGroup& g);

}  // namespace skewprod
