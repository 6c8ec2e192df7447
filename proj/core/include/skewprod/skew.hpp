#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewprod/structure.hpp"

namespace skewprod {

// A permutation sigma of a group fixing the identity together with its
// power function pi, satisfying sigma(gh) = sigma(g) sigma^{pi(g)}(h).
// pi values are stored reduced mod sigma_order.
struct SkewMorphism {
  GroupPtr group;
  std::vector<ElementId> sigma;
  std::vector<int> pi;
  int sigma_order = 1;

  bool operator==(const SkewMorphism& o) const {
    return sigma == o.sigma && pi == o.pi && sigma_order == o.sigma_order;
  }
  bool operator<(const SkewMorphism& o) const { return sigma < o.sigma; }
};

// Order of a permutation given as an image array.
int permutation_order(const std::vector<ElementId>& perm);

// Checks the axioms; reduces pi mod o(sigma). Throws identity-not-fixed,
// axiom-violated (naming the pair), or pi-not-consistent-mod-order when
// sigma is a skew morphism but with a different power function.
SkewMorphism validate_skew(const GroupPtr& g, std::vector<ElementId> sigma,
                           std::vector<int> pi);

// For each g computes tau_g = L_{sigma(g)}^{-1} o sigma o L_g; if every
// tau_g is a power of sigma, returns the morphism, else nullopt.
std::optional<SkewMorphism> derive_power_function(const GroupPtr& g,
                                                  const std::vector<ElementId>& sigma);

bool is_automorphism(const SkewMorphism& s);

// X on |G| * o(sigma) elements labeled (g, i) -> i*|G| + g, with
// (a,i)(b,j) = (a sigma^i(b), sum_{k<i} pi(sigma^k(b)) + j). The
// complement generator y = (1,1) is exposed as generator "y".
struct SkewProductGroup {
  GroupPtr x;
  Subgroup g_part;
  Subgroup c_part;
  ElementId y = 0;
  bool complement_corefree = true;
};

SkewProductGroup skew_product(const SkewMorphism& s);

// Inverse direction: X = G<y> with trivial intersection gives back the
// skew morphism on G relabeled densely (sorted member order).
struct ExtractedSkew {
  SkewMorphism morphism;             // over the relabeled G-part
  std::vector<ElementId> g_relabel;  // new id -> parent id
  bool complement_corefree = true;
};

ExtractedSkew extract_skew(const GroupPtr& x, const Subgroup& g_part, ElementId y);

struct EnumerationStats {
  long long nodes = 0;
  long long prunes = 0;
  long long wall_ms = 0;
  bool completed = true;
};

struct EnumerationOptions {
  int order_cap = 0;              // 0: |G| - 1 (cyclic point-stabilizer bound)
  long long node_cap = 1'000'000'000;
  int jobs = 1;
  bool restrict_cyclic_2power = false;  // opt-in order prune for cyclic 2-groups
};

struct EnumerationResult {
  GroupPtr group;
  std::vector<SkewMorphism> morphisms;  // sorted by sigma array
  EnumerationStats stats;
};

// Complete enumeration via backtracking over partial sigma assignments
// with propagation and per-element power-candidate masks. |G| <= 64.
EnumerationResult enumerate_skew_morphisms(const GroupPtr& g,
                                           const EnumerationOptions& opts = {});

}  // namespace skewprod
