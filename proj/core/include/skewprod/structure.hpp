#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skewprod/group.hpp"

namespace skewprod {

// An element-id set closed under the parent's operation, with generator
// witnesses. Members are kept sorted; equality is set equality.
struct Subgroup {
  GroupPtr parent;
  std::vector<ElementId> members;     // sorted
  std::vector<ElementId> generators;  // witness, possibly empty for {1}

  int order() const { return static_cast<int>(members.size()); }
  bool contains(ElementId g) const;
  bool operator==(const Subgroup& o) const { return members == o.members; }
};

Subgroup trivial_subgroup(const GroupPtr& g);
Subgroup full_subgroup(const GroupPtr& g);
Subgroup subgroup_generated(const GroupPtr& g, std::vector<ElementId> gens);
Subgroup subgroup_from_members(const GroupPtr& g, std::vector<ElementId> members);

bool is_subgroup_set(const FiniteGroup& g, const std::vector<ElementId>& sorted_members);
bool is_normal(const Subgroup& h);

// Largest normal subgroup of the parent inside h: intersection of the
// conjugates of h.
Subgroup core_of(const Subgroup& h);

Subgroup center(const GroupPtr& g);
Subgroup derived_subgroup(const GroupPtr& g);
Subgroup frattini(const GroupPtr& g);   // p-group formula, else lattice walk (<=128)
Subgroup omega1(const GroupPtr& g);     // p-groups only
Subgroup mho(const GroupPtr& g, int k); // p-groups only

Subgroup sylow_p(const GroupPtr& g, int p);
Subgroup o_p(const GroupPtr& g, int p);  // core of a Sylow p-subgroup
Subgroup fitting(const GroupPtr& g);

Subgroup centralizer(const GroupPtr& g, const Subgroup& h);
Subgroup normalizer(const GroupPtr& g, const Subgroup& h);
long long nc_quotient_order(const GroupPtr& g, const Subgroup& h);

Subgroup intersect(const Subgroup& a, const Subgroup& b);
// The setwise product A*B; error if it is not a subgroup.
Subgroup product_subgroup(const Subgroup& a, const Subgroup& b);
bool product_covers(const Subgroup& a, const Subgroup& b);  // |AB| == |G|

// Lower central series length; nullopt when not nilpotent.
std::optional<int> nilpotency_class(const FiniteGroup& g);
bool is_maximal_class_2group(const FiniteGroup& g);  // |G| = 2^n >= 8, class n-1

// Realize a subgroup as a standalone group by dense relabeling of its
// sorted member list. relabel_out[i] = parent id of new element i.
FiniteGroup subgroup_as_group(const Subgroup& h, std::vector<ElementId>* relabel_out = nullptr);

// Full subgroup/normal-subgroup enumeration, capped at |G| <= 128.
std::vector<Subgroup> all_subgroups(const GroupPtr& g);
std::vector<Subgroup> all_normal_subgroups(const GroupPtr& g);

struct StructureReport {
  std::string descriptor;
  Subgroup center, derived, frattini, fitting, o2;
  std::optional<int> nilpotency;
  bool maximal_class = false;
};

StructureReport structure_report(const GroupPtr& g);

}  // namespace skewprod
