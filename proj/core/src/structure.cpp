#include "skewprod/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace skewprod {

bool Subgroup::contains(ElementId g) const {
  return std::binary_search(members.begin(), members.end(), g);
}

Subgroup trivial_subgroup(const GroupPtr& g) { return Subgroup{g, {0}, {}}; }

Subgroup full_subgroup(const GroupPtr& g) {
  std::vector<ElementId> all(g->order());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup{g, std::move(all), g->order() > 1 ? minimal_generating_sequence(*g)
                                                    : std::vector<ElementId>{}};
}

Subgroup subgroup_generated(const GroupPtr& g, std::vector<ElementId> gens) {
  for (ElementId x : gens) g->check_element(x);
  std::vector<char> in(g->order(), 0);
  in[0] = 1;
  std::vector<ElementId> closure{0};
  for (size_t i = 0; i < closure.size(); ++i) {
    for (ElementId x : gens) {
      ElementId v = g->mul(closure[i], x);
      if (!in[v]) { in[v] = 1; closure.push_back(v); }
    }
  }
  std::sort(closure.begin(), closure.end());
  return Subgroup{g, std::move(closure), std::move(gens)};
}

bool is_subgroup_set(const FiniteGroup& g, const std::vector<ElementId>& m) {
  if (m.empty() || m[0] != 0) return false;
  for (ElementId x : m)
    for (ElementId y : m)
      if (!std::binary_search(m.begin(), m.end(), g.mul(x, y))) return false;
  return true;
}

Subgroup subgroup_from_members(const GroupPtr& g, std::vector<ElementId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!is_subgroup_set(*g, members))
    throw Error(Errc::invalid_subgroup, "member set is not closed");
  // generator witness: greedy closure inside the set
  std::vector<ElementId> gens;
  Subgroup cur = trivial_subgroup(g);
  while (cur.members != members) {
    for (ElementId x : members)
      if (!cur.contains(x)) { gens.push_back(x); break; }
    cur = subgroup_generated(g, gens);
  }
  cur.generators = gens;
  return cur;
}

bool is_normal(const Subgroup& h) {
  const auto& g = *h.parent;
  for (ElementId x : h.members)
    for (int t = 0; t < g.order(); ++t)
      if (!h.contains(g.conjugate(x, t))) return false;
  return true;
}

Subgroup core_of(const Subgroup& h) {
  const auto& g = *h.parent;
  if (!is_subgroup_set(g, h.members))
    throw Error(Errc::invalid_subgroup, "core_of needs a subgroup");
  std::vector<char> in(g.order(), 0);
  for (ElementId x : h.members) in[x] = 1;
  std::vector<char> conj(g.order(), 0);
  for (int t = 0; t < g.order(); ++t) {
    std::fill(conj.begin(), conj.end(), 0);
    for (ElementId x : h.members) conj[g.conjugate(x, t)] = 1;
    for (int x = 0; x < g.order(); ++x) in[x] = in[x] && conj[x];
  }
  std::vector<ElementId> members;
  for (int x = 0; x < g.order(); ++x)
    if (in[x]) members.push_back(x);
  return subgroup_from_members(h.parent, std::move(members));
}

Subgroup center(const GroupPtr& g) {
  std::vector<ElementId> z;
  for (int x = 0; x < g->order(); ++x) {
    bool central = true;
    for (int y = 0; y < g->order() && central; ++y)
      if (g->mul(x, y) != g->mul(y, x)) central = false;
    if (central) z.push_back(x);
  }
  return subgroup_from_members(g, std::move(z));
}

Subgroup derived_subgroup(const GroupPtr& g) {
  std::set<ElementId> comms;
  for (int x = 0; x < g->order(); ++x)
    for (int y = 0; y < g->order(); ++y) comms.insert(g->commutator(x, y));
  return subgroup_generated(g, {comms.begin(), comms.end()});
}

Subgroup omega1(const GroupPtr& g) {
  int p = 0;
  if (!g->is_p_group(p)) throw Error(Errc::invalid_parameter, "omega1 needs a p-group");
  if (g->order() == 1) return trivial_subgroup(g);
  std::vector<ElementId> gens;
  for (int x = 1; x < g->order(); ++x)
    if (g->order_of(x) == p) gens.push_back(x);
  return subgroup_generated(g, std::move(gens));
}

Subgroup mho(const GroupPtr& g, int k) {
  int p = 0;
  if (!g->is_p_group(p)) throw Error(Errc::invalid_parameter, "mho needs a p-group");
  if (g->order() == 1) return trivial_subgroup(g);
  long long q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  std::set<ElementId> gens;
  for (int x = 0; x < g->order(); ++x) gens.insert(g->power(x, q));
  return subgroup_generated(g, {gens.begin(), gens.end()});
}

Subgroup centralizer(const GroupPtr& g, const Subgroup& h) {
  std::vector<ElementId> c;
  for (int x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (ElementId y : h.members)
      if (g->mul(x, y) != g->mul(y, x)) { ok = false; break; }
    if (ok) c.push_back(x);
  }
  return subgroup_from_members(g, std::move(c));
}

Subgroup normalizer(const GroupPtr& g, const Subgroup& h) {
  std::vector<ElementId> n;
  for (int x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (ElementId y : h.members)
      if (!h.contains(g->conjugate(y, x))) { ok = false; break; }
    if (ok) n.push_back(x);
  }
  return subgroup_from_members(g, std::move(n));
}

long long nc_quotient_order(const GroupPtr& g, const Subgroup& h) {
  return static_cast<long long>(normalizer(g, h).order()) / centralizer(g, h).order();
}

Subgroup sylow_p(const GroupPtr& g, int p) {
  if (p < 2) throw Error(Errc::invalid_parameter, "p must be prime");
  Subgroup pgrp = trivial_subgroup(g);
  int target = 1;
  {
    int n = g->order();
    while (n % p == 0) { n /= p; target *= p; }
  }
  // Grow inside the normalizer: any p-element of N(P) \ P extends P to a
  // larger p-subgroup, and a proper p-subgroup always has one.
  while (pgrp.order() < target) {
    Subgroup nor = normalizer(g, pgrp);
    ElementId pick = -1;
    for (ElementId x : nor.members) {
      if (pgrp.contains(x)) continue;
      int o = g->order_of(x);
      while (o % p == 0) o /= p;
      if (o == 1) { pick = x; break; }
    }
    if (pick < 0)
      throw Error(Errc::construction_inconsistent, "sylow growth stalled");
    auto gens = pgrp.generators;
    gens.push_back(pick);
    pgrp = subgroup_generated(g, std::move(gens));
  }
  return pgrp;
}

Subgroup o_p(const GroupPtr& g, int p) {
  // Core of one Sylow p-subgroup; equals the intersection of all of them
  // by Sylow conjugacy.
  return core_of(sylow_p(g, p));
}

Subgroup fitting(const GroupPtr& g) {
  std::vector<ElementId> gens;
  int n = g->order();
  for (int p = 2; p <= n; ++p) {
    if (n % p != 0) continue;
    bool prime = true;
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) { prime = false; break; }
    if (!prime) continue;
    Subgroup op = o_p(g, p);
    gens.insert(gens.end(), op.members.begin(), op.members.end());
  }
  return subgroup_generated(g, std::move(gens));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  std::vector<ElementId> m;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                        b.members.end(), std::back_inserter(m));
  return subgroup_from_members(a.parent, std::move(m));
}

Subgroup product_subgroup(const Subgroup& a, const Subgroup& b) {
  const auto& g = *a.parent;
  std::set<ElementId> prod;
  for (ElementId x : a.members)
    for (ElementId y : b.members) prod.insert(g.mul(x, y));
  std::vector<ElementId> m(prod.begin(), prod.end());
  return subgroup_from_members(a.parent, std::move(m));
}

bool product_covers(const Subgroup& a, const Subgroup& b) {
  const auto& g = *a.parent;
  std::vector<char> hit(g.order(), 0);
  int count = 0;
  for (ElementId x : a.members)
    for (ElementId y : b.members) {
      ElementId v = g.mul(x, y);
      if (!hit[v]) { hit[v] = 1; ++count; }
    }
  return count == g.order();
}

namespace {

Subgroup commutator_subgroup(const GroupPtr& gp, const Subgroup& a, const Subgroup& b) {
  std::set<ElementId> gens;
  for (ElementId x : a.members)
    for (ElementId y : b.members) gens.insert(gp->commutator(x, y));
  return subgroup_generated(gp, {gens.begin(), gens.end()});
}

}  // namespace

std::optional<int> nilpotency_class(const FiniteGroup& g) {
  GroupPtr gp = make_group(g);  // local copy; series computation only
  Subgroup gamma = full_subgroup(gp);
  Subgroup whole = gamma;
  int cls = 0;
  while (gamma.order() > 1) {
    Subgroup next = commutator_subgroup(gp, gamma, whole);
    if (next.members == gamma.members) return std::nullopt;  // stabilized, not nilpotent
    gamma = next;
    ++cls;
  }
  return cls;
}

bool is_maximal_class_2group(const FiniteGroup& g) {
  int p = 0;
  if (!g.is_p_group(p) || p != 2 || g.order() < 8) return false;
  int n = 0, o = g.order();
  while (o > 1) { o /= 2; ++n; }
  auto cls = nilpotency_class(g);
  return cls && *cls == n - 1;
}

Subgroup frattini(const GroupPtr& g) {
  int p = 0;
  if (g->is_p_group(p)) {
    if (g->order() == 1) return trivial_subgroup(g);
    // Phi(G) = G' * mho_1(G) for p-groups
    Subgroup d = derived_subgroup(g);
    Subgroup m = mho(g, 1);
    std::vector<ElementId> gens = d.members;
    gens.insert(gens.end(), m.members.begin(), m.members.end());
    return subgroup_generated(g, std::move(gens));
  }
  if (g->order() > 128)
    throw Error(Errc::too_large, "frattini beyond p-groups capped at order 128");
  auto subs = all_subgroups(g);
  std::vector<const Subgroup*> maximal;
  for (const auto& h : subs) {
    if (h.order() == g->order()) continue;
    bool is_max = true;
    for (const auto& k : subs) {
      if (k.order() == g->order() || k.order() <= h.order()) continue;
      if (std::includes(k.members.begin(), k.members.end(), h.members.begin(),
                        h.members.end())) { is_max = false; break; }
    }
    if (is_max) maximal.push_back(&h);
  }
  std::vector<ElementId> inter(g->order());
  std::iota(inter.begin(), inter.end(), 0);
  for (const auto* h : maximal) {
    std::vector<ElementId> next;
    std::set_intersection(inter.begin(), inter.end(), h->members.begin(),
                          h->members.end(), std::back_inserter(next));
    inter = std::move(next);
  }
  return subgroup_from_members(g, std::move(inter));
}

FiniteGroup subgroup_as_group(const Subgroup& h, std::vector<ElementId>* relabel_out) {
  const auto& g = *h.parent;
  int n = h.order();
  std::map<ElementId, int> idx;
  for (int i = 0; i < n; ++i) idx[h.members[i]] = i;
  std::vector<ElementId> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table[i * n + j] = idx.at(g.mul(h.members[i], h.members[j]));
  if (relabel_out) *relabel_out = h.members;
  std::map<std::string, ElementId> gens;
  int gi = 0;
  for (ElementId x : h.generators) gens["g" + std::to_string(gi++)] = idx.at(x);
  return FiniteGroup::from_table(std::move(table), n,
                                 "sub[" + std::to_string(n) + "]:" + g.descriptor(),
                                 std::move(gens));
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  if (g->order() > 128)
    throw Error(Errc::too_large, "subgroup enumeration capped at order 128");
  std::set<std::vector<ElementId>> seen;
  std::vector<Subgroup> out;
  std::vector<Subgroup> frontier{trivial_subgroup(g)};
  seen.insert(frontier[0].members);
  out.push_back(frontier[0]);
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier) {
      for (int x = 1; x < g->order(); ++x) {
        if (h.contains(x)) continue;
        auto gens = h.generators;
        gens.push_back(x);
        Subgroup bigger = subgroup_generated(g, std::move(gens));
        if (seen.insert(bigger.members).second) {
          out.push_back(bigger);
          next.push_back(std::move(bigger));
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members < b.members;
  });
  return out;
}

std::vector<Subgroup> all_normal_subgroups(const GroupPtr& g) {
  std::vector<Subgroup> out;
  for (auto& h : all_subgroups(g))
    if (is_normal(h)) out.push_back(std::move(h));
  return out;
}

StructureReport structure_report(const GroupPtr& g) {
  StructureReport r;
  r.descriptor = g->descriptor();
  r.center = center(g);
  r.derived = derived_subgroup(g);
  r.frattini = frattini(g);
  r.fitting = fitting(g);
  r.o2 = o_p(g, 2);
  r.nilpotency = nilpotency_class(*g);
  r.maximal_class = is_maximal_class_2group(*g);
  return r;
}

}  // namespace skewprod
