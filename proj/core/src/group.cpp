#include "skewprod/group.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace skewprod {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_element: return "invalid-element";
    case Errc::invalid_subgroup: return "invalid-subgroup";
    case Errc::not_a_group: return "not-a-group";
    case Errc::too_large: return "too-large";
    case Errc::identity_not_fixed: return "identity-not-fixed";
    case Errc::axiom_violated: return "axiom-violated";
    case Errc::pi_not_consistent: return "pi-not-consistent-mod-order";
    case Errc::not_complementary: return "not-complementary";
    case Errc::construction_inconsistent: return "construction-inconsistent";
    case Errc::extension_invalid: return "extension-invalid";
    case Errc::core_not_trivial: return "core-not-trivial";
    case Errc::tau_not_automorphism: return "tau-not-automorphism";
    case Errc::hypotheses_not_met: return "hypotheses-not-met";
    case Errc::core_shape_unexpected: return "core-shape-unexpected";
    case Errc::budget_exceeded: return "budget-exceeded";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

namespace {

// Light's associativity test: with S generating the magma, checking
// (xy)g = x(yg) for all x, y and g in S implies full associativity.
void check_associativity(const std::vector<ElementId>& t, int n,
                         const std::vector<ElementId>& gens) {
  for (ElementId g : gens) {
    for (int x = 0; x < n; ++x) {
      const ElementId* row_x = &t[x * n];
      for (int y = 0; y < n; ++y) {
        if (t[row_x[y] * n + g] != row_x[t[y * n + g]])
          throw Error(Errc::not_a_group, "associativity fails at (" +
                                             std::to_string(x) + "," + std::to_string(y) +
                                             "," + std::to_string(g) + ")");
      }
    }
  }
}

std::vector<ElementId> greedy_generators(const std::vector<ElementId>& t, int n) {
  std::vector<ElementId> gens;
  std::vector<char> in_closure(n, 0);
  in_closure[0] = 1;
  int closed = 1;
  while (closed < n) {
    ElementId next = -1;
    for (int g = 0; g < n; ++g)
      if (!in_closure[g]) { next = g; break; }
    gens.push_back(next);
    // re-close from scratch; n is small
    std::fill(in_closure.begin(), in_closure.end(), 0);
    in_closure[0] = 1;
    std::vector<ElementId> frontier{0};
    for (size_t i = 0; i < frontier.size(); ++i) {
      for (ElementId g : gens) {
        ElementId v = t[frontier[i] * n + g];
        if (!in_closure[v]) { in_closure[v] = 1; frontier.push_back(v); }
      }
    }
    closed = static_cast<int>(frontier.size());
  }
  return gens;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(std::vector<ElementId> flat_table, int order,
                                    std::string descriptor,
                                    std::map<std::string, ElementId> generators) {
  if (order <= 0) throw Error(Errc::invalid_parameter, "order must be positive");
  if (static_cast<int>(flat_table.size()) != order * order)
    throw Error(Errc::not_a_group, "table is not order x order");

  const int n = order;
  // Latin square + range check.
  std::vector<char> seen(n);
  for (int r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int c = 0; c < n; ++c) {
      ElementId v = flat_table[r * n + c];
      if (v < 0 || v >= n) throw Error(Errc::not_a_group, "entry out of range");
      if (seen[v]) throw Error(Errc::not_a_group, "row " + std::to_string(r) + " repeats");
      seen[v] = 1;
    }
  }
  for (int c = 0; c < n; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int r = 0; r < n; ++r) {
      ElementId v = flat_table[r * n + c];
      if (seen[v]) throw Error(Errc::not_a_group, "column " + std::to_string(c) + " repeats");
      seen[v] = 1;
    }
  }
  // Identity fixed at 0.
  for (int g = 0; g < n; ++g) {
    if (flat_table[g] != g || flat_table[g * n] != g)
      throw Error(Errc::not_a_group, "element 0 is not a two-sided identity");
  }

  check_associativity(flat_table, n, greedy_generators(flat_table, n));

  FiniteGroup grp;
  grp.order_ = n;
  grp.table_ = std::move(flat_table);
  grp.descriptor_ = std::move(descriptor);
  grp.generators_ = std::move(generators);

  grp.inverse_.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (grp.table_[g * n + h] == 0) {
        grp.inverse_[g] = h;
        break;
      }
    }
  }
  grp.element_order_.assign(n, 0);
  for (int g = 0; g < n; ++g) {
    int k = 1;
    ElementId v = g;
    while (v != 0) { v = grp.table_[v * n + g]; ++k; }
    grp.element_order_[g] = (g == 0) ? 1 : k;
  }
  for (const auto& [name, id] : grp.generators_) {
    if (id < 0 || id >= n)
      throw Error(Errc::invalid_element, "generator " + name + " out of range");
  }
  return grp;
}

ElementId FiniteGroup::power(ElementId g, long long e) const {
  check_element(g);
  int o = element_order_[g];
  long long r = e % o;
  if (r < 0) r += o;
  ElementId acc = 0;
  for (long long i = 0; i < r; ++i) acc = mul(acc, g);
  return acc;
}

ElementId FiniteGroup::generator(const std::string& name) const {
  auto it = generators_.find(name);
  if (it == generators_.end())
    throw Error(Errc::invalid_element, "no generator named " + name);
  return it->second;
}

bool FiniteGroup::is_p_group(int& p_out) const {
  if (order_ == 1) { p_out = 0; return true; }
  int n = order_;
  int p = 2;
  while (p * p <= n && n % p != 0) ++p;
  if (n % p != 0) p = n;  // prime order
  while (n % p == 0) n /= p;
  if (n != 1) return false;
  p_out = p;
  return true;
}

int FiniteGroup::exponent_of_order(int p) const {
  int n = order_, e = 0;
  while (n % p == 0) { n /= p; ++e; }
  return e;
}

namespace {

struct PresentedTable {
  int half;       // order of a
  int eps;        // a^b = a^eps
  int bsq;        // b^2 = a^bsq
  std::vector<ElementId> build(int order) const {
    std::vector<ElementId> t(order * order);
    auto id = [&](int i, int j) { return 2 * i + j; };
    for (int i = 0; i < half; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int i2 = 0; i2 < half; ++i2) {
          for (int j2 = 0; j2 < 2; ++j2) {
            int ii, jj;
            if (j == 0) {
              ii = (i + i2) % half;
              jj = j2;
            } else {
              long long shifted = i + static_cast<long long>(i2) * eps;
              ii = static_cast<int>(((shifted % half) + half) % half);
              jj = 1 - j2;
              if (j2 == 1) ii = (ii + bsq) % half;  // b^2 lands in <a>
            }
            t[id(i, j) * order + id(i2, j2)] = id(ii, jj);
          }
        }
      }
    }
    return t;
  }
};

}  // namespace

FiniteGroup build_cyclic(int n) {
  if (n < 1) throw Error(Errc::invalid_parameter, "cyclic order must be >= 1");
  std::vector<ElementId> t(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i * n + j] = (i + j) % n;
  std::map<std::string, ElementId> gens;
  if (n > 1) gens["c"] = 1;
  return FiniteGroup::from_table(std::move(t), n, "cyclic:" + std::to_string(n),
                                 std::move(gens));
}

FiniteGroup build_dihedral(int order) {
  if (order < 4 || order % 2 != 0)
    throw Error(Errc::invalid_parameter, "dihedral order must be even and >= 4");
  PresentedTable p{order / 2, -1, 0};
  return FiniteGroup::from_table(p.build(order), order,
                                 "dihedral:" + std::to_string(order),
                                 {{"a", 2}, {"b", 1}});
}

FiniteGroup build_quaternion(int order) {
  if (order < 8 || order % 4 != 0)
    throw Error(Errc::invalid_parameter, "quaternion order must be >= 8 and divisible by 4");
  PresentedTable p{order / 2, -1, order / 4};
  return FiniteGroup::from_table(p.build(order), order,
                                 "quaternion:" + std::to_string(order),
                                 {{"a", 2}, {"b", 1}});
}

FiniteGroup build_semidihedral(int order) {
  if (order < 16 || (order & (order - 1)) != 0)
    throw Error(Errc::invalid_parameter, "semidihedral order must be 2^n with n >= 4");
  PresentedTable p{order / 2, order / 4 - 1, 0};
  return FiniteGroup::from_table(p.build(order), order,
                                 "semidihedral:" + std::to_string(order),
                                 {{"a", 2}, {"b", 1}});
}

FiniteGroup from_cayley_table(const std::vector<std::vector<ElementId>>& table,
                              std::string descriptor) {
  int n = static_cast<int>(table.size());
  std::vector<ElementId> flat;
  flat.reserve(static_cast<size_t>(n) * n);
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw Error(Errc::not_a_group, "table is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return FiniteGroup::from_table(std::move(flat), n, std::move(descriptor), {});
}

FiniteGroup build_from_basic_descriptor(const std::string& descriptor) {
  auto pos = descriptor.find(':');
  if (pos == std::string::npos)
    throw Error(Errc::parse_error, "descriptor needs kind:<params>: " + descriptor);
  std::string kind = descriptor.substr(0, pos);
  int value = 0;
  try {
    size_t used = 0;
    value = std::stoi(descriptor.substr(pos + 1), &used);
    if (pos + 1 + used != descriptor.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "bad size in descriptor: " + descriptor);
  }
  if (kind == "cyclic") return build_cyclic(value);
  if (kind == "dihedral") return build_dihedral(value);
  if (kind == "quaternion") return build_quaternion(value);
  if (kind == "semidihedral") return build_semidihedral(value);
  throw Error(Errc::parse_error, "unknown group kind: " + kind);
}

std::vector<std::vector<ElementId>> conjugacy_classes(const FiniteGroup& g) {
  int n = g.order();
  std::vector<int> cls(n, -1);
  std::vector<std::vector<ElementId>> out;
  for (int x = 0; x < n; ++x) {
    if (cls[x] >= 0) continue;
    std::vector<ElementId> orbit{x};
    cls[x] = static_cast<int>(out.size());
    for (size_t i = 0; i < orbit.size(); ++i) {
      for (int h = 0; h < n; ++h) {
        ElementId y = g.conjugate(orbit[i], h);
        if (cls[y] < 0) {
          cls[y] = cls[x];
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<int> conjugacy_class_size_by_element(const FiniteGroup& g) {
  std::vector<int> out(g.order(), 0);
  for (const auto& cls : conjugacy_classes(g))
    for (ElementId x : cls) out[x] = static_cast<int>(cls.size());
  return out;
}

std::vector<ElementId> minimal_generating_sequence(const FiniteGroup& g) {
  int n = g.order();
  std::vector<ElementId> gens;
  std::vector<char> closed(n, 0);
  auto close = [&]() {
    std::fill(closed.begin(), closed.end(), 0);
    closed[0] = 1;
    std::vector<ElementId> frontier{0};
    for (size_t i = 0; i < frontier.size(); ++i)
      for (ElementId x : gens) {
        ElementId v = g.mul(frontier[i], x);
        if (!closed[v]) { closed[v] = 1; frontier.push_back(v); }
      }
    return static_cast<int>(frontier.size());
  };
  int sz = close();
  while (sz < n) {
    for (int x = 0; x < n; ++x)
      if (!closed[x]) { gens.push_back(x); break; }
    sz = close();
  }
  return gens;
}

std::optional<std::vector<ElementId>> hom_from_generator_images(
    const FiniteGroup& g, const FiniteGroup& h,
    const std::vector<std::pair<ElementId, ElementId>>& images) {
  int n = g.order();
  std::vector<ElementId> phi(n, -1);
  phi[0] = 0;
  std::vector<ElementId> frontier{0};
  // BFS over words in the generators; reject on any inconsistency.
  for (size_t i = 0; i < frontier.size(); ++i) {
    ElementId x = frontier[i];
    for (const auto& [gen, img] : images) {
      ElementId xg = g.mul(x, gen);
      ElementId target = h.mul(phi[x], img);
      if (phi[xg] == -1) {
        phi[xg] = target;
        frontier.push_back(xg);
      } else if (phi[xg] != target) {
        return std::nullopt;
      }
    }
  }
  if (static_cast<int>(frontier.size()) != n) return std::nullopt;  // gens don't generate
  // Full verification: phi(x*gen) = phi(x)*phi(gen) for all x and gens
  // suffices for phi to be a homomorphism (induction on word length).
  for (int x = 0; x < n; ++x) {
    for (const auto& [gen, img] : images) {
      if (phi[g.mul(x, gen)] != h.mul(phi[x], img)) return std::nullopt;
    }
  }
  return phi;
}

std::optional<std::vector<ElementId>> automorphism_from_images(
    const FiniteGroup& g, const std::vector<std::pair<ElementId, ElementId>>& images) {
  auto phi = hom_from_generator_images(g, g, images);
  if (!phi) return std::nullopt;
  std::vector<char> hit(g.order(), 0);
  for (ElementId v : *phi) {
    if (hit[v]) return std::nullopt;
    hit[v] = 1;
  }
  return phi;
}

namespace {

struct GenSearch {
  const FiniteGroup& g;
  const FiniteGroup& h;
  std::vector<ElementId> gens;                  // generating sequence of g
  std::vector<std::vector<ElementId>> cands;    // candidate images per generator
  bool count_all = false;
  long long found = 0;
  std::optional<IsoWitness> witness;

  void run(size_t depth, std::vector<std::pair<ElementId, ElementId>>& partial) {
    if (depth == gens.size()) {
      auto phi = hom_from_generator_images(g, h, partial);
      if (!phi) return;
      std::vector<char> hit(h.order(), 0);
      for (ElementId v : *phi)
        if (hit[v]) return; else hit[v] = 1;
      ++found;
      if (!witness) witness = IsoWitness{partial, *phi};
      return;
    }
    for (ElementId img : cands[depth]) {
      partial.emplace_back(gens[depth], img);
      run(depth + 1, partial);
      partial.pop_back();
      if (!count_all && witness) return;
    }
  }
};

std::vector<int> order_profile(const FiniteGroup& g) {
  std::vector<int> p(g.order());
  for (int i = 0; i < g.order(); ++i) p[i] = g.order_of(i);
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace

std::optional<IsoWitness> find_isomorphism(const FiniteGroup& g, const FiniteGroup& h) {
  if (g.order() != h.order()) return std::nullopt;
  if (g.order() > 512) throw Error(Errc::too_large, "find_isomorphism capped at order 512");
  if (order_profile(g) != order_profile(h)) return std::nullopt;

  auto gcls = conjugacy_class_size_by_element(g);
  auto hcls = conjugacy_class_size_by_element(h);
  {
    auto a = gcls, b = hcls;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }

  GenSearch s{g, h, minimal_generating_sequence(g), {}, false};
  s.cands.resize(s.gens.size());
  for (size_t i = 0; i < s.gens.size(); ++i) {
    for (int y = 0; y < h.order(); ++y)
      if (h.order_of(y) == g.order_of(s.gens[i]) && hcls[y] == gcls[s.gens[i]])
        s.cands[i].push_back(y);
    if (s.cands[i].empty()) return std::nullopt;
  }
  std::vector<std::pair<ElementId, ElementId>> partial;
  s.run(0, partial);
  return s.witness;
}

std::vector<std::vector<ElementId>> automorphisms(const FiniteGroup& g) {
  if (g.order() > 64) throw Error(Errc::too_large, "automorphisms capped at order 64");
  auto cls = conjugacy_class_size_by_element(g);
  GenSearch s{g, g, minimal_generating_sequence(g), {}, true};
  s.cands.resize(s.gens.size());
  for (size_t i = 0; i < s.gens.size(); ++i)
    for (int y = 0; y < g.order(); ++y)
      if (g.order_of(y) == g.order_of(s.gens[i]) && cls[y] == cls[s.gens[i]])
        s.cands[i].push_back(y);

  std::vector<std::pair<ElementId, ElementId>> partial;
  std::vector<std::vector<ElementId>> result;
  std::function<void(size_t)> rec = [&](size_t depth) {
    if (depth == s.gens.size()) {
      auto phi = automorphism_from_images(g, partial);
      if (phi) result.push_back(std::move(*phi));
      return;
    }
    for (ElementId img : s.cands[depth]) {
      partial.emplace_back(s.gens[depth], img);
      rec(depth + 1);
      partial.pop_back();
    }
  };
  rec(0);
  std::sort(result.begin(), result.end());
  return result;
}

long long aut_order(const FiniteGroup& g) {
  return static_cast<long long>(automorphisms(g).size());
}

}  // namespace skewprod
