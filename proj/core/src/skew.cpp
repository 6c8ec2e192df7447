#include "skewprod/skew.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <map>
#include <numeric>
#include <thread>

namespace skewprod {

int permutation_order(const std::vector<ElementId>& perm) {
  int n = static_cast<int>(perm.size());
  std::vector<char> seen(n, 0);
  long long l = 1;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    int len = 0, v = s;
    while (!seen[v]) { seen[v] = 1; v = perm[v]; ++len; }
    l = std::lcm(l, static_cast<long long>(len));
  }
  return static_cast<int>(l);
}

namespace {

bool is_permutation(const std::vector<ElementId>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> hit(n, 0);
  for (ElementId v : p) {
    if (v < 0 || v >= n || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

// sigma^j for j in [0, k) as image arrays.
std::vector<std::vector<ElementId>> permutation_powers(const std::vector<ElementId>& sigma,
                                                       int k) {
  int n = static_cast<int>(sigma.size());
  std::vector<std::vector<ElementId>> pow(k);
  pow[0].resize(n);
  std::iota(pow[0].begin(), pow[0].end(), 0);
  for (int j = 1; j < k; ++j) {
    pow[j].resize(n);
    for (int x = 0; x < n; ++x) pow[j][x] = sigma[pow[j - 1][x]];
  }
  return pow;
}

}  // namespace

SkewMorphism validate_skew(const GroupPtr& g, std::vector<ElementId> sigma,
                           std::vector<int> pi) {
  const int n = g->order();
  if (!is_permutation(sigma, n))
    throw Error(Errc::invalid_parameter, "sigma is not a permutation of G");
  if (sigma[0] != 0) throw Error(Errc::identity_not_fixed, "sigma(1) != 1");
  if (static_cast<int>(pi.size()) != n)
    throw Error(Errc::invalid_parameter, "pi must be total on G");

  const int k = permutation_order(sigma);
  for (int& v : pi) v = ((v % k) + k) % k;

  auto pow = permutation_powers(sigma, k);
  std::map<std::vector<ElementId>, int> pow_index;
  for (int j = 0; j < k; ++j) pow_index[pow[j]] = j;

  bool pi_mismatch = false;
  int mismatch_at = -1;
  for (int x = 0; x < n; ++x) {
    std::vector<ElementId> tau(n);
    ElementId sx_inv = g->inv(sigma[x]);
    for (int h = 0; h < n; ++h) tau[h] = g->mul(sx_inv, sigma[g->mul(x, h)]);
    auto it = pow_index.find(tau);
    if (it == pow_index.end()) {
      // not a skew morphism at all; name a violated pair under the given pi
      for (int h = 0; h < n; ++h) {
        if (sigma[g->mul(x, h)] != g->mul(sigma[x], pow[pi[x]][h]))
          throw Error(Errc::axiom_violated,
                      "sigma(gh) != sigma(g) sigma^pi(g)(h) at g=" + std::to_string(x) +
                          " h=" + std::to_string(h));
      }
      throw Error(Errc::axiom_violated, "tau_g not a power of sigma at g=" + std::to_string(x));
    }
    if (it->second != pi[x] && !pi_mismatch) {
      pi_mismatch = true;
      mismatch_at = x;
    }
  }
  if (pi_mismatch)
    throw Error(Errc::pi_not_consistent,
                "pi(g) differs from the derived exponent at g=" + std::to_string(mismatch_at));

  return SkewMorphism{g, std::move(sigma), std::move(pi), k};
}

std::optional<SkewMorphism> derive_power_function(const GroupPtr& g,
                                                  const std::vector<ElementId>& sigma) {
  const int n = g->order();
  if (!is_permutation(sigma, n) || sigma[0] != 0) return std::nullopt;
  const int k = permutation_order(sigma);
  auto pow = permutation_powers(sigma, k);
  std::map<std::vector<ElementId>, int> pow_index;
  for (int j = 0; j < k; ++j) pow_index[pow[j]] = j;

  std::vector<int> pi(n);
  std::vector<ElementId> tau(n);
  for (int x = 0; x < n; ++x) {
    ElementId sx_inv = g->inv(sigma[x]);
    for (int h = 0; h < n; ++h) tau[h] = g->mul(sx_inv, sigma[g->mul(x, h)]);
    auto it = pow_index.find(tau);
    if (it == pow_index.end()) return std::nullopt;
    pi[x] = it->second;
  }
  return SkewMorphism{g, sigma, std::move(pi), k};
}

bool is_automorphism(const SkewMorphism& s) {
  for (int v : s.pi)
    if (((v - 1) % s.sigma_order + s.sigma_order) % s.sigma_order != 0) return false;
  return true;
}

SkewProductGroup skew_product(const SkewMorphism& s) {
  const auto& g = *s.group;
  const int n = g.order();
  const int k = s.sigma_order;
  const int nx = n * k;

  auto pow = permutation_powers(s.sigma, k);
  // psum[i][b] = sum_{l<i} pi(sigma^l(b)) mod k
  std::vector<std::vector<int>> psum(k + 1, std::vector<int>(n, 0));
  for (int i = 0; i < k; ++i)
    for (int b = 0; b < n; ++b) psum[i + 1][b] = (psum[i][b] + s.pi[pow[i][b]]) % k;

  std::vector<ElementId> table(static_cast<size_t>(nx) * nx);
  for (int i = 0; i < k; ++i) {
    for (ElementId a = 0; a < n; ++a) {
      ElementId* row = &table[static_cast<size_t>(i * n + a) * nx];
      for (int j = 0; j < k; ++j) {
        for (ElementId b = 0; b < n; ++b) {
          ElementId gpart = g.mul(a, pow[i][b]);
          int e = (psum[i][b] + j) % k;
          row[j * n + b] = e * n + gpart;
        }
      }
    }
  }

  std::map<std::string, ElementId> gens = g.generators();
  if (k > 1) gens["y"] = n;
  FiniteGroup x;
  try {
    x = FiniteGroup::from_table(std::move(table), nx,
                                "X(" + g.descriptor() + ",o=" + std::to_string(k) + ")",
                                std::move(gens));
  } catch (const Error& e) {
    throw Error(Errc::construction_inconsistent,
                std::string("skew product is not a group: ") + e.what());
  }

  SkewProductGroup sp;
  sp.x = make_group(std::move(x));
  {
    std::vector<ElementId> gm(n);
    std::iota(gm.begin(), gm.end(), 0);
    std::vector<ElementId> ggens;
    for (const auto& [name, id] : g.generators()) ggens.push_back(id);
    sp.g_part = Subgroup{sp.x, std::move(gm), std::move(ggens)};
  }
  {
    std::vector<ElementId> cm(k);
    for (int i = 0; i < k; ++i) cm[i] = i * n;
    std::sort(cm.begin(), cm.end());
    sp.c_part = Subgroup{sp.x, std::move(cm),
                         k > 1 ? std::vector<ElementId>{n} : std::vector<ElementId>{}};
  }
  sp.y = (k > 1) ? n : 0;
  sp.complement_corefree = core_of(sp.c_part).order() == 1;
  return sp;
}

ExtractedSkew extract_skew(const GroupPtr& x, const Subgroup& g_part, ElementId y) {
  x->check_element(y);
  const int nx = x->order();
  const int ng = g_part.order();
  const int oy = x->order_of(y);
  if (static_cast<long long>(ng) * oy != nx)
    throw Error(Errc::not_complementary, "|G| * o(y) != |X|");
  // <y> meets G trivially
  {
    ElementId v = y;
    for (int i = 1; i < oy; ++i, v = x->mul(v, y))
      if (g_part.contains(v))
        throw Error(Errc::not_complementary, "<y> intersects G nontrivially");
  }

  // decompose every element as g y^i (unique given the trivial intersection)
  std::vector<std::pair<int, int>> decomp(nx, {-1, -1});
  {
    std::vector<ElementId> ypow(oy);
    ypow[0] = 0;
    for (int i = 1; i < oy; ++i) ypow[i] = x->mul(ypow[i - 1], y);
    for (int gi = 0; gi < ng; ++gi) {
      for (int i = 0; i < oy; ++i) {
        ElementId e = x->mul(g_part.members[gi], ypow[i]);
        if (decomp[e].first != -1)
          throw Error(Errc::not_complementary, "factorization is not unique");
        decomp[e] = {gi, i};
      }
    }
  }

  std::vector<int> to_local(nx, -1);
  for (int gi = 0; gi < ng; ++gi) to_local[g_part.members[gi]] = gi;

  std::vector<ElementId> sigma(ng);
  std::vector<int> pi(ng);
  for (int gi = 0; gi < ng; ++gi) {
    auto [gp, i] = decomp[x->mul(y, g_part.members[gi])];
    sigma[gi] = gp;
    pi[gi] = i;
  }

  std::vector<ElementId> relabel;
  GroupPtr sub = make_group(subgroup_as_group(g_part, &relabel));

  ExtractedSkew out;
  out.g_relabel = std::move(relabel);
  out.complement_corefree =
      core_of(Subgroup{x, [&] {
                std::vector<ElementId> m(oy);
                ElementId v = 0;
                for (int i = 0; i < oy; ++i, v = x->mul(v, y)) m[i] = v;
                std::sort(m.begin(), m.end());
                return m;
              }(),
                       {y}})
          .order() == 1;
  out.morphism = validate_skew(sub, std::move(sigma), std::move(pi));
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration: for each candidate order k, backtrack over partial sigma
// assignments. Per element g we keep a bitmask of still-possible power
// exponents pi(g); every known product sigma(gh) filters the mask through
// the partially known sigma-chain of h, and a pinned exponent forces new
// sigma values. Exact order k at the leaf keeps the k-runs disjoint.
// ---------------------------------------------------------------------------

namespace {

struct SearchState {
  std::vector<int> sigma;       // -1 unset
  uint64_t used = 0;
  std::vector<uint64_t> mask;   // candidate exponents, bits [0,k)
  std::vector<uint64_t> dom;    // candidate images, bits over element ids
};

class SkewSearch {
 public:
  SkewSearch(const FiniteGroup& g, int k, std::atomic<long long>& nodes,
             long long node_cap, std::vector<SkewMorphism>* sink, const GroupPtr& gp,
             const std::vector<uint64_t>& subgroup_masks)
      : g_(g), gp_(gp), n_(g.order()), k_(k), nodes_(nodes), node_cap_(node_cap),
        sink_(sink), subgroups_(subgroup_masks) {
    step_.resize(static_cast<size_t>(n_) * k_);
    cyclen_.resize(n_);
    pred_.resize(n_);
    for (int d = 1; d < k_; ++d)
      if (k_ % d == 0) divisors_.push_back(d);
    // outside_ok_[i]: for divisors_[i] = d, the bitset of sizes expressible
    // as sums of cycle lengths L | k with L not dividing d
    outside_ok_.resize(divisors_.size());
    for (size_t i = 0; i < divisors_.size(); ++i) {
      int d = divisors_[i];
      uint64_t reach = 1;  // size 0
      int cap_bits = std::min(n_, 63);
      for (int len = 2; len <= k_ && len <= n_; ++len) {
        if (k_ % len != 0 || d % len == 0) continue;
        for (int s = 0; s + len <= cap_bits; ++s)
          if (reach >> s & 1) reach |= 1ULL << (s + len);
      }
      outside_ok_[i] = reach;
    }
  }

  long long prunes = 0;
  bool capped = false;

  SearchState initial_state() const {
    SearchState st;
    st.sigma.assign(n_, -1);
    st.sigma[0] = 0;
    st.used = 1;
    uint64_t full = (k_ >= 64) ? ~0ULL : ((1ULL << k_) - 1);
    st.mask.assign(n_, full);
    st.mask[0] = 1ULL << (1 % k_);
    uint64_t all = (n_ >= 64) ? ~0ULL : ((1ULL << n_) - 1);
    st.dom.assign(n_, all & ~1ULL);  // only the identity maps to 0
    st.dom[0] = 1;
    return st;
  }

  void dfs(SearchState st) {
    if (capped) return;
    if (nodes_.fetch_add(1, std::memory_order_relaxed) >= node_cap_) {
      capped = true;
      return;
    }
    if (!propagate(st)) {
      ++prunes;
      return;
    }
    // Branch along the open sigma-path through the smallest element whose
    // cycle is not closed yet: pin the power exponents of the elements
    // already on the path (they drive the forced products), then extend
    // the path by one sigma value. Contiguous cycles keep the exponent
    // masks exact, which is where the pruning power is.
    int u = -1;
    for (int h = 1; h < n_; ++h)
      if (cyclen_[h] == 0) { u = h; break; }
    if (u < 0) {
      finalize(st);
      return;
    }
    int root = u;
    while (pred_[root] >= 0) root = pred_[root];
    int end = u, len = 1;
    while (st.sigma[end] >= 0) { end = st.sigma[end]; }
    for (int w = root; w != end; w = st.sigma[w]) ++len;


    // closing the cycle now gives length len; it must divide k
    if (k_ % len == 0 && !(st.used & (1ULL << root)) &&
        (st.dom[end] >> root & 1)) {
      SearchState child = st;
      assign(child, end, root);
      dfs(std::move(child));
      if (capped) return;
    }
    if (len + 1 <= k_) {  // cycle lengths never exceed k
      for (int cand = 1; cand < n_; ++cand) {
        if (cand == root || (st.used & (1ULL << cand))) continue;
        if (!(st.dom[end] >> cand & 1)) continue;
        SearchState child = st;
        assign(child, end, cand);
        dfs(std::move(child));
        if (capped) return;
      }
    }
  }

 private:
  // step_[h*k + j] = sigma^j(h) under the partial assignment, -1 unknown.
  // cyclen_[h] > 0 when h's cycle is closed. pred_ is the partial inverse.
  // Returns false on a closed cycle whose length does not divide k, or an
  // open path already longer than k.
  bool build_chains(const SearchState& st) {
    std::fill(pred_.begin(), pred_.end(), -1);
    for (int x = 0; x < n_; ++x)
      if (st.sigma[x] >= 0) pred_[st.sigma[x]] = x;
    for (int h = 0; h < n_; ++h) {
      int* row = &step_[static_cast<size_t>(h) * k_];
      row[0] = h;
      cyclen_[h] = 0;
      int v = h;
      for (int j = 1; j < k_; ++j) {
        v = (v >= 0) ? st.sigma[v] : -1;
        if (v == h && cyclen_[h] == 0) cyclen_[h] = j;
        row[j] = v;
      }
      if (cyclen_[h] == 0 && v >= 0 && st.sigma[v] == h) cyclen_[h] = k_;
      if (cyclen_[h] > 0 && k_ % cyclen_[h] != 0) return false;
      if (cyclen_[h] == 0 && row[k_ - 1] >= 0 && st.sigma[row[k_ - 1]] >= 0)
        return false;  // open path of length > k
    }
    return true;
  }

  // Sum of pinned pi values along h, sigma(h), ..., sigma^{j-1}(h);
  // -1 when some mask on the way is not a singleton.
  int pinned_pi_sum(const SearchState& st, int h, int j) const {
    const int* row = &step_[static_cast<size_t>(h) * k_];
    int s = 0;
    for (int l = 0; l < j; ++l) {
      int v = row[l];
      if (v < 0 || std::popcount(st.mask[v]) != 1) return -1;
      s += std::countr_zero(st.mask[v]);
    }
    return s % k_;
  }

  static void assign(SearchState& st, int x, ElementId v) {
    st.sigma[x] = v;
    st.used |= 1ULL << v;
    st.dom[x] = 1ULL << v;
  }

  bool propagate(SearchState& st) {
    bool changed = true;
    while (changed) {
      changed = false;
      if (!build_chains(st)) return false;
      for (int gid = 0; gid < n_; ++gid) {
        if (st.sigma[gid] < 0) continue;
        ElementId sg = st.sigma[gid];
        ElementId sg_inv = g_.inv(sg);
        bool pinned = std::popcount(st.mask[gid]) == 1;
        int j_pin = pinned ? std::countr_zero(st.mask[gid]) : -1;
        for (int h = 0; h < n_; ++h) {
          ElementId gh = g_.mul(gid, h);
          const int* row = &step_[static_cast<size_t>(h) * k_];
          if (st.sigma[gh] >= 0) {
            ElementId t = g_.mul(sg_inv, st.sigma[gh]);
            uint64_t allowed = 0;
            for (int j = 0; j < k_; ++j)
              if (row[j] < 0 || row[j] == t) allowed |= 1ULL << j;
            uint64_t nm = st.mask[gid] & allowed;
            if (!nm) return false;
            if (nm != st.mask[gid]) {
              st.mask[gid] = nm;
              changed = true;
              pinned = std::popcount(nm) == 1;
              j_pin = pinned ? std::countr_zero(nm) : -1;
            }
            // bridge: sigma^{j}(h) = t with the chain known up to j-1
            if (pinned && j_pin > 0 && row[j_pin] < 0 && row[j_pin - 1] >= 0) {
              ElementId w = row[j_pin - 1];
              if (st.sigma[w] < 0) {  // rows can be stale within a pass
                if (st.used & (1ULL << t)) return false;
                assign(st, w, t);
                changed = true;
              } else if (st.sigma[w] != t) {
                return false;
              }
            }
          } else {
            // sigma(g h) = sigma(g) sigma^j(h) for the true exponent j, so
            // the image domain of g h shrinks to sigma(g) * {chain hits}
            uint64_t allowed = 0;
            bool complete = true;
            for (uint64_t m = st.mask[gid]; m; m &= m - 1) {
              int img = row[std::countr_zero(m)];
              if (img < 0) { complete = false; break; }
              allowed |= 1ULL << g_.mul(sg, img);
            }
            if (complete) {
              uint64_t nd = st.dom[gh] & allowed;
              if (!nd) return false;
              if (nd != st.dom[gh]) { st.dom[gh] = nd; changed = true; }
            }
          }
          // power-function product rule, pinned case:
          // pi(gh) = sum_{l < pi(g)} pi(sigma^l(h))
          if (pinned && std::popcount(st.mask[gh]) != 1) {
            int s = pinned_pi_sum(st, h, j_pin);
            if (s >= 0) {
              uint64_t nm = st.mask[gh] & (1ULL << s);
              if (!nm) return false;
              if (nm != st.mask[gh]) { st.mask[gh] = nm; changed = true; }
            }
          }
        }
      }
      // Fix(sigma^d) is a subgroup for every d | k. Elements on closed
      // cycles of length dividing d must generate a subgroup disjoint
      // from everything committed to other lengths, and the outside must
      // be fillable by the remaining allowed cycle lengths.
      for (size_t di = 0; di < divisors_.size(); ++di) {
        int d = divisors_[di];
        uint64_t in_d = 1, out_d = 0;
        for (int h = 0; h < n_; ++h) {
          if (cyclen_[h] > 0) {
            if (d % cyclen_[h] == 0) in_d |= 1ULL << h;
            else out_d |= 1ULL << h;
          }
        }
        // open paths longer than d cannot end up with length dividing d
        for (int r = 0; r < n_; ++r) {
          if (pred_[r] >= 0 || cyclen_[r] > 0) continue;
          int len = 0;
          for (int w = r; w >= 0; w = (st.sigma[w] < 0 ? -1 : st.sigma[w])) {
            ++len;
            if (st.sigma[w] < 0) break;
          }
          if (len > d)
            for (int w = r, i = 0; i < len; w = st.sigma[w], ++i) out_d |= 1ULL << w;
        }
        uint64_t closure = subgroup_closure(in_d);
        if (closure & out_d) return false;
        uint64_t inter = ~0ULL, uni = 0;
        bool any = false;
        for (uint64_t hmask : subgroups_) {
          if ((closure & ~hmask) || (hmask & out_d)) continue;
          int outside = n_ - std::popcount(hmask);
          if (!(outside_ok_[di] >> outside & 1)) continue;
          any = true;
          inter &= hmask;
          uni |= hmask;
        }
        if (!any) return false;
        if (d == 1) {
          for (int x = 1; x < n_; ++x) {
            bool must_fix = (inter >> x & 1) != 0;
            bool may_fix = (uni >> x & 1) != 0;
            if (st.sigma[x] >= 0) {
              if (must_fix && st.sigma[x] != x) return false;
              if (!may_fix && st.sigma[x] == x) return false;
            } else if (must_fix) {
              uint64_t nd = st.dom[x] & (1ULL << x);
              if (!nd) return false;
              if (nd != st.dom[x]) { st.dom[x] = nd; changed = true; }
            } else if (!may_fix) {
              uint64_t nd = st.dom[x] & ~(1ULL << x);
              if (!nd) return false;
              if (nd != st.dom[x]) { st.dom[x] = nd; changed = true; }
            }
          }
        }
      }
      // cycle-sum rule: pi summed around a closed cycle of length L is
      // 0 mod L (from sigma^k = id in the translation identity)
      for (int h = 0; h < n_; ++h) {
        int L = cyclen_[h];
        if (L == 0) continue;
        const int* row = &step_[static_cast<size_t>(h) * k_];
        bool least = true;
        for (int l = 1; l < L; ++l)
          if (row[l] < h) { least = false; break; }
        if (!least) continue;
        int sum = 0, open = -1, open_count = 0;
        for (int l = 0; l < L; ++l) {
          int w = row[l];
          if (std::popcount(st.mask[w]) == 1) {
            sum += std::countr_zero(st.mask[w]);
          } else {
            ++open_count;
            open = w;
          }
        }
        if (open_count == 0) {
          if (sum % L != 0) return false;
        } else if (open_count == 1) {
          int need = ((-sum) % L + L) % L;
          uint64_t bits = 0;
          for (int j = need; j < k_; j += L) bits |= 1ULL << j;
          uint64_t nm = st.mask[open] & bits;
          if (!nm) return false;
          if (nm != st.mask[open]) { st.mask[open] = nm; changed = true; }
        }
      }
      // domain hygiene: drop used values, then force singletons and
      // values with a unique remaining preimage
      uint64_t unused_vals = ~st.used;
      if (n_ < 64) unused_vals &= (1ULL << n_) - 1;
      for (int x = 0; x < n_; ++x) {
        if (st.sigma[x] >= 0) continue;
        uint64_t nd = st.dom[x] & unused_vals;
        if (!nd) return false;
        if (nd != st.dom[x]) { st.dom[x] = nd; changed = true; }
        if (std::popcount(nd) == 1) {
          assign(st, x, std::countr_zero(nd));
          changed = true;
        }
      }
      for (uint64_t vm = unused_vals & ~st.used; vm; vm &= vm - 1) {
        ElementId v = std::countr_zero(vm);
        if (st.used >> v & 1) continue;  // assigned meanwhile
        int cnt = 0, last = -1;
        for (int x = 0; x < n_ && cnt < 2; ++x) {
          if (st.sigma[x] < 0 && (st.dom[x] >> v & 1)) { ++cnt; last = x; }
        }
        if (cnt == 0) return false;   // v has no possible preimage
        if (cnt == 1) {
          assign(st, last, v);
          changed = true;
        }
      }
    }
    return true;
  }

  void finalize(const SearchState& st) {
    long long l = 1;
    for (int h = 0; h < n_; ++h) l = std::lcm(l, static_cast<long long>(cyclen_[h]));
    if (l != k_) { ++prunes; return; }  // found under its exact order instead
    std::vector<ElementId> sigma(st.sigma.begin(), st.sigma.end());
    std::vector<int> pi(n_);
    for (int gid = 0; gid < n_; ++gid) {
      if (std::popcount(st.mask[gid]) != 1) { ++prunes; return; }
      pi[gid] = std::countr_zero(st.mask[gid]);
    }
    // independent final check; engine bugs surface here, not downstream
    sink_->push_back(validate_skew(gp_, std::move(sigma), std::move(pi)));
  }

  uint64_t subgroup_closure(uint64_t seed) const {
    uint64_t cur = seed | 1;
    for (;;) {
      uint64_t next = cur;
      for (uint64_t xm = cur; xm; xm &= xm - 1) {
        int x = std::countr_zero(xm);
        for (uint64_t ym = cur; ym; ym &= ym - 1)
          next |= 1ULL << g_.mul(x, std::countr_zero(ym));
      }
      if (next == cur) return cur;
      cur = next;
    }
  }

  const FiniteGroup& g_;
  GroupPtr gp_;
  int n_, k_;
  std::atomic<long long>& nodes_;
  long long node_cap_;
  std::vector<SkewMorphism>* sink_;
  const std::vector<uint64_t>& subgroups_;
  std::vector<int> divisors_;
  std::vector<uint64_t> outside_ok_;
  std::vector<int> step_;
  std::vector<int> cyclen_;
  std::vector<int> pred_;
};

SkewMorphism identity_morphism(const GroupPtr& g) {
  std::vector<ElementId> sigma(g->order());
  std::iota(sigma.begin(), sigma.end(), 0);
  return SkewMorphism{g, std::move(sigma), std::vector<int>(g->order(), 0), 1};
}

}  // namespace

EnumerationResult enumerate_skew_morphisms(const GroupPtr& g,
                                           const EnumerationOptions& opts) {
  const int n = g->order();
  if (n > 64) throw Error(Errc::too_large, "enumeration capped at order 64");

  auto t0 = std::chrono::steady_clock::now();
  EnumerationResult res;
  res.group = g;
  res.morphisms.push_back(identity_morphism(g));

  int cap = n - 1;  // cyclic point-stabilizer bound
  if (opts.order_cap > 0) cap = std::min(cap, opts.order_cap);

  std::vector<int> k_values;
  for (int k = 2; k <= cap; ++k) k_values.push_back(k);
  if (opts.restrict_cyclic_2power) {
    int p = 0;
    bool cyclic2 = false;
    if (g->is_p_group(p) && p == 2) {
      for (int x = 0; x < n; ++x)
        if (g->order_of(x) == n) { cyclic2 = true; break; }
    }
    if (cyclic2) {
      std::vector<int> keep;
      for (int k : k_values)
        if ((k & (k - 1)) == 0) keep.push_back(k);
      k_values = std::move(keep);
    }
  }

  struct Task {
    int k;
    int first_cand;
  };
  std::vector<Task> tasks;
  for (int k : k_values)
    for (int c = 1; c < n; ++c) tasks.push_back({k, c});

  std::atomic<long long> nodes{0};
  std::atomic<size_t> next_task{0};
  std::atomic<bool> any_capped{false};
  std::vector<std::vector<SkewMorphism>> task_found(tasks.size());
  std::vector<long long> task_prunes(tasks.size(), 0);

  // subgroup lattice as bitmasks, shared by the Fix(sigma^d) pruning rule
  std::vector<uint64_t> subgroup_masks;
  if (n > 1) {
    for (const auto& h : all_subgroups(g)) {
      uint64_t m = 0;
      for (ElementId x : h.members) m |= 1ULL << x;
      subgroup_masks.push_back(m);
    }
  }

  int jobs = std::max(1, opts.jobs);
  auto worker = [&]() {
    for (;;) {
      size_t ti = next_task.fetch_add(1);
      if (ti >= tasks.size()) return;
      const Task& t = tasks[ti];
      SkewSearch search(*g, t.k, nodes, opts.node_cap, &task_found[ti], g,
                        subgroup_masks);
      SearchState st = search.initial_state();
      st.sigma[1] = t.first_cand;
      st.used |= 1ULL << t.first_cand;
      st.dom[1] = 1ULL << t.first_cand;
      search.dfs(std::move(st));
      task_prunes[ti] = search.prunes;
      if (search.capped) any_capped = true;
    }
  };

  if (n > 1 && !tasks.empty()) {
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  for (auto& v : task_found)
    for (auto& m : v) res.morphisms.push_back(std::move(m));
  std::sort(res.morphisms.begin(), res.morphisms.end());
  res.morphisms.erase(std::unique(res.morphisms.begin(), res.morphisms.end(),
                                  [](const SkewMorphism& a, const SkewMorphism& b) {
                                    return a.sigma == b.sigma;
                                  }),
                      res.morphisms.end());

  res.stats.nodes = nodes.load();
  for (long long p : task_prunes) res.stats.prunes += p;
  res.stats.completed = !any_capped.load();
  res.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  if (!res.stats.completed)
    throw Error(Errc::budget_exceeded,
                "node cap " + std::to_string(opts.node_cap) + " exceeded after " +
                    std::to_string(res.stats.nodes) + " nodes");
  return res;
}

}  // namespace skewprod
