#pragma once

// Moments are finite rooted trees labelled with two-sided types, the root
// being the least element.  This module provides canonical codes (moment
// identity is tree isomorphism), generated sub-moments, the reduction search
// behind irreducibility, enumeration of all irreducible moments over a
// closure, and the successor relation between moments.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "itl/formula.hpp"
#include "itl/structures.hpp"
#include "itl/typesys.hpp"

namespace itl {

class Moment {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    TypeMask label = 0;
    std::vector<NodePtr> children;  // sorted by canonical code
    std::string code;
    int size = 1;
    int height = 0;
  };

  static Moment leaf(ClosurePtr sigma, TypeMask label) {
    return tree(std::move(sigma), label, {});
  }

  static Moment tree(ClosurePtr sigma, TypeMask label, std::vector<Moment> children) {
    auto n = std::make_shared<Node>();
    n->label = label;
    for (auto& c : children) {
      if (*c.sigma() != *sigma)
        throw std::invalid_argument("moment children must share the closure");
      n->children.push_back(c.root_);
    }
    std::sort(n->children.begin(), n->children.end(),
              [](const NodePtr& a, const NodePtr& b) { return a->code < b->code; });
    n->code = std::to_string(label);
    n->code += '(';
    for (const auto& c : n->children) {
      n->code += c->code;
      n->size += c->size;
      n->height = std::max(n->height, c->height + 1);
    }
    n->code += ')';
    return Moment(std::move(sigma), std::move(n));
  }

  const ClosurePtr& sigma() const { return sigma_; }
  const NodePtr& root() const { return root_; }
  const std::string& code() const { return root_->code; }
  int node_count() const { return root_->size; }
  int height() const { return root_->height; }
  TypeMask root_label_mask() const { return root_->label; }
  TwoSidedType root_label() const { return TwoSidedType(sigma_, root_->label); }

  friend bool operator==(const Moment& a, const Moment& b) { return a.code() == b.code(); }
  friend bool operator!=(const Moment& a, const Moment& b) { return !(a == b); }
  friend bool operator<(const Moment& a, const Moment& b) { return a.code() < b.code(); }

  // Preorder view; the subtree of node i occupies indices [i, i + size[i]).
  struct Flat {
    std::vector<TypeMask> label;
    std::vector<int> parent;
    std::vector<int> size;
    std::vector<NodePtr> node;

    int count() const { return static_cast<int>(label.size()); }
    bool ancestor_or_self(int i, int j) const { return j >= i && j < i + size[i]; }
    std::vector<int> children_of(int i) const {
      std::vector<int> out;
      for (int j = i + 1; j < i + size[i]; j += size[j]) out.push_back(j);
      return out;
    }
  };

  Flat flatten() const {
    Flat f;
    walk(root_, -1, f);
    return f;
  }

  // The generated sub-moment rooted at preorder node u (already canonical).
  Moment submoment(int u) const {
    Flat f = flatten();
    if (u < 0 || u >= f.count()) throw std::invalid_argument("no such moment node");
    return Moment(sigma_, f.node[u]);
  }

  // All generated sub-moments, deduplicated by code, self included.
  std::vector<Moment> generated_submoments() const {
    std::map<std::string, NodePtr> seen;
    collect(root_, seen);
    std::vector<Moment> out;
    for (auto& [code, node] : seen) out.push_back(Moment(sigma_, node));
    return out;
  }

  // The tree as a labelled structure (ancestor order, no successor relation);
  // lets the frame validator check moment-hood.
  LabelledStructure to_structure(const std::string& prefix = "n") const {
    Flat f = flatten();
    std::vector<std::string> ids;
    std::vector<TypeMask> labels(f.label.begin(), f.label.end());
    for (int i = 0; i < f.count(); ++i) ids.push_back(prefix + std::to_string(i));
    LabelledStructure out(sigma_, std::move(ids), std::move(labels));
    for (int i = 0; i < f.count(); ++i)
      if (f.parent[i] >= 0) out.add_order_edge(f.parent[i], i);
    out.close_order();
    return out;
  }

 private:
  Moment(ClosurePtr sigma, NodePtr root) : sigma_(std::move(sigma)), root_(std::move(root)) {}

  static void walk(const NodePtr& n, int parent, Flat& f) {
    int me = f.count();
    f.label.push_back(n->label);
    f.parent.push_back(parent);
    f.size.push_back(n->size);
    f.node.push_back(n);
    for (const auto& c : n->children) walk(c, me, f);
  }

  static void collect(const NodePtr& n, std::map<std::string, NodePtr>& seen) {
    if (!seen.emplace(n->code, n).second) return;
    for (const auto& c : n->children) collect(c, seen);
  }

  ClosurePtr sigma_;
  NodePtr root_;
};

inline std::string canonical_code(const Moment& m) { return m.code(); }

// ---------------------------------------------------------------------------
// Mapping tests between moments.

namespace detail {

// Can the subtree of A at x be mapped into B with the root going exactly to
// node y?  `rel(a, b)` is the label condition the image must satisfy.
template <typename Rel>
bool node_maps(const Moment::Flat& A, int x, const Moment::Flat& B, int y,
               const Rel& rel, std::vector<signed char>& memo) {
  signed char& slot = memo[static_cast<std::size_t>(x) * B.count() + y];
  if (slot != -1) return slot != 0;
  bool ok = rel(A.label[x], B.label[y]);
  if (ok) {
    for (int c = x + 1; c < x + A.size[x] && ok; c += A.size[c]) {
      bool found = false;
      for (int y2 = y; y2 < y + B.size[y] && !found; ++y2)
        found = node_maps(A, c, B, y2, rel, memo);
      ok = found;
    }
  }
  slot = ok ? 1 : 0;
  return ok;
}

inline std::vector<signed char>& scratch_memo(std::size_t n) {
  thread_local std::vector<signed char> memo;
  memo.assign(n, -1);
  return memo;
}

inline bool maps_into_flat(const Moment::Flat& A, const Moment::Flat& B) {
  auto rel = [](TypeMask x, TypeMask y) { return x == y; };
  auto& memo = scratch_memo(static_cast<std::size_t>(A.count()) * B.count());
  for (int y = 0; y < B.count(); ++y)
    if (node_maps(A, 0, B, y, rel, memo)) return true;
  return false;
}

inline bool maps_to_flat(const Closure& sigma, const Moment::Flat& A, const Moment::Flat& B) {
  auto rel = [&sigma](TypeMask x, TypeMask y) { return st_masks(sigma, x, y); };
  auto& memo = scratch_memo(static_cast<std::size_t>(A.count()) * B.count());
  return node_maps(A, 0, B, 0, rel, memo);
}

}  // namespace detail

// Label-preserving monotone map from `a` into `b`, landing anywhere.  Such a
// map makes `a` a redundant sibling next to `b`.
inline bool maps_into(const Moment& a, const Moment& b) {
  Moment::Flat A = a.flatten(), B = b.flatten();
  return detail::maps_into_flat(A, B);
}

// The successor relation on moments: a sensible forward-confluent relation
// between the trees relating the roots.  Computed as the greatest fixpoint of
// pair deletion, evaluated here by recursion on the source tree.
inline bool maps_to(const Moment& v, const Moment& w) {
  if (*v.sigma() != *w.sigma())
    throw std::invalid_argument("maps_to requires moments over one closure");
  Moment::Flat A = v.flatten(), B = w.flatten();
  return detail::maps_to_flat(*v.sigma(), A, B);
}

// ---------------------------------------------------------------------------
// Reductions.

struct Reduction {
  std::vector<int> kept;        // preorder nodes of the sub-moment, ascending
  std::vector<int> retraction;  // retraction[i] = image of node i (fixes kept)
  Moment reduced;
};

namespace detail {

struct ImplicationTable {
  // For condition (b) bookkeeping: implications of the closure, and per type
  // mask which refuted implications it needs witnessed / which patterns it
  // provides.
  std::vector<std::size_t> impl_index;  // indices into the closure
  std::vector<std::size_t> lhs, rhs;

  explicit ImplicationTable(const Closure& sigma) {
    for (std::size_t i = 0; i < sigma.size(); ++i)
      if (sigma[i].op() == Op::Implies) {
        impl_index.push_back(i);
        lhs.push_back(sigma.at(sigma[i].lhs()));
        rhs.push_back(sigma.at(sigma[i].rhs()));
      }
  }

  std::uint64_t needed(TypeMask t) const {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < impl_index.size(); ++k)
      if (!((t >> impl_index[k]) & 1u)) out |= std::uint64_t{1} << k;
    return out;
  }
  std::uint64_t provided(TypeMask t) const {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < impl_index.size(); ++k)
      if (((t >> lhs[k]) & 1u) && !((t >> rhs[k]) & 1u)) out |= std::uint64_t{1} << k;
    return out;
  }
};

inline Moment rebuild_kept_impl(const Moment& v, const Moment::Flat& F,
                                const std::vector<bool>& deleted, int u) {
  std::vector<Moment> children;
  // kept descendants whose nearest kept strict ancestor is u
  for (int j = u + 1; j < u + F.size[u]; ++j) {
    if (deleted[j]) continue;
    bool nearest = true;
    for (int a = F.parent[j]; a != u && a >= 0; a = F.parent[a])
      if (!deleted[a]) {
        nearest = false;
        break;
      }
    if (nearest) children.push_back(rebuild_kept_impl(v, F, deleted, j));
  }
  return Moment::tree(v.sigma(), F.label[u], std::move(children));
}

}  // namespace detail

// Search for a proper sub-moment w of v together with a monotone,
// label-preserving, idempotent retraction of v onto w.  Deleted nodes need a
// kept node of the same label as image, so only nodes whose label repeats are
// candidates; subsets are tried smallest first.
inline std::optional<Reduction> find_reduction(const Moment& v) {
  Moment::Flat F = v.flatten();
  const int n = F.count();
  if (n <= 1) return std::nullopt;
  std::map<TypeMask, int> occurrences;
  for (int i = 0; i < n; ++i) ++occurrences[F.label[i]];
  std::vector<int> deletable;
  for (int i = 1; i < n; ++i)
    if (occurrences[F.label[i]] > 1) deletable.push_back(i);
  if (deletable.empty()) return std::nullopt;

  detail::ImplicationTable impls(*v.sigma());
  const int d = static_cast<int>(deletable.size());

  std::vector<int> pick;  // positions into `deletable`
  for (int r = 1; r <= d; ++r) {
    // combinations in lexicographic order
    pick.assign(r, 0);
    for (int i = 0; i < r; ++i) pick[i] = i;
    while (true) {
      std::vector<bool> deleted(n, false);
      for (int i : pick) deleted[deletable[i]] = true;

      // kept part must itself satisfy condition (b)
      bool frame_ok = true;
      for (int u = 0; u < n && frame_ok; ++u) {
        if (deleted[u]) continue;
        std::uint64_t need = impls.needed(F.label[u]);
        if (!need) continue;
        std::uint64_t have = 0;
        for (int j = u; j < u + F.size[u]; ++j)
          if (!deleted[j]) have |= impls.provided(F.label[j]);
        if (need & ~have) frame_ok = false;
      }
      if (frame_ok) {
        // assign images for deleted nodes in preorder; ancestors first
        std::vector<int> image(n);
        for (int i = 0; i < n; ++i) image[i] = deleted[i] ? -1 : i;
        std::vector<int> order;
        for (int i = 1; i < n; ++i)
          if (deleted[i]) order.push_back(i);
        auto consistent = [&](int x, int img) {
          for (int j = 0; j < n; ++j) {
            if (image[j] < 0 || j == x) continue;
            if (F.ancestor_or_self(j, x) && !F.ancestor_or_self(image[j], img)) return false;
            if (F.ancestor_or_self(x, j) && !F.ancestor_or_self(img, image[j])) return false;
          }
          return true;
        };
        auto assign = [&](auto&& self, std::size_t k) -> bool {
          if (k == order.size()) return true;
          int x = order[k];
          for (int img = 0; img < n; ++img) {
            if (deleted[img] || F.label[img] != F.label[x]) continue;
            if (!consistent(x, img)) continue;
            image[x] = img;
            if (self(self, k + 1)) return true;
            image[x] = -1;
          }
          return false;
        };
        if (assign(assign, 0)) {
          Reduction red{{}, image, detail::rebuild_kept_impl(v, F, deleted, 0)};
          for (int i = 0; i < n; ++i)
            if (!deleted[i]) red.kept.push_back(i);
          return red;
        }
      }
      // next combination
      int i = r - 1;
      while (i >= 0 && pick[i] == d - r + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

inline bool is_irreducible(const Moment& m) { return !find_reduction(m).has_value(); }

// ---------------------------------------------------------------------------
// Enumeration of all irreducible moments over a closure.

struct MomentBudget {
  std::size_t max_moments = 50000;
  int max_nodes = 12;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The frame of irreducible moments with at most `max_nodes` nodes.  That set
// is upward closed (generated sub-moments only shrink), so it is a weak
// quasimodel like the unbounded frame, and every verdict drawn from its
// elimination survivors ships a genuine quasimodel witness.  `node_capped`
// records that larger irreducible moments exist beyond the cap; `truncated`
// means the moment budget ran out and the frame is unusable.
struct IrrFrame {
  ClosurePtr sigma;
  std::vector<Moment> moments;                // sorted by canonical code
  std::vector<std::vector<int>> submoments;   // generated sub-moments, self included
  std::vector<std::vector<int>> succ;         // the successor relation
  bool node_capped = false;
  bool truncated = false;
  std::vector<std::size_t> layer_sizes;       // moments found per height

  std::optional<int> index_of(const std::string& code) const {
    auto cmp = [](const Moment& m, const std::string& c) { return m.code() < c; };
    auto it = std::lower_bound(moments.begin(), moments.end(), code, cmp);
    if (it == moments.end() || it->code() != code) return std::nullopt;
    return static_cast<int>(it - moments.begin());
  }

  // Flattened view: one world per moment, the order reversing generated
  // sub-moments, the moment successor relation, root labels.
  LabelledStructure to_structure() const {
    std::vector<std::string> ids;
    std::vector<TypeMask> labels;
    for (std::size_t i = 0; i < moments.size(); ++i) {
      ids.push_back("m" + std::to_string(i));
      labels.push_back(moments[i].root_label_mask());
    }
    LabelledStructure out(sigma, std::move(ids), std::move(labels));
    for (std::size_t i = 0; i < moments.size(); ++i)
      for (int j : submoments[i]) out.add_order_edge(static_cast<int>(i), j);
    out.close_order();
    out.ensure_succ();
    for (std::size_t i = 0; i < moments.size(); ++i)
      for (int j : succ[i]) out.add_succ_edge(static_cast<int>(i), j);
    return out;
  }
};

namespace detail {

// Enumerates irreducible moments bottom-up by height.  A candidate tree has
// strictly increasing labels along edges (an equal label collapses onto the
// parent) and irreducible subtrees, so the only reductions left delete a
// whole child and retract it into a sibling: monotonicity confines every
// image to the branch of its deepest kept ancestor, and a deleted child root
// cannot keep descendants (no descendant shares its label).  Children sets
// are therefore exactly the sets with no label-preserving monotone map
// between two members; the full reduction search stays the public arbiter
// and is cross-checked in the tests.
class IrrGenerator {
 public:
  IrrGenerator(ClosurePtr sigma, MomentBudget budget)
      : sigma_(std::move(sigma)), budget_(budget), impls_(*sigma_) {}

  IrrFrame run() {
    if (!sigma_->box_free())
      throw std::invalid_argument("moments are defined over box-free closures");
    types_.clear();
    for (const auto& t : enumerate_types(sigma_)) types_.push_back(t.positive_mask());
    type_index_.clear();
    for (std::size_t i = 0; i < types_.size(); ++i) type_index_[types_[i]] = i;

    IrrFrame out;
    out.sigma = sigma_;

    // height 0: one singleton per self-witnessing type
    std::size_t layer_lo = 0;
    for (TypeMask t : types_)
      if ((impls_.needed(t) & ~impls_.provided(t)) == 0) add(Moment::leaf(sigma_, t));
    std::size_t layer_hi = pool_.size();
    out.layer_sizes.push_back(layer_hi);

    while (layer_hi > layer_lo && !truncated_) {
      for (TypeMask t : types_) {
        std::vector<int> above;
        for (std::size_t i = 0; i < layer_hi; ++i) {
          TypeMask r = pool_[i].root_label_mask();
          if (r != t && (t & ~r) == 0) above.push_back(static_cast<int>(i));
        }
        std::vector<int> chosen;
        extend(t, above, 0, 1, false, layer_lo, chosen);
        if (truncated_) break;
      }
      layer_lo = layer_hi;
      layer_hi = pool_.size();
      out.layer_sizes.push_back(layer_hi - layer_lo);
    }
    while (!out.layer_sizes.empty() && out.layer_sizes.back() == 0) out.layer_sizes.pop_back();

    // deterministic order, then the derived relations
    std::sort(pool_.begin(), pool_.end());
    out.moments = pool_;
    out.node_capped = node_capped_;
    out.truncated = truncated_;
    if (truncated_) return out;

    std::map<std::string, int> index;
    for (std::size_t i = 0; i < pool_.size(); ++i) index[pool_[i].code()] = static_cast<int>(i);
    out.submoments.resize(pool_.size());
    for (std::size_t i = 0; i < pool_.size(); ++i)
      for (const Moment& s : pool_[i].generated_submoments())
        out.submoments[i].push_back(index.at(s.code()));
    out.succ.resize(pool_.size());
    const Closure& sigma = *sigma_;
    std::vector<Moment::Flat> flats;
    flats.reserve(pool_.size());
    for (const auto& m : pool_) flats.push_back(m.flatten());
    for (std::size_t i = 0; i < pool_.size(); ++i)
      for (std::size_t j = 0; j < pool_.size(); ++j)
        if (st_masks(sigma, pool_[i].root_label_mask(), pool_[j].root_label_mask()) &&
            maps_to_flat(sigma, flats[i], flats[j]))
          out.succ[i].push_back(static_cast<int>(j));
    return out;
  }

 private:
  void add(const Moment& m) {
    if (pool_.size() >= budget_.max_moments) {
      truncated_ = true;
      return;
    }
    std::uint64_t w = 0, occ = 0;
    for (TypeMask l : m.flatten().label) {
      w |= impls_.provided(l);
      occ |= std::uint64_t{1} << (type_index_.at(l) & 63);
    }
    pool_.push_back(m);
    wit_all_.push_back(w);
    label_occ_.push_back(occ);
  }

  bool hom_either(int i, int j) {
    return hom_into(i, j) || hom_into(j, i);
  }

  bool hom_into(int a, int b) {
    // quick necessary conditions before the memoized embedding test
    if (pool_[a].node_count() > pool_[b].node_count()) return false;
    if (label_occ_[a] & ~label_occ_[b]) return false;
    std::uint64_t key = (std::uint64_t(a) << 32) | std::uint32_t(b);
    auto it = hom_.find(key);
    if (it != hom_.end()) return it->second;
    bool r = maps_into(pool_[a], pool_[b]);
    hom_.emplace(key, r);
    return r;
  }

  // DFS over children sets drawn from `above` (ascending pool indices).
  void extend(TypeMask t, const std::vector<int>& above, std::size_t from, int total_nodes,
              bool has_new, std::size_t layer_lo, std::vector<int>& chosen) {
    if (truncated_) return;
    if (!chosen.empty() && has_new) {
      std::uint64_t have = impls_.provided(t);
      for (int i : chosen) have |= wit_all_[i];
      if ((impls_.needed(t) & ~have) == 0) {
        std::vector<Moment> children;
        for (int i : chosen) children.push_back(pool_[i]);
        add(Moment::tree(sigma_, t, std::move(children)));
      }
    }
    for (std::size_t k = from; k < above.size(); ++k) {
      int i = above[k];
      if (total_nodes + pool_[i].node_count() > budget_.max_nodes) {
        // A viable extension past the node cap: larger irreducible moments
        // exist, the frame is the bounded sub-frame only.
        if (!node_capped_) {
          bool viable = true;
          for (int d : chosen)
            if (hom_either(i, d)) {
              viable = false;
              break;
            }
          if (viable) node_capped_ = true;
        }
        continue;
      }
      bool clash = false;
      for (int d : chosen)
        if (hom_either(i, d)) {
          clash = true;
          break;
        }
      if (clash) continue;
      chosen.push_back(i);
      extend(t, above, k + 1, total_nodes + pool_[i].node_count(),
             has_new || static_cast<std::size_t>(i) >= layer_lo, layer_lo, chosen);
      chosen.pop_back();
      if (truncated_) return;
    }
  }

  ClosurePtr sigma_;
  MomentBudget budget_;
  ImplicationTable impls_;
  std::vector<TypeMask> types_;
  std::map<TypeMask, std::size_t> type_index_;
  std::vector<Moment> pool_;
  std::vector<std::uint64_t> wit_all_;    // witness patterns present in the tree
  std::vector<std::uint64_t> label_occ_;  // which types occur in the tree
  std::unordered_map<std::uint64_t, bool> hom_;
  bool truncated_ = false;
  bool node_capped_ = false;
};

}  // namespace detail

inline IrrFrame generate_irr(const ClosurePtr& sigma, MomentBudget budget = {}) {
  detail::IrrGenerator gen(sigma, budget);
  return gen.run();
}

// Tower function used by the size sanity bound: 2^n_0 = n and
// 2^n_{k+1} = 2^(2^n_k).  Returns nothing once the value leaves 64 bits.
inline std::optional<std::uint64_t> superexp(std::uint64_t n, unsigned height) {
  std::uint64_t v = n;
  for (unsigned i = 0; i < height; ++i) {
    if (v >= 64) return std::nullopt;
    v = std::uint64_t{1} << v;
  }
  return v;
}

inline std::optional<std::uint64_t> irr_size_bound(std::size_t sigma_size) {
  std::uint64_t s = sigma_size;
  return superexp(s * s + s, static_cast<unsigned>(s + 1));
}

}  // namespace itl
