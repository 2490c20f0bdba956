#pragma once

// Simulations between labelled structures and the formulas that internalize
// them.  A simulation relates worlds with componentwise-included labels and
// completes order squares forward; the largest one is computed as a greatest
// fixpoint by pair deletion.  Sim(w) characterizes "some world above
// simulates w" through its failure.

#include <algorithm>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/structures.hpp"
#include "itl/typesys.hpp"

namespace itl {

struct SimRelation {
  std::vector<std::pair<int, int>> pairs;  // (world of X, world of Y), sorted

  bool contains(int a, int b) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
  }
};

namespace detail {

// Projection of Y-labels onto the (smaller) closure of X, so the label
// condition becomes mask equality.
inline std::vector<std::size_t> closure_embedding(const Closure& small, const Closure& big) {
  if (!small.subset_of(big))
    throw std::invalid_argument("simulation needs the first closure inside the second");
  std::vector<std::size_t> map;
  for (std::size_t i = 0; i < small.size(); ++i) map.push_back(big.at(small[i]));
  return map;
}

}  // namespace detail

inline SimRelation largest_simulation(const LabelledStructure& x, const LabelledStructure& y) {
  auto emb = detail::closure_embedding(*x.sigma(), *y.sigma());
  const int nx = static_cast<int>(x.world_count());
  const int ny = static_cast<int>(y.world_count());
  auto project = [&](TypeMask ly) {
    TypeMask out = 0;
    for (std::size_t i = 0; i < emb.size(); ++i)
      if ((ly >> emb[i]) & 1u) out |= TypeMask{1} << i;
    return out;
  };
  std::vector<TypeMask> proj(ny);
  for (int b = 0; b < ny; ++b) proj[b] = project(y.label_mask(b));

  // start from all label-compatible pairs, delete pairs whose order squares
  // cannot be completed, repeat to the fixpoint
  std::vector<std::vector<bool>> alive(nx, std::vector<bool>(ny, false));
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) alive[a][b] = x.label_mask(a) == proj[b];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < nx; ++a)
      for (int b = 0; b < ny; ++b) {
        if (!alive[a][b]) continue;
        bool ok = true;
        for (int a2 = 0; a2 < nx && ok; ++a2) {
          if (!x.leq(a, a2)) continue;
          bool found = false;
          for (int b2 = 0; b2 < ny && !found; ++b2)
            if (y.leq(b, b2) && alive[a2][b2]) found = true;
          ok = found;
        }
        if (!ok) {
          alive[a][b] = false;
          changed = true;
        }
      }
  }
  SimRelation out;
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b)
      if (alive[a][b]) out.pairs.push_back({a, b});
  return out;
}

inline bool simulates(const LabelledStructure& x, int wx, const LabelledStructure& y, int wy) {
  return largest_simulation(x, y).contains(wx, wy);
}

// Definition check against an explicit relation: label condition plus the
// forward-confluence squares.
inline bool is_simulation(const LabelledStructure& x, const LabelledStructure& y,
                          const SimRelation& e) {
  auto emb = detail::closure_embedding(*x.sigma(), *y.sigma());
  for (auto [a, b] : e.pairs) {
    for (std::size_t i = 0; i < emb.size(); ++i)
      if (((x.label_mask(a) >> i) & 1u) != ((y.label_mask(b) >> emb[i]) & 1u)) return false;
    for (std::size_t a2 = 0; a2 < x.world_count(); ++a2) {
      if (!x.leq(a, static_cast<int>(a2))) continue;
      bool found = false;
      for (std::size_t b2 = 0; b2 < y.world_count() && !found; ++b2)
        if (y.leq(b, static_cast<int>(b2)) && e.contains(static_cast<int>(a2), static_cast<int>(b2)))
          found = true;
      if (!found) return false;
    }
  }
  return true;
}

// Dynamic simulation: whenever a E b and b steps to b', a can step to some
// a' with a' E b' (the successor squares of the two structures complete).
inline bool is_dynamic_simulation(const LabelledStructure& x, const LabelledStructure& y,
                                  const SimRelation& e) {
  if (!x.has_succ() || !y.has_succ())
    throw std::invalid_argument("dynamic simulations need successor relations on both sides");
  for (auto [a, b] : e.pairs)
    for (int b2 : y.succ(b)) {
      bool found = false;
      for (int a2 : x.succ(a))
        if (e.contains(a2, b2)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Simulation formulas, by backwards recursion on the strict order:
//
//   Sim(w) = /\ positive(w)  ->  \/ negative(w)  \/  \/ { Sim(v) : v > w }
//
// with the empty conjunction read as true and the empty disjunction as
// false.  Both disjunction blocks are flattened into one list; conjuncts and
// disjuncts are ordered by closure index, Sim-disjuncts by world index, and
// folded to the left.  No simplification by default, so output is stable.

namespace detail {

inline Formula fold_conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

inline Formula fold_disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

inline Formula sim_formula_rec(const LabelledStructure& x, int w, std::vector<Formula>& memo) {
  if (memo[w].valid()) return memo[w];
  const Closure& sigma = *x.sigma();
  std::vector<Formula> pos, rest;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    ((x.label_mask(w) >> i) & 1u ? pos : rest).push_back(sigma[i]);
  for (std::size_t v = 0; v < x.world_count(); ++v)
    if (x.leq(w, static_cast<int>(v)) && static_cast<int>(v) != w)
      rest.push_back(sim_formula_rec(x, static_cast<int>(v), memo));
  memo[w] = implies(fold_conj(pos), fold_disj(rest));
  return memo[w];
}

}  // namespace detail

inline Formula sim_formula(const LabelledStructure& x, int w) {
  if (w < 0 || static_cast<std::size_t>(w) >= x.world_count())
    throw std::invalid_argument("sim_formula: unknown world");
  std::vector<Formula> memo(x.world_count());
  return detail::sim_formula_rec(x, w, memo);
}

// Unit laws only: drop true from conjunctions, false from disjunctions, and
// a true antecedent; bit-stable otherwise.
inline Formula simplify_units(const Formula& f) {
  static const Formula top_f = truth();
  switch (f.op()) {
    case Op::Bottom:
    case Op::Atom: return f;
    case Op::Next: return next(simplify_units(f.child()));
    case Op::Eventually: return eventually(simplify_units(f.child()));
    case Op::Henceforth: return henceforth(simplify_units(f.child()));
    default: break;
  }
  if (f == top_f) return f;
  Formula l = simplify_units(f.lhs());
  Formula r = simplify_units(f.rhs());
  switch (f.op()) {
    case Op::And:
      if (l == top_f) return r;
      if (r == top_f) return l;
      return conj(l, r);
    case Op::Or:
      if (l.op() == Op::Bottom) return r;
      if (r.op() == Op::Bottom) return l;
      return disj(l, r);
    default:
      if (l == top_f) return r;
      return implies(l, r);
  }
}

}  // namespace itl
