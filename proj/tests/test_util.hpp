#pragma once

// Deterministic random generators shared by the test suites.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/semantics.hpp"

namespace testutil {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random formula with exactly `connectives` connective nodes (unary or
// binary), leaves drawn from `atoms`; optionally box-free / bottom-free.
inline itl::Formula random_formula(Rng& rng, const std::vector<std::string>& atoms,
                                   int connectives, bool box_free = true,
                                   bool allow_bottom = false) {
  if (connectives == 0) {
    if (allow_bottom && pick(rng, 0, 4) == 0) return itl::bottom();
    return itl::atom(atoms[pick(rng, 0, static_cast<int>(atoms.size()) - 1)]);
  }
  int choice = pick(rng, 0, box_free ? 4 : 5);
  if (choice >= 3) {  // unary
    itl::Formula sub = random_formula(rng, atoms, connectives - 1, box_free, allow_bottom);
    if (choice == 3) return itl::next(sub);
    if (choice == 4) return itl::eventually(sub);
    return itl::henceforth(sub);
  }
  int left = pick(rng, 0, connectives - 1);
  itl::Formula l = random_formula(rng, atoms, left, box_free, allow_bottom);
  itl::Formula r = random_formula(rng, atoms, connectives - 1 - left, box_free, allow_bottom);
  if (choice == 0) return itl::conj(l, r);
  if (choice == 1) return itl::disj(l, r);
  return itl::implies(l, r);
}

// Random propositional formula (no temporal connectives).
inline itl::Formula random_prop_formula(Rng& rng, const std::vector<std::string>& atoms,
                                        int connectives) {
  if (connectives == 0) {
    if (pick(rng, 0, 5) == 0) return itl::bottom();
    return itl::atom(atoms[pick(rng, 0, static_cast<int>(atoms.size()) - 1)]);
  }
  int choice = pick(rng, 0, 2);
  int left = pick(rng, 0, connectives - 1);
  itl::Formula l = random_prop_formula(rng, atoms, left);
  itl::Formula r = random_prop_formula(rng, atoms, connectives - 1 - left);
  if (choice == 0) return itl::conj(l, r);
  if (choice == 1) return itl::disj(l, r);
  return itl::implies(l, r);
}

// Random expanding-poset model: a DAG-closed order on up to `max_worlds`
// worlds, a forward-confluent successor assignment found by retry, and a
// monotone valuation of `atoms`.
inline itl::Model random_model(Rng& rng, int max_worlds,
                               const std::vector<std::string>& atoms) {
  for (;;) {
    int n = pick(rng, 1, max_worlds);
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (pick(rng, 0, 2) == 0) leq[i][j] = true;  // edges respect index order
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (leq[i][k])
          for (int j = 0; j < n; ++j)
            if (leq[k][j]) leq[i][j] = true;

    // successor: assign in index order; the image must dominate the images
    // of everything below
    std::vector<int> succ(n, -1);
    bool ok = true;
    for (int w = 0; w < n && ok; ++w) {
      std::vector<int> candidates;
      for (int v = 0; v < n; ++v) {
        bool fine = true;
        for (int u = 0; u < w && fine; ++u)
          if (leq[u][w] && !leq[succ[u]][v]) fine = false;
        for (int u = 0; u < w && fine; ++u)
          if (leq[w][u] && !leq[v][succ[u]]) fine = false;
        if (fine) candidates.push_back(v);
      }
      if (candidates.empty())
        ok = false;
      else
        succ[w] = candidates[pick(rng, 0, static_cast<int>(candidates.size()) - 1)];
    }
    if (!ok) continue;

    std::vector<std::set<std::string>> val(n);
    for (const auto& a : atoms)
      for (int w = 0; w < n; ++w)
        if (pick(rng, 0, 2) == 0)
          for (int v = 0; v < n; ++v)
            if (leq[w][v]) val[v].insert(a);  // upward closure keeps it monotone

    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("w" + std::to_string(i));
    return itl::Model(ids, leq, succ, val);
  }
}

inline itl::Model three_world_model() {
  // x <= z, x <= u; S(x)=x, S(z)=u, S(u)=u; p holds at z only
  itl::RawModel raw;
  raw.worlds = {"x", "z", "u"};
  raw.order = {{"x", "z"}, {"x", "u"}};
  raw.succ = {{"x", "x"}, {"z", "u"}, {"u", "u"}};
  raw.valuation["z"] = {"p"};
  auto res = itl::validate_model(raw);
  return *res.model;
}

}  // namespace testutil
