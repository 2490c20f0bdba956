#pragma once

// Intuitionistic propositional validity.
//
// The prover is a contraction-free sequent search in the style of G4ip:
// invertible rules are applied eagerly, the left-implication rule splits on
// the shape of the antecedent of the implication, and every premise strictly
// decreases a multiset weight, so no loop checking is needed.
//
// A brute-force search for finite rooted Kripke countermodels acts as the
// independent oracle; modal abstraction turns arbitrary formulas into
// propositional skeletons so that axiom-scheme instances can be validated.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/semantics.hpp"

namespace itl {

struct Abstraction {
  Formula skeleton;
  std::map<std::string, Formula> atom_to_modal;  // fresh atom -> replaced subformula
};

// Replace every maximal subformula headed by a temporal connective with a
// fresh atom; structurally equal subformulas share their atom.
inline Abstraction abstract_modal_atoms(const Formula& f) {
  Abstraction out;
  std::vector<std::pair<Formula, std::string>> assigned;
  std::set<std::string> used;
  auto collect_atoms = [&](auto&& self, const Formula& g) -> void {
    switch (g.op()) {
      case Op::Atom: used.insert(g.atom_name()); break;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        self(self, g.lhs());
        self(self, g.rhs());
        break;
      case Op::Next:
      case Op::Eventually:
      case Op::Henceforth: self(self, g.child()); break;
      default: break;
    }
  };
  collect_atoms(collect_atoms, f);
  int counter = 0;
  auto fresh = [&]() {
    std::string name;
    do {
      name = "a" + std::to_string(counter++);
    } while (used.count(name));
    used.insert(name);
    return name;
  };
  auto rec = [&](auto&& self, const Formula& g) -> Formula {
    switch (g.op()) {
      case Op::Bottom:
      case Op::Atom: return g;
      case Op::And: return conj(self(self, g.lhs()), self(self, g.rhs()));
      case Op::Or: return disj(self(self, g.lhs()), self(self, g.rhs()));
      case Op::Implies: return implies(self(self, g.lhs()), self(self, g.rhs()));
      default: {
        for (const auto& [sub, name] : assigned)
          if (sub == g) return atom(name);
        std::string name = fresh();
        assigned.push_back({g, name});
        out.atom_to_modal.emplace(name, g);
        return atom(name);
      }
    }
  };
  out.skeleton = rec(rec, f);
  return out;
}

// ---------------------------------------------------------------------------
// The sequent search.

namespace detail {

inline bool g4ip(std::vector<Formula> gamma, Formula goal);

inline bool g4ip_all_choices(std::vector<Formula>& gamma, const Formula& goal) {
  // non-invertible steps: right disjunction and the implication-implication
  // left rule
  if (goal.op() == Op::Or) {
    if (g4ip(gamma, goal.lhs())) return true;
    if (g4ip(gamma, goal.rhs())) return true;
  }
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Formula& g = gamma[i];
    if (g.op() != Op::Implies || g.lhs().op() != Op::Implies) continue;
    // (C -> D) -> B: first premise keeps D -> B, second keeps B
    Formula c = g.lhs().lhs(), d = g.lhs().rhs(), b = g.rhs();
    std::vector<Formula> rest;
    for (std::size_t j = 0; j < gamma.size(); ++j)
      if (j != i) rest.push_back(gamma[j]);
    std::vector<Formula> first = rest;
    first.push_back(implies(d, b));
    if (!g4ip(std::move(first), g.lhs())) continue;
    std::vector<Formula> second = std::move(rest);
    second.push_back(b);
    if (g4ip(std::move(second), goal)) return true;
  }
  return false;
}

inline bool g4ip(std::vector<Formula> gamma, Formula goal) {
  // saturate with invertible rules
  for (;;) {
    if (goal.op() == Op::Implies) {
      gamma.push_back(goal.lhs());
      goal = goal.rhs();
      continue;
    }
    if (goal.op() == Op::And)
      return g4ip(gamma, goal.lhs()) && g4ip(gamma, goal.rhs());

    bool stepped = false;
    for (std::size_t i = 0; i < gamma.size() && !stepped; ++i) {
      Formula g = gamma[i];
      switch (g.op()) {
        case Op::Bottom: return true;
        case Op::Atom:
          if (goal.op() == Op::Atom && goal == g) return true;
          break;
        case Op::And:
          gamma[i] = g.lhs();
          gamma.push_back(g.rhs());
          stepped = true;
          break;
        case Op::Or: {
          std::vector<Formula> left = gamma, right = std::move(gamma);
          left[i] = g.lhs();
          right[i] = g.rhs();
          return g4ip(std::move(left), goal) && g4ip(std::move(right), goal);
        }
        case Op::Implies: {
          const Formula& a = g.lhs();
          if (a.op() == Op::Bottom) {
            gamma.erase(gamma.begin() + static_cast<std::ptrdiff_t>(i));
            stepped = true;
          } else if (a.op() == Op::Atom) {
            bool have = false;
            for (const auto& h : gamma)
              if (h.op() == Op::Atom && h == a) {
                have = true;
                break;
              }
            if (have) {
              gamma[i] = g.rhs();
              stepped = true;
            }
          } else if (a.op() == Op::And) {
            gamma[i] = implies(a.lhs(), implies(a.rhs(), g.rhs()));
            stepped = true;
          } else if (a.op() == Op::Or) {
            gamma[i] = implies(a.lhs(), g.rhs());
            gamma.push_back(implies(a.rhs(), g.rhs()));
            stepped = true;
          }
          break;
        }
        default:
          throw std::invalid_argument("g4ip: temporal connective in a propositional sequent");
      }
    }
    if (!stepped) break;
  }
  return g4ip_all_choices(gamma, goal);
}

inline void require_propositional(const Formula& f) {
  switch (f.op()) {
    case Op::Bottom:
    case Op::Atom: return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      require_propositional(f.lhs());
      require_propositional(f.rhs());
      return;
    default:
      throw std::invalid_argument("ipc_valid needs a propositional formula; abstract first");
  }
}

}  // namespace detail

inline bool ipc_valid(const Formula& f) {
  detail::require_propositional(f);
  return detail::g4ip({}, f);
}

// ---------------------------------------------------------------------------
// Countermodel search: exhaustive over rooted posets (world 0 the root) and
// monotone valuations, smallest world count first.  Returns a Model whose
// successor function is the identity, which makes it a degenerate expanding
// poset usable with the standard evaluator.

namespace detail {

// all partial orders on n labelled points with point 0 as minimum,
// represented as bit matrices; enumeration order is stable
inline const std::vector<std::vector<std::vector<bool>>>& rooted_posets(int n) {
  static std::vector<std::vector<std::vector<std::vector<bool>>>> cache(9);
  auto& slot = cache[n];
  if (!slot.empty()) return slot;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && a != 0) pairs.push_back({a, b});  // 0 <= x is forced
  const std::size_t m = pairs.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (int j = 1; j < n; ++j) leq[0][j] = true;
    for (std::size_t k = 0; k < m; ++k)
      if ((mask >> k) & 1u) leq[pairs[k].first][pairs[k].second] = true;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (leq[a][b] && leq[b][a] && a != b) ok = false;
        if (!leq[a][b]) continue;
        for (int c = 0; c < n; ++c)
          if (leq[b][c] && !leq[a][c]) {
            ok = false;
            break;
          }
      }
    if (ok) slot.push_back(std::move(leq));
  }
  return slot;
}

inline void collect_atom_names(const Formula& f, std::vector<std::string>& out) {
  switch (f.op()) {
    case Op::Atom:
      if (std::find(out.begin(), out.end(), f.atom_name()) == out.end())
        out.push_back(f.atom_name());
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      collect_atom_names(f.lhs(), out);
      collect_atom_names(f.rhs(), out);
      return;
    case Op::Next:
    case Op::Eventually:
    case Op::Henceforth: collect_atom_names(f.child(), out);
    default: return;
  }
}

}  // namespace detail

inline std::optional<Model> kripke_counter_search(const Formula& f, int max_worlds) {
  detail::require_propositional(f);
  if (max_worlds < 1) throw std::invalid_argument("max_worlds must be at least 1");
  if (max_worlds > 6) throw std::invalid_argument("countermodel search is capped at 6 worlds");
  std::vector<std::string> atoms;
  detail::collect_atom_names(f, atoms);
  ClosurePtr sigma = closure(f);

  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("w" + std::to_string(i));
    for (const auto& leq : detail::rooted_posets(n)) {
      // upward-closed atom extents
      std::vector<std::uint32_t> upsets;
      for (std::uint32_t s = 0; s < (1u << n); ++s) {
        bool closed = true;
        for (int a = 0; a < n && closed; ++a)
          if ((s >> a) & 1u)
            for (int b = 0; b < n; ++b)
              if (leq[a][b] && !((s >> b) & 1u)) {
                closed = false;
                break;
              }
        if (closed) upsets.push_back(s);
      }
      std::vector<std::size_t> pick(atoms.size(), 0);
      for (;;) {
        std::vector<std::set<std::string>> val(n);
        for (std::size_t ai = 0; ai < atoms.size(); ++ai)
          for (int w = 0; w < n; ++w)
            if ((upsets[pick[ai]] >> w) & 1u) val[w].insert(atoms[ai]);
        std::vector<int> id_succ(n);
        for (int i = 0; i < n; ++i) id_succ[i] = i;
        Model m(ids, leq, id_succ, val);
        auto truth = truth_table(m, *sigma);
        if (!truth[sigma->at(f)][0]) return m;
        // next valuation assignment
        std::size_t ai = 0;
        for (; ai < atoms.size(); ++ai) {
          if (++pick[ai] < upsets.size()) break;
          pick[ai] = 0;
        }
        if (ai == atoms.size()) break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace itl
