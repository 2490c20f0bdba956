#pragma once

// Validity and satisfiability for box-free formulas: build the frame of all
// irreducible moments over the closure, then run a greatest-fixpoint
// elimination.  A moment is removed when a generated sub-moment has been
// removed, when it has no surviving successor, or when one of its positive
// eventualities cannot be fulfilled among the survivors.  The survivors form
// a quasimodel; the formula is falsifiable exactly when a survivor refutes it
// at the root.
//
// An exhaustive small-structure search over labelled quasimodels doubles as
// an independent witness oracle.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/moments.hpp"
#include "itl/structures.hpp"
#include "itl/typesys.hpp"

namespace itl {

// All worlds reachable from w by zero or more successor steps.
inline std::vector<int> reachable_set(const LabelledStructure& x, int w) {
  if (w < 0 || static_cast<std::size_t>(w) >= x.world_count())
    throw std::invalid_argument("reachable_set: unknown world");
  if (!x.has_succ()) return {w};
  std::vector<bool> seen(x.world_count(), false);
  std::vector<int> stack{w}, out;
  seen[w] = true;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    out.push_back(a);
    for (int b : x.succ(a))
      if (!seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class EliminationCause { SubmomentRemoved, NotSerial, EventualityUnfulfilled };

struct EliminationStep {
  int moment = -1;
  EliminationCause cause = EliminationCause::NotSerial;
  Formula eventuality;  // set for EventualityUnfulfilled
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;
  std::vector<int> survivors;  // ascending moment indices
};

namespace detail {

inline EliminationTrace eliminate_impl(const IrrFrame& irr,
                                       const std::vector<int>& scan_order) {
  if (irr.truncated)
    throw BudgetExceeded("moment enumeration was truncated; elimination needs the full frame");
  const Closure& sigma = *irr.sigma;
  const int n = static_cast<int>(irr.moments.size());
  std::vector<std::size_t> ev_indices;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i].op() == Op::Eventually) ev_indices.push_back(i);

  std::vector<bool> alive(n, true);
  EliminationTrace trace;

  auto violates = [&](int i, EliminationStep& step) {
    for (int j : irr.submoments[i])
      if (j != i && !alive[j]) {
        step = {i, EliminationCause::SubmomentRemoved, {}};
        return true;
      }
    bool serial = false;
    for (int j : irr.succ[i])
      if (alive[j]) {
        serial = true;
        break;
      }
    if (!serial) {
      step = {i, EliminationCause::NotSerial, {}};
      return true;
    }
    TypeMask root = irr.moments[i].root_label_mask();
    for (std::size_t e : ev_indices) {
      if (!((root >> e) & 1u)) continue;
      std::size_t body = sigma.at(sigma[e].child());
      // search the alive part reachable from i for a fulfilling root label
      std::vector<bool> seen(n, false);
      std::vector<int> stack{i};
      seen[i] = true;
      bool found = false;
      while (!stack.empty() && !found) {
        int a = stack.back();
        stack.pop_back();
        if ((irr.moments[a].root_label_mask() >> body) & 1u) {
          found = true;
          break;
        }
        for (int b : irr.succ[a])
          if (alive[b] && !seen[b]) {
            seen[b] = true;
            stack.push_back(b);
          }
      }
      if (!found) {
        step = {i, EliminationCause::EventualityUnfulfilled, sigma[e]};
        return true;
      }
    }
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i : scan_order) {
      if (!alive[i]) continue;
      EliminationStep step;
      if (violates(i, step)) {
        alive[i] = false;
        trace.steps.push_back(step);
        changed = true;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (alive[i]) trace.survivors.push_back(i);
  return trace;
}

}  // namespace detail

inline EliminationTrace eliminate(const IrrFrame& irr) {
  std::vector<int> order(irr.moments.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  return detail::eliminate_impl(irr, order);
}

// Scheduling variant: the scan order changes which violations are noticed
// first, the survivor set does not.
inline EliminationTrace eliminate_scheduled(const IrrFrame& irr,
                                            const std::vector<int>& scan_order) {
  return detail::eliminate_impl(irr, scan_order);
}

// ---------------------------------------------------------------------------
// Verdicts.

struct Verdict {
  enum class Status { Valid, Falsifiable, Sat, Unsat };
  Status status;
  std::optional<LabelledStructure> witness;  // surviving structure, a quasimodel
  std::string witness_world;                 // world refuting / satisfying the query
  // Larger irreducible moments exist beyond the node budget.  Falsifiable and
  // Sat verdicts are unaffected (the witness re-validates on its own); a
  // negative verdict means "no witness within the explored sub-frame".
  bool bounded = false;
};

inline const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Valid: return "valid";
    case Verdict::Status::Falsifiable: return "falsifiable";
    case Verdict::Status::Sat: return "satisfiable";
    default: return "unsatisfiable";
  }
}

namespace detail {

// Deepening stops once a frame reaches this many moments; the successor
// relation and the elimination are quadratic in the frame size.
constexpr std::size_t kFrameWorkCap = 1500;

// Iterative deepening over the moment size cap.  Survivor sets only grow
// with the cap (a survivor set certifies itself inside every larger frame),
// so the first refuting survivor settles the query at any depth; a negative
// answer is exact once the frame stops being node-capped and is otherwise
// reported as bounded.
inline Verdict decide_impl(const Formula& f, bool want_positive, MomentBudget budget) {
  if (!is_box_free(f))
    throw std::invalid_argument("the decision procedure handles the henceforth-free fragment only");
  ClosurePtr sigma = closure(f);
  std::size_t fi = sigma->at(f);
  Verdict last{want_positive ? Verdict::Status::Unsat : Verdict::Status::Valid,
               std::nullopt,
               {},
               true};
  bool have_frame = false;
  for (int k = 2; k <= budget.max_nodes; ++k) {
    MomentBudget step{budget.max_moments, k};
    IrrFrame irr = generate_irr(sigma, step);
    if (irr.truncated) {
      if (!have_frame)
        throw BudgetExceeded("moment budget exceeded over " + std::to_string(sigma->size()) +
                             " closure formulas");
      break;
    }
    have_frame = true;
    EliminationTrace trace = eliminate(irr);
    int hit = -1;
    for (int i : trace.survivors) {
      bool pos = (irr.moments[i].root_label_mask() >> fi) & 1u;
      if (pos == want_positive) {
        hit = i;
        break;
      }
    }
    if (hit >= 0) {
      Verdict v{want_positive ? Verdict::Status::Sat : Verdict::Status::Falsifiable,
                std::nullopt,
                "m" + std::to_string(hit),
                false};
      LabelledStructure all = irr.to_structure();
      v.witness = restrict_structure(all, trace.survivors);
      return v;
    }
    last.bounded = irr.node_capped;
    if (!irr.node_capped) return last;  // the frame was all of I_Sigma
    if (irr.moments.size() >= kFrameWorkCap) break;
  }
  return last;
}

}  // namespace detail

inline Verdict decide_valid(const Formula& f, MomentBudget budget = {}) {
  return detail::decide_impl(f, /*want_positive=*/false, budget);
}

inline Verdict decide_sat(const Formula& f, MomentBudget budget = {}) {
  return detail::decide_impl(f, /*want_positive=*/true, budget);
}

// ---------------------------------------------------------------------------
// Independent witness oracle: exhaustive search over labelled structures
// with at most `max_worlds` worlds for a quasimodel refuting f.  `none` only
// means "no witness within the bound".

namespace detail {

// every partial order on n labelled points, as closed bit matrices
inline const std::vector<std::vector<std::vector<bool>>>& all_posets(int n) {
  static std::vector<std::vector<std::vector<std::vector<bool>>>> cache(6);
  auto& slot = cache[n];
  if (!slot.empty()) return slot;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pairs.push_back({a, b});
  const std::size_t m = pairs.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (std::size_t k = 0; k < m; ++k)
      if ((mask >> k) & 1u) leq[pairs[k].first][pairs[k].second] = true;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (a != b && leq[a][b] && leq[b][a]) ok = false;
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

// The union of forward-confluent subrelations of the sensible pairs is
// forward-confluent, so one greatest fixpoint answers whether any successor
// relation can complete the frame: a quasimodel successor exists exactly
// when that largest subrelation is serial and omega-sensible.
inline bool complete_to_quasimodel(const Closure& sigma, const std::vector<std::vector<bool>>& leq,
                                   const std::vector<TypeMask>& label,
                                   std::vector<std::vector<bool>>& succ_out) {
  const int n = static_cast<int>(label.size());
  std::vector<std::vector<bool>> s(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s[a][b] = st_masks(sigma, label[a], label[b]);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!s[a][b]) continue;
        bool ok = true;
        for (int a2 = 0; a2 < n && ok; ++a2) {
          if (!leq[a][a2]) continue;
          bool found = false;
          for (int b2 = 0; b2 < n && !found; ++b2)
            if (leq[b][b2] && s[a2][b2]) found = true;
          ok = found;
        }
        if (!ok) {
          s[a][b] = false;
          changed = true;
        }
      }
  }
  for (int a = 0; a < n; ++a) {
    bool serial = false;
    for (int b = 0; b < n && !serial; ++b) serial = s[a][b];
    if (!serial) return false;
  }
  for (std::size_t e = 0; e < sigma.size(); ++e) {
    if (sigma[e].op() != Op::Eventually) continue;
    std::size_t body = sigma.at(sigma[e].child());
    std::vector<bool> reach(n);
    for (int w = 0; w < n; ++w) reach[w] = (label[w] >> body) & 1u;
    changed = true;
    while (changed) {
      changed = false;
      for (int w = 0; w < n; ++w) {
        if (reach[w]) continue;
        for (int v = 0; v < n; ++v)
          if (s[w][v] && reach[v]) {
            reach[w] = true;
            changed = true;
            break;
          }
      }
    }
    for (int w = 0; w < n; ++w)
      if (((label[w] >> e) & 1u) && !reach[w]) return false;
  }
  succ_out = std::move(s);
  return true;
}

}  // namespace detail

inline std::optional<LabelledStructure> oracle_falsifiable(const Formula& f, int max_worlds) {
  if (!is_box_free(f))
    throw std::invalid_argument("the oracle searches henceforth-free quasimodels");
  if (max_worlds < 1 || max_worlds > 5)
    throw std::invalid_argument("oracle_falsifiable is limited to 1..5 worlds");
  ClosurePtr sigma = closure(f);
  const Closure& sig = *sigma;
  std::vector<TypeMask> types;
  for (const auto& t : enumerate_types(sigma)) types.push_back(t.positive_mask());
  std::size_t fi = sig.at(f);

  detail::ImplicationTable impls(sig);
  std::vector<std::uint64_t> needed(types.size()), provided(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    needed[t] = impls.needed(types[t]);
    provided[t] = impls.provided(types[t]);
  }

  for (int n = 1; n <= max_worlds; ++n) {
    for (const auto& leq : detail::all_posets(n)) {
      // interchangeable worlds (same comparabilities) get sorted type
      // choices; world 0 is pinned to a falsifying label
      std::vector<int> cls(n, -1);
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < i; ++j) {
          if (leq[i][j] || leq[j][i]) continue;
          bool same = true;
          for (int w = 0; w < n && same; ++w) {
            if (w == i || w == j) continue;
            if (leq[i][w] != leq[j][w] || leq[w][i] != leq[w][j]) same = false;
          }
          if (same) {
            cls[i] = j;
            break;
          }
        }
      std::vector<std::size_t> choice(n, 0);
      std::vector<TypeMask> label(n, 0);
      auto assign = [&](auto&& self, int w) -> std::optional<LabelledStructure> {
        if (w == n) {
          // condition (b): refuted implications need witnesses above
          for (int a = 0; a < n; ++a) {
            std::uint64_t need = needed[choice[a]];
            if (!need) continue;
            std::uint64_t have = 0;
            for (int b = 0; b < n; ++b)
              if (leq[a][b]) have |= provided[choice[b]];
            if (need & ~have) return std::nullopt;
          }
          std::vector<std::vector<bool>> succ;
          if (!detail::complete_to_quasimodel(sig, leq, label, succ)) return std::nullopt;
          std::vector<std::string> ids;
          for (int i = 0; i < n; ++i) ids.push_back("w" + std::to_string(i));
          LabelledStructure out(sigma, ids, label);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              if (a != b && leq[a][b]) out.add_order_edge(a, b);
          out.close_order();
          out.ensure_succ();
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              if (succ[a][b]) out.add_succ_edge(a, b);
          return out;
        }
        std::size_t start = 0;
        if (cls[w] >= 0 && cls[w] != 0) start = choice[cls[w]];
        for (std::size_t t = start; t < types.size(); ++t) {
          if (w == 0 && ((types[t] >> fi) & 1u)) continue;  // world 0 refutes f
          bool mono = true;
          for (int v = 0; v < w && mono; ++v) {
            if (leq[v][w] && (label[v] & ~types[t])) mono = false;
            if (leq[w][v] && (types[t] & ~label[v])) mono = false;
          }
          if (!mono) continue;
          choice[w] = t;
          label[w] = types[t];
          if (auto found = self(self, w + 1)) return found;
        }
        return std::nullopt;
      };
      if (auto found = assign(assign, 0)) return found;
    }
  }
  return std::nullopt;
}

}  // namespace itl
