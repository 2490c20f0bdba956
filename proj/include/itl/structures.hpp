#pragma once

// Labelled structures: worlds with a partial order, a two-sided type per
// world, and an optional successor relation.  Covers labelled frames, weak
// quasimodels and quasimodels; provides classification, restriction and
// falsification queries plus a line-oriented file format.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/typesys.hpp"

namespace itl {

enum class StructureClass { Frame, WeakQuasimodel, Quasimodel };

inline const char* to_string(StructureClass c) {
  switch (c) {
    case StructureClass::Frame: return "frame";
    case StructureClass::WeakQuasimodel: return "weak_quasimodel";
    default: return "quasimodel";
  }
}

class LabelledStructure {
 public:
  LabelledStructure(ClosurePtr sigma, std::vector<std::string> world_ids,
                    std::vector<TypeMask> labels)
      : sigma_(std::move(sigma)),
        ids_(std::move(world_ids)),
        labels_(std::move(labels)),
        leq_(ids_.size(), std::vector<bool>(ids_.size(), false)) {
    for (std::size_t w = 0; w < ids_.size(); ++w) leq_[w][w] = true;
  }

  const ClosurePtr& sigma() const { return sigma_; }
  std::size_t world_count() const { return ids_.size(); }
  const std::string& world_id(int w) const { return ids_[w]; }
  std::optional<int> world_index(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (ids_[i] == id) return static_cast<int>(i);
    return std::nullopt;
  }

  TypeMask label_mask(int w) const { return labels_[w]; }
  TwoSidedType label(int w) const { return TwoSidedType(sigma_, labels_[w]); }

  bool leq(int a, int b) const { return leq_[a][b]; }
  // Declare a generating order edge; call close_order() afterwards.
  void add_order_edge(int a, int b) { leq_[a][b] = true; }

  // Reflexive-transitive closure; returns a witnessing pair on an
  // antisymmetry violation.
  std::optional<std::pair<int, int>> close_order() {
    const std::size_t n = ids_.size();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (leq_[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq_[k][j]) leq_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (leq_[i][j] && leq_[j][i]) return std::make_pair(int(i), int(j));
    return std::nullopt;
  }

  bool has_succ() const { return succ_.has_value(); }
  void ensure_succ() {
    if (!succ_) succ_.emplace(ids_.size());
  }
  void add_succ_edge(int a, int b) {
    ensure_succ();
    auto& row = (*succ_)[a];
    if (std::find(row.begin(), row.end(), b) == row.end()) row.push_back(b);
  }
  const std::vector<int>& succ(int w) const { return (*succ_)[w]; }

  std::vector<int> up_set(int w) const {
    std::vector<int> out;
    for (std::size_t v = 0; v < ids_.size(); ++v)
      if (leq_[w][v]) out.push_back(static_cast<int>(v));
    return out;
  }

 private:
  ClosurePtr sigma_;
  std::vector<std::string> ids_;
  std::vector<TypeMask> labels_;
  std::vector<std::vector<bool>> leq_;
  std::optional<std::vector<std::vector<int>>> succ_;
};

// ---------------------------------------------------------------------------
// Frame validation: (a) labels grow along the order, (b) every refuted
// implication has a witness above.

inline std::vector<std::string> validate_frame(const LabelledStructure& x) {
  std::vector<std::string> errors;
  const Closure& sigma = *x.sigma();
  const std::size_t n = x.world_count();
  for (std::size_t w = 0; w < n; ++w) {
    if (!detail::valid_type_mask(sigma, x.label_mask(static_cast<int>(w))))
      errors.push_back("label of world " + x.world_id(static_cast<int>(w)) +
                       " is not a two-sided type");
  }
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v = 0; v < n; ++v)
      if (x.leq(static_cast<int>(w), static_cast<int>(v)) &&
          (x.label_mask(static_cast<int>(w)) & ~x.label_mask(static_cast<int>(v))) != 0)
        errors.push_back("condition (a): label of " + x.world_id(static_cast<int>(w)) +
                         " is not below label of " + x.world_id(static_cast<int>(v)));
  for (std::size_t w = 0; w < n; ++w) {
    TypeMask lw = x.label_mask(static_cast<int>(w));
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const Formula& f = sigma[i];
      if (f.op() != Op::Implies || ((lw >> i) & 1u)) continue;
      std::size_t li = sigma.at(f.lhs()), ri = sigma.at(f.rhs());
      bool witnessed = false;
      for (std::size_t v = 0; v < n && !witnessed; ++v) {
        if (!x.leq(static_cast<int>(w), static_cast<int>(v))) continue;
        TypeMask lv = x.label_mask(static_cast<int>(v));
        if (((lv >> li) & 1u) && !((lv >> ri) & 1u)) witnessed = true;
      }
      if (!witnessed)
        errors.push_back("condition (b): " + render(f) + " refuted at " +
                         x.world_id(static_cast<int>(w)) + " has no witness above");
    }
  }
  return errors;
}

// ---------------------------------------------------------------------------
// Classification.

struct Classification {
  StructureClass cls = StructureClass::Frame;
  std::string diagnostic;  // first failing world/pair/eventuality
};

inline Classification classify(const LabelledStructure& x) {
  Classification out;
  if (!x.has_succ()) {
    out.diagnostic = "no successor relation";
    return out;
  }
  const Closure& sigma = *x.sigma();
  const int n = static_cast<int>(x.world_count());
  // sensible: every edge respects the compatibility relation
  for (int w = 0; w < n; ++w)
    for (int v : x.succ(w))
      if (!detail::st_masks(sigma, x.label_mask(w), x.label_mask(v))) {
        out.diagnostic = "not sensible: edge " + x.world_id(w) + " -> " + x.world_id(v);
        return out;
      }
  // forward-confluent: w <= w', w S v  ==>  some v' >= v with w' S v'
  for (int w = 0; w < n; ++w)
    for (int w2 = 0; w2 < n; ++w2) {
      if (!x.leq(w, w2)) continue;
      for (int v : x.succ(w)) {
        bool ok = false;
        for (int v2 : x.succ(w2))
          if (x.leq(v, v2)) {
            ok = true;
            break;
          }
        if (!ok) {
          out.diagnostic = "not forward-confluent at " + x.world_id(w) + " <= " +
                           x.world_id(w2) + " with successor " + x.world_id(v);
          return out;
        }
      }
    }
  out.cls = StructureClass::WeakQuasimodel;
  // serial
  for (int w = 0; w < n; ++w)
    if (x.succ(w).empty()) {
      out.diagnostic = "not serial: world " + x.world_id(w) + " has no successor";
      return out;
    }
  // omega-sensible: per eventuality, backward closure of the fulfilling set
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i].op() != Op::Eventually) continue;
    std::size_t body = sigma.at(sigma[i].child());
    std::vector<bool> can_reach(n, false);
    for (int w = 0; w < n; ++w) can_reach[w] = (x.label_mask(w) >> body) & 1u;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int w = 0; w < n; ++w) {
        if (can_reach[w]) continue;
        for (int v : x.succ(w))
          if (can_reach[v]) {
            can_reach[w] = true;
            changed = true;
            break;
          }
      }
    }
    for (int w = 0; w < n; ++w)
      if (((x.label_mask(w) >> i) & 1u) && !can_reach[w]) {
        out.diagnostic = "not omega-sensible: " + render(sigma[i]) + " at " +
                         x.world_id(w) + " is never fulfilled";
        return out;
      }
  }
  out.cls = StructureClass::Quasimodel;
  return out;
}

// ---------------------------------------------------------------------------
// Restriction to a world subset (indices into x).

inline LabelledStructure restrict_structure(const LabelledStructure& x,
                                            const std::vector<int>& worlds) {
  if (worlds.empty()) throw std::invalid_argument("restriction to an empty world set");
  std::vector<int> u = worlds;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  std::vector<std::string> ids;
  std::vector<TypeMask> labels;
  for (int w : u) {
    ids.push_back(x.world_id(w));
    labels.push_back(x.label_mask(w));
  }
  LabelledStructure out(x.sigma(), std::move(ids), std::move(labels));
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = 0; b < u.size(); ++b)
      if (x.leq(u[a], u[b])) out.add_order_edge(static_cast<int>(a), static_cast<int>(b));
  out.close_order();  // restriction of a partial order stays one
  if (x.has_succ()) {
    out.ensure_succ();
    for (std::size_t a = 0; a < u.size(); ++a)
      for (int v : x.succ(u[a])) {
        auto it = std::lower_bound(u.begin(), u.end(), v);
        if (it != u.end() && *it == v)
          out.add_succ_edge(static_cast<int>(a), static_cast<int>(it - u.begin()));
      }
  }
  return out;
}

// Worlds refuting f (f must belong to the closure).
inline std::vector<int> falsifying_worlds(const LabelledStructure& x, const Formula& f) {
  std::size_t i = x.sigma()->at(f);
  std::vector<int> out;
  for (std::size_t w = 0; w < x.world_count(); ++w)
    if (!((x.label_mask(static_cast<int>(w)) >> i) & 1u)) out.push_back(static_cast<int>(w));
  return out;
}

// ---------------------------------------------------------------------------
// Structure files.
//
//   sigma <formula> ; <formula> ; ...
//   world <id>
//   order <id> <id>
//   succ <id> <id>
//   label+ <id> <formula>
//   label- <id> <formula>
//
// '#' starts a comment.  Labels must partition the closure for every world.

struct StructureParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline LabelledStructure parse_structure(const std::string& text) {
  std::vector<Formula> sigma_forms;
  std::vector<std::string> ids;
  std::map<std::string, int> byid;
  struct Edge {
    std::string a, b;
  };
  std::vector<Edge> order_edges, succ_edges;
  bool any_succ_line = false;
  struct LabelLine {
    std::string id;
    Formula f;
    bool pos;
  };
  std::vector<LabelLine> label_lines;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw StructureParseError("structure file line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "sigma") {
      std::string rest;
      std::getline(ls, rest);
      std::size_t start = 0;
      while (start <= rest.size()) {
        std::size_t semi = rest.find(';', start);
        std::string part = rest.substr(start, semi == std::string::npos ? std::string::npos
                                                                        : semi - start);
        bool blank = part.find_first_not_of(" \t") == std::string::npos;
        if (!blank) {
          try {
            sigma_forms.push_back(parse_formula(part));
          } catch (const ParseError& e) {
            fail(std::string("bad sigma formula: ") + e.what());
          }
        }
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
    } else if (kw == "world") {
      std::string id;
      if (!(ls >> id)) fail("world needs an identifier");
      if (byid.count(id)) fail("duplicate world " + id);
      byid[id] = static_cast<int>(ids.size());
      ids.push_back(id);
    } else if (kw == "order" || kw == "succ") {
      std::string a, b;
      if (!(ls >> a >> b)) fail(kw + " needs two world identifiers");
      if (!byid.count(a)) fail("unknown world " + a);
      if (!byid.count(b)) fail("unknown world " + b);
      if (kw == "order")
        order_edges.push_back({a, b});
      else {
        succ_edges.push_back({a, b});
        any_succ_line = true;
      }
    } else if (kw == "label+" || kw == "label-") {
      std::string id;
      if (!(ls >> id)) fail(kw + " needs a world identifier");
      if (!byid.count(id)) fail("unknown world " + id);
      std::string rest;
      std::getline(ls, rest);
      try {
        label_lines.push_back({id, parse_formula(rest), kw == "label+"});
      } catch (const ParseError& e) {
        fail(std::string("bad label formula: ") + e.what());
      }
    } else {
      fail("unknown keyword " + kw);
    }
  }
  if (ids.empty()) throw StructureParseError("structure file declares no worlds");
  ClosurePtr sigma = closure_of(sigma_forms);
  if (sigma->size() == 0) throw StructureParseError("structure file declares no sigma");
  // Assemble label masks and check that every world's labels partition sigma.
  std::vector<TypeMask> pos(ids.size(), 0), seen(ids.size(), 0);
  for (const auto& ll : label_lines) {
    auto idx = sigma->index_of(ll.f);
    if (!idx)
      throw StructureParseError("label formula " + render(ll.f) + " is not in sigma");
    int w = byid[ll.id];
    TypeMask bit = TypeMask{1} << *idx;
    if (seen[w] & bit)
      throw StructureParseError("world " + ll.id + " labels " + render(ll.f) + " twice");
    seen[w] |= bit;
    if (ll.pos) pos[w] |= bit;
  }
  TypeMask full = sigma->size() >= 64 ? ~TypeMask{0}
                                      : ((TypeMask{1} << sigma->size()) - 1);
  for (std::size_t w = 0; w < ids.size(); ++w)
    if (seen[w] != full)
      throw StructureParseError("labels of world " + ids[w] +
                                " do not cover sigma exactly");
  LabelledStructure out(sigma, ids, pos);
  for (const auto& e : order_edges) out.add_order_edge(byid[e.a], byid[e.b]);
  if (auto bad = out.close_order())
    throw StructureParseError("order is not antisymmetric: " + ids[bad->first] +
                              " and " + ids[bad->second] + " form a cycle");
  if (any_succ_line) {
    out.ensure_succ();
    for (const auto& e : succ_edges) out.add_succ_edge(byid[e.a], byid[e.b]);
  }
  return out;
}

inline std::string dump_structure(const LabelledStructure& x) {
  std::ostringstream out;
  const Closure& sigma = *x.sigma();
  out << "sigma";
  for (std::size_t i = 0; i < sigma.size(); ++i)
    out << (i == 0 ? " " : " ; ") << render(sigma[i]);
  out << "\n";
  const int n = static_cast<int>(x.world_count());
  for (int w = 0; w < n; ++w) out << "world " << x.world_id(w) << "\n";
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if (w != v && x.leq(w, v)) out << "order " << x.world_id(w) << " " << x.world_id(v) << "\n";
  if (x.has_succ())
    for (int w = 0; w < n; ++w)
      for (int v : x.succ(w)) out << "succ " << x.world_id(w) << " " << x.world_id(v) << "\n";
  for (int w = 0; w < n; ++w) {
    for (std::size_t i = 0; i < sigma.size(); ++i)
      out << (((x.label_mask(w) >> i) & 1u) ? "label+ " : "label- ") << x.world_id(w)
          << " " << render(sigma[i]) << "\n";
  }
  return out.str();
}

}  // namespace itl
