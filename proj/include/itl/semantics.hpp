#pragma once

// Finite expanding posets with a monotone valuation, satisfaction for the
// full language (including henceforth), model validity, and the two-sided
// truth labelling of a model.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/structures.hpp"
#include "itl/typesys.hpp"

namespace itl {

class Model {
 public:
  Model(std::vector<std::string> world_ids, std::vector<std::vector<bool>> order,
        std::vector<int> succ, std::vector<std::set<std::string>> valuation)
      : ids_(std::move(world_ids)),
        leq_(std::move(order)),
        succ_(std::move(succ)),
        val_(std::move(valuation)) {}

  std::size_t world_count() const { return ids_.size(); }
  const std::string& world_id(int w) const { return ids_[w]; }
  std::optional<int> world_index(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (ids_[i] == id) return static_cast<int>(i);
    return std::nullopt;
  }
  bool leq(int a, int b) const { return leq_[a][b]; }
  int succ(int w) const { return succ_[w]; }
  bool holds_atom(int w, const std::string& atom) const { return val_[w].count(atom) != 0; }
  const std::set<std::string>& valuation(int w) const { return val_[w]; }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<bool>> leq_;
  std::vector<int> succ_;
  std::vector<std::set<std::string>> val_;
};

// ---------------------------------------------------------------------------
// Building and validating models.
//
// Raw description: declared worlds, generating order edges, successor pairs,
// and per-world atom sets.  The order is closed reflexively-transitively
// here; all violated conditions are reported together.

struct RawModel {
  std::vector<std::string> worlds;
  std::vector<std::pair<std::string, std::string>> order;  // generating edges
  std::vector<std::pair<std::string, std::string>> succ;
  std::map<std::string, std::set<std::string>> valuation;
};

struct ModelResult {
  std::optional<Model> model;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

inline ModelResult validate_model(const RawModel& raw) {
  ModelResult out;
  if (raw.worlds.empty()) {
    out.errors.push_back("a model needs at least one world");
    return out;
  }
  std::map<std::string, int> byid;
  for (const auto& w : raw.worlds) {
    if (byid.count(w)) out.errors.push_back("duplicate world " + w);
    byid.emplace(w, static_cast<int>(byid.size()));
  }
  auto lookup = [&](const std::string& id) -> std::optional<int> {
    auto it = byid.find(id);
    if (it == byid.end()) {
      out.errors.push_back("unknown world " + id);
      return std::nullopt;
    }
    return it->second;
  };
  const std::size_t n = raw.worlds.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [a, b] : raw.order) {
    auto ia = lookup(a), ib = lookup(b);
    if (ia && ib) leq[*ia][*ib] = true;
  }
  if (!out.errors.empty()) return out;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i])
        out.errors.push_back("order is not antisymmetric: " + raw.worlds[i] + " and " +
                             raw.worlds[j] + " form a cycle");

  std::vector<int> succ(n, -1);
  for (const auto& [a, b] : raw.succ) {
    auto ia = lookup(a), ib = lookup(b);
    if (!ia || !ib) continue;
    if (succ[*ia] != -1)
      out.errors.push_back("successor of " + a + " declared twice");
    else
      succ[*ia] = *ib;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (succ[i] == -1)
      out.errors.push_back("world " + raw.worlds[i] + " has no successor");

  std::vector<std::set<std::string>> val(n);
  for (const auto& [w, atoms] : raw.valuation) {
    auto iw = lookup(w);
    if (iw) val[*iw] = atoms;
  }
  if (!out.errors.empty()) return out;

  // forward confluence and monotone valuation need the closed order
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!leq[a][b]) continue;
      if (!leq[succ[a]][succ[b]])
        out.errors.push_back("forward confluence fails: " + raw.worlds[a] + " <= " +
                             raw.worlds[b] + " but S(" + raw.worlds[a] + ") !<= S(" +
                             raw.worlds[b] + ")");
      for (const auto& atom : val[a])
        if (!val[b].count(atom)) {
          out.errors.push_back("valuation not monotone: " + atom + " holds at " +
                               raw.worlds[a] + " but not at " + raw.worlds[b] + " above it");
          break;
        }
    }
  if (!out.errors.empty()) return out;
  out.model.emplace(raw.worlds, std::move(leq), std::move(succ), std::move(val));
  return out;
}

// ---------------------------------------------------------------------------
// Satisfaction.  Truth sets are computed per subformula in closure order;
// next/eventually/henceforth run over the functional successor graph, whose
// orbits are finite, by backward closure rather than unrolling.

inline std::vector<std::vector<bool>> truth_table(const Model& m, const Closure& sigma) {
  const int n = static_cast<int>(m.world_count());
  std::vector<std::vector<bool>> truth(sigma.size(), std::vector<bool>(n, false));
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Formula& f = sigma[i];
    auto& row = truth[i];
    switch (f.op()) {
      case Op::Bottom:
        break;
      case Op::Atom:
        for (int w = 0; w < n; ++w) row[w] = m.holds_atom(w, f.atom_name());
        break;
      case Op::And: {
        const auto& l = truth[sigma.at(f.lhs())];
        const auto& r = truth[sigma.at(f.rhs())];
        for (int w = 0; w < n; ++w) row[w] = l[w] && r[w];
        break;
      }
      case Op::Or: {
        const auto& l = truth[sigma.at(f.lhs())];
        const auto& r = truth[sigma.at(f.rhs())];
        for (int w = 0; w < n; ++w) row[w] = l[w] || r[w];
        break;
      }
      case Op::Implies: {
        const auto& l = truth[sigma.at(f.lhs())];
        const auto& r = truth[sigma.at(f.rhs())];
        for (int w = 0; w < n; ++w) {
          bool ok = true;
          for (int v = 0; v < n && ok; ++v)
            if (m.leq(w, v) && l[v] && !r[v]) ok = false;
          row[w] = ok;
        }
        break;
      }
      case Op::Next: {
        const auto& c = truth[sigma.at(f.child())];
        for (int w = 0; w < n; ++w) row[w] = c[m.succ(w)];
        break;
      }
      case Op::Eventually: {
        const auto& c = truth[sigma.at(f.child())];
        row = c;
        bool changed = true;
        while (changed) {
          changed = false;
          for (int w = 0; w < n; ++w)
            if (!row[w] && row[m.succ(w)]) {
              row[w] = true;
              changed = true;
            }
        }
        break;
      }
      case Op::Henceforth: {
        const auto& c = truth[sigma.at(f.child())];
        row = c;
        bool changed = true;
        while (changed) {
          changed = false;
          for (int w = 0; w < n; ++w)
            if (row[w] && !row[m.succ(w)]) {
              row[w] = false;
              changed = true;
            }
        }
        break;
      }
    }
  }
  return truth;
}

inline bool eval(const Model& m, int w, const Formula& f) {
  if (w < 0 || static_cast<std::size_t>(w) >= m.world_count())
    throw std::invalid_argument("eval: unknown world");
  ClosurePtr sigma = closure(f);
  auto truth = truth_table(m, *sigma);
  return truth[sigma->at(f)][w];
}

inline bool model_valid(const Model& m, const Formula& f) {
  ClosurePtr sigma = closure(f);
  auto truth = truth_table(m, *sigma);
  const auto& row = truth[sigma->at(f)];
  return std::all_of(row.begin(), row.end(), [](bool b) { return b; });
}

// The two-sided labelling of a model: positive part = what holds.  The
// result carries the model's order and the graph of its successor function.
inline LabelledStructure truth_labelling(const Model& m, const ClosurePtr& sigma) {
  auto truth = truth_table(m, *sigma);
  const int n = static_cast<int>(m.world_count());
  std::vector<std::string> ids;
  std::vector<TypeMask> labels(n, 0);
  for (int w = 0; w < n; ++w) {
    ids.push_back(m.world_id(w));
    for (std::size_t i = 0; i < sigma->size(); ++i)
      if (truth[i][w]) labels[w] |= TypeMask{1} << i;
  }
  LabelledStructure out(sigma, std::move(ids), std::move(labels));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (m.leq(a, b) && a != b) out.add_order_edge(a, b);
  out.close_order();
  out.ensure_succ();
  for (int w = 0; w < n; ++w) out.add_succ_edge(w, m.succ(w));
  return out;
}

// ---------------------------------------------------------------------------
// Model files: `world <id>`, `order <id> <id>`, `succ <id> <id>`,
// `val <id> <atom>...`; '#' comments.

inline RawModel parse_raw_model(const std::string& text) {
  RawModel raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "world") {
      std::string id;
      if (!(ls >> id))
        throw StructureParseError("model file line " + std::to_string(lineno) +
                                  ": world needs an identifier");
      raw.worlds.push_back(id);
    } else if (kw == "order" || kw == "succ") {
      std::string a, b;
      if (!(ls >> a >> b))
        throw StructureParseError("model file line " + std::to_string(lineno) + ": " + kw +
                                  " needs two world identifiers");
      (kw == "order" ? raw.order : raw.succ).push_back({a, b});
    } else if (kw == "val") {
      std::string id, atom;
      if (!(ls >> id))
        throw StructureParseError("model file line " + std::to_string(lineno) +
                                  ": val needs a world identifier");
      while (ls >> atom) raw.valuation[id].insert(atom);
    } else {
      throw StructureParseError("model file line " + std::to_string(lineno) +
                                ": unknown keyword " + kw);
    }
  }
  return raw;
}

}  // namespace itl
