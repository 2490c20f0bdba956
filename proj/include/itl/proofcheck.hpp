#pragma once

// Hilbert-style proof checking for the henceforth-free axiom system:
//
//   A1  all intuitionistic tautologies       R1  from f and f -> g infer g
//   A2  ~ X false                            R2  from f infer X f
//   A3  X f & X g -> X (f & g)               R3  from f -> g infer F f -> F g
//   A4  X (f | g) -> X f | X g               R4  from X f -> f infer F f -> f
//   A5  X (f -> g) -> (X f -> X g)
//   A6  f | X F f -> F f
//
// A1 lines are validated semantically: the modal abstraction of the line
// must be an intuitionistic tautology.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "itl/formula.hpp"
#include "itl/ipc.hpp"

namespace itl {

enum class Rule { A1, A2, A3, A4, A5, A6, MP, Nec, Dist, Ind };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::A1: return "A1";
    case Rule::A2: return "A2";
    case Rule::A3: return "A3";
    case Rule::A4: return "A4";
    case Rule::A5: return "A5";
    case Rule::A6: return "A6";
    case Rule::MP: return "MP";
    case Rule::Nec: return "NEC";
    case Rule::Dist: return "DIST";
    default: return "IND";
  }
}

struct ProofLine {
  int index = 0;
  Rule rule = Rule::A1;
  int ref1 = 0, ref2 = 0;  // rule premises, by line index
  Formula formula;
};

struct Proof {
  std::vector<ProofLine> lines;
  Formula conclusion() const { return lines.back().formula; }
};

// Substitution-instance test for the axiom schemes A2..A6.  A2 is closed;
// the others match their metavariables against arbitrary box-free formulas.
inline bool match_axiom(const Formula& f, Rule scheme) {
  switch (scheme) {
    case Rule::A2:
      // ~ X false  ==  X false -> false
      return f == negation(next(bottom()));
    case Rule::A3: {
      // X a & X b -> X (a & b)
      if (f.op() != Op::Implies) return false;
      Formula l = f.lhs(), r = f.rhs();
      if (l.op() != Op::And || l.lhs().op() != Op::Next || l.rhs().op() != Op::Next)
        return false;
      if (r.op() != Op::Next || r.child().op() != Op::And) return false;
      return r.child().lhs() == l.lhs().child() && r.child().rhs() == l.rhs().child();
    }
    case Rule::A4: {
      // X (a | b) -> X a | X b
      if (f.op() != Op::Implies) return false;
      Formula l = f.lhs(), r = f.rhs();
      if (l.op() != Op::Next || l.child().op() != Op::Or) return false;
      if (r.op() != Op::Or || r.lhs().op() != Op::Next || r.rhs().op() != Op::Next)
        return false;
      return l.child().lhs() == r.lhs().child() && l.child().rhs() == r.rhs().child();
    }
    case Rule::A5: {
      // X (a -> b) -> (X a -> X b)
      if (f.op() != Op::Implies) return false;
      Formula l = f.lhs(), r = f.rhs();
      if (l.op() != Op::Next || l.child().op() != Op::Implies) return false;
      if (r.op() != Op::Implies || r.lhs().op() != Op::Next || r.rhs().op() != Op::Next)
        return false;
      return l.child().lhs() == r.lhs().child() && l.child().rhs() == r.rhs().child();
    }
    case Rule::A6: {
      // a | X F a -> F a
      if (f.op() != Op::Implies) return false;
      Formula l = f.lhs(), r = f.rhs();
      if (r.op() != Op::Eventually) return false;
      Formula a = r.child();
      if (l.op() != Op::Or || l.lhs() != a) return false;
      return l.rhs() == next(eventually(a));
    }
    default:
      throw std::invalid_argument("match_axiom covers the schemes A2..A6");
  }
}

struct ProofError {
  int line;  // 1-based index of the offending line
  std::string reason;
};

// Checks rule applications and axiom instances line by line; the first
// failing line is reported.  All formulas must be box-free and premise
// references must point strictly backwards.
inline std::optional<ProofError> check_proof(const Proof& p) {
  if (p.lines.empty()) return ProofError{0, "empty proof"};
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const ProofLine& ln = p.lines[i];
    int expected = static_cast<int>(i) + 1;
    if (ln.index != expected)
      return ProofError{ln.index, "line indices must run 1.." +
                                      std::to_string(p.lines.size()) + " contiguously"};
    if (!is_box_free(ln.formula))
      return ProofError{ln.index, "henceforth is outside the proof system"};
    auto premise = [&](int ref) -> std::optional<Formula> {
      if (ref < 1 || ref >= ln.index) return std::nullopt;
      return p.lines[ref - 1].formula;
    };
    switch (ln.rule) {
      case Rule::A1: {
        Abstraction abs = abstract_modal_atoms(ln.formula);
        if (!ipc_valid(abs.skeleton))
          return ProofError{ln.index,
                            "A1: modal abstraction " + render(abs.skeleton) +
                                " is not an intuitionistic tautology"};
        break;
      }
      case Rule::A2:
      case Rule::A3:
      case Rule::A4:
      case Rule::A5:
      case Rule::A6:
        if (!match_axiom(ln.formula, ln.rule))
          return ProofError{ln.index, std::string("not an instance of scheme ") +
                                          to_string(ln.rule)};
        break;
      case Rule::MP: {
        auto a = premise(ln.ref1), b = premise(ln.ref2);
        if (!a || !b) return ProofError{ln.index, "MP: bad premise reference"};
        if (b->op() != Op::Implies || b->lhs() != *a || b->rhs() != ln.formula)
          return ProofError{ln.index, "MP: line " + std::to_string(ln.ref2) +
                                          " is not (line " + std::to_string(ln.ref1) +
                                          " -> this line)"};
        break;
      }
      case Rule::Nec: {
        auto a = premise(ln.ref1);
        if (!a) return ProofError{ln.index, "NEC: bad premise reference"};
        if (ln.formula != next(*a))
          return ProofError{ln.index, "NEC: this line must be X (line " +
                                          std::to_string(ln.ref1) + ")"};
        break;
      }
      case Rule::Dist: {
        auto a = premise(ln.ref1);
        if (!a) return ProofError{ln.index, "DIST: bad premise reference"};
        if (a->op() != Op::Implies)
          return ProofError{ln.index, "DIST: premise must be an implication"};
        if (ln.formula != implies(eventually(a->lhs()), eventually(a->rhs())))
          return ProofError{ln.index, "DIST: this line must be F lhs -> F rhs of line " +
                                          std::to_string(ln.ref1)};
        break;
      }
      case Rule::Ind: {
        auto a = premise(ln.ref1);
        if (!a) return ProofError{ln.index, "IND: bad premise reference"};
        if (a->op() != Op::Implies || a->lhs().op() != Op::Next ||
            a->lhs().child() != a->rhs())
          return ProofError{ln.index, "IND: premise must have shape X f -> f"};
        if (ln.formula != implies(eventually(a->rhs()), a->rhs()))
          return ProofError{ln.index, "IND: this line must be F f -> f"};
        break;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proof files: `<index> <justification> <formula>` per line, justification
// one of A1..A6, `MP i j`, `NEC i`, `DIST i`, `IND i`; '#' comments.

struct ProofParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Proof parse_proof(const std::string& text) {
  Proof p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    ProofLine pl;
    if (!(ls >> pl.index)) continue;  // blank
    std::string just;
    if (!(ls >> just))
      throw ProofParseError("proof line " + std::to_string(lineno) + ": missing justification");
    if (just == "A1") pl.rule = Rule::A1;
    else if (just == "A2") pl.rule = Rule::A2;
    else if (just == "A3") pl.rule = Rule::A3;
    else if (just == "A4") pl.rule = Rule::A4;
    else if (just == "A5") pl.rule = Rule::A5;
    else if (just == "A6") pl.rule = Rule::A6;
    else if (just == "MP") pl.rule = Rule::MP;
    else if (just == "NEC") pl.rule = Rule::Nec;
    else if (just == "DIST") pl.rule = Rule::Dist;
    else if (just == "IND") pl.rule = Rule::Ind;
    else
      throw ProofParseError("proof line " + std::to_string(lineno) +
                            ": unknown justification " + just);
    if (pl.rule == Rule::MP) {
      if (!(ls >> pl.ref1 >> pl.ref2))
        throw ProofParseError("proof line " + std::to_string(lineno) + ": MP needs two refs");
    } else if (pl.rule == Rule::Nec || pl.rule == Rule::Dist || pl.rule == Rule::Ind) {
      if (!(ls >> pl.ref1))
        throw ProofParseError("proof line " + std::to_string(lineno) + ": rule needs a ref");
    }
    std::string rest;
    std::getline(ls, rest);
    try {
      pl.formula = parse_formula(rest);
    } catch (const ParseError& e) {
      throw ProofParseError("proof line " + std::to_string(lineno) + ": " + e.what());
    }
    p.lines.push_back(pl);
  }
  if (p.lines.empty()) throw ProofParseError("proof file contains no lines");
  return p;
}

}  // namespace itl
