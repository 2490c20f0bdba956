#pragma once

// Abstract syntax, parsing, printing and closure computation for the
// temporal-intuitionistic language: bottom, atoms, &, |, ->, X (next),
// F (eventually), G (henceforth).  Negation, truth and <-> are sugar and
// are desugared on construction:  ~a = a -> false,  true = false -> false,
// a <-> b = (a -> b) & (b -> a).

#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace itl {

enum class Op : std::uint8_t {
  Bottom,
  Atom,
  And,
  Or,
  Implies,
  Next,
  Eventually,
  Henceforth,
};

// Immutable shared formula tree with structural equality.
class Formula {
 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Op op;
    std::string name;  // atoms only
    NodePtr lhs, rhs;  // unary connectives use lhs
    std::size_t hash = 0;
  };

 public:
  Formula() = default;

  Op op() const { return node_->op; }
  const std::string& atom_name() const { return node_->name; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  Formula child() const { return Formula(node_->lhs); }

  bool is_binary() const {
    Op o = op();
    return o == Op::And || o == Op::Or || o == Op::Implies;
  }
  bool is_unary() const {
    Op o = op();
    return o == Op::Next || o == Op::Eventually || o == Op::Henceforth;
  }
  bool valid() const { return node_ != nullptr; }

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return node_equal(a.node_, b.node_);
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  friend Formula bottom();
  friend Formula atom(std::string name);
  friend Formula conj(Formula l, Formula r);
  friend Formula disj(Formula l, Formula r);
  friend Formula implies(Formula l, Formula r);
  friend Formula next(Formula f);
  friend Formula eventually(Formula f);
  friend Formula henceforth(Formula f);

 private:
  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static std::size_t mix(std::size_t h, std::size_t v) {
    return h * 1000003u ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }

  static Formula make(Op op, std::string name, Formula l, Formula r) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->name = std::move(name);
    n->lhs = l.node_;
    n->rhs = r.node_;
    std::size_t h = static_cast<std::size_t>(op) + 0x51ed2701;
    if (op == Op::Atom) h = mix(h, std::hash<std::string>{}(n->name));
    if (n->lhs) h = mix(h, n->lhs->hash);
    if (n->rhs) h = mix(h, n->rhs->hash);
    n->hash = h;
    return Formula(std::move(n));
  }

  static bool node_equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->op != b->op) return false;
    switch (a->op) {
      case Op::Bottom: return true;
      case Op::Atom: return a->name == b->name;
      case Op::And:
      case Op::Or:
      case Op::Implies: return node_equal(a->lhs, b->lhs) && node_equal(a->rhs, b->rhs);
      default: return node_equal(a->lhs, b->lhs);
    }
  }

  NodePtr node_;
};

inline Formula bottom() {
  static const Formula f = Formula::make(Op::Bottom, {}, {}, {});
  return f;
}
inline Formula atom(std::string name) {
  return Formula::make(Op::Atom, std::move(name), {}, {});
}
inline Formula conj(Formula l, Formula r) {
  return Formula::make(Op::And, {}, std::move(l), std::move(r));
}
inline Formula disj(Formula l, Formula r) {
  return Formula::make(Op::Or, {}, std::move(l), std::move(r));
}
inline Formula implies(Formula l, Formula r) {
  return Formula::make(Op::Implies, {}, std::move(l), std::move(r));
}
inline Formula next(Formula f) { return Formula::make(Op::Next, {}, std::move(f), {}); }
inline Formula eventually(Formula f) {
  return Formula::make(Op::Eventually, {}, std::move(f), {});
}
inline Formula henceforth(Formula f) {
  return Formula::make(Op::Henceforth, {}, std::move(f), {});
}

// Sugar.
inline Formula truth() { return implies(bottom(), bottom()); }
inline Formula negation(Formula f) { return implies(std::move(f), bottom()); }
inline Formula iff(Formula l, Formula r) {
  return conj(implies(l, r), implies(r, l));
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

inline bool is_box_free(const Formula& f) {
  switch (f.op()) {
    case Op::Henceforth: return false;
    case Op::Bottom:
    case Op::Atom: return true;
    case Op::And:
    case Op::Or:
    case Op::Implies: return is_box_free(f.lhs()) && is_box_free(f.rhs());
    default: return is_box_free(f.child());
  }
}

// A finite subformula-closed set with a fixed iteration order: subformulas
// always precede superformulas, and member indices are stable.
class Closure {
 public:
  std::size_t size() const { return items_.size(); }
  const Formula& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Formula>& items() const { return items_; }

  bool contains(const Formula& f) const { return index_.count(f) != 0; }
  std::optional<std::size_t> index_of(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  // Index lookup that throws on missing members.
  std::size_t at(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) throw std::invalid_argument("formula not in closure: " + describe(f));
    return it->second;
  }

  bool box_free() const {
    for (const auto& f : items_)
      if (f.op() == Op::Henceforth) return false;
    return true;
  }

  // Set inclusion as formula sets.
  bool subset_of(const Closure& other) const {
    if (size() > other.size()) return false;
    for (const auto& f : items_)
      if (!other.contains(f)) return false;
    return true;
  }

  friend bool operator==(const Closure& a, const Closure& b) {
    return a.items_ == b.items_;
  }
  friend bool operator!=(const Closure& a, const Closure& b) { return !(a == b); }

  void add_with_subformulas(const Formula& f) {
    if (contains(f)) return;
    switch (f.op()) {
      case Op::And:
      case Op::Or:
      case Op::Implies:
        add_with_subformulas(f.lhs());
        add_with_subformulas(f.rhs());
        break;
      case Op::Next:
      case Op::Eventually:
      case Op::Henceforth:
        add_with_subformulas(f.child());
        break;
      default: break;
    }
    index_.emplace(f, items_.size());
    items_.push_back(f);
  }

 private:
  static std::string describe(const Formula& f);  // defined after render()

  std::vector<Formula> items_;
  std::unordered_map<Formula, std::size_t, FormulaHash> index_;
};

using ClosurePtr = std::shared_ptr<const Closure>;

inline ClosurePtr closure_of(const std::vector<Formula>& fs) {
  auto c = std::make_shared<Closure>();
  for (const auto& f : fs) c->add_with_subformulas(f);
  return c;
}
inline ClosurePtr closure(const Formula& f) { return closure_of({f}); }

// ---------------------------------------------------------------------------
// Printing.  Minimal parentheses under the precedence
//   ->  (loosest, right-assoc)  <  |  <  &  <  unary X F G  (tightest);
// & and | associate to the left.  The only re-sugared form is
// false -> false, printed "true"; everything else prints its constructor.

namespace detail {

inline void render_rec(const Formula& f, int level, std::string& out) {
  // level: minimum precedence the context requires without parentheses.
  static const Formula top_formula = truth();
  int mine;
  std::string s;
  if (f == top_formula) {
    out += "true";
    return;
  }
  switch (f.op()) {
    case Op::Bottom: out += "false"; return;
    case Op::Atom: out += f.atom_name(); return;
    case Op::Implies: mine = 0; break;
    case Op::Or: mine = 1; break;
    case Op::And: mine = 2; break;
    default: mine = 3; break;
  }
  bool parens = mine < level;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::Implies:
      render_rec(f.lhs(), 1, out);
      out += " -> ";
      render_rec(f.rhs(), 0, out);
      break;
    case Op::Or:
      render_rec(f.lhs(), 1, out);
      out += " | ";
      render_rec(f.rhs(), 2, out);
      break;
    case Op::And:
      render_rec(f.lhs(), 2, out);
      out += " & ";
      render_rec(f.rhs(), 3, out);
      break;
    case Op::Next:
      out += "X ";
      render_rec(f.child(), 3, out);
      break;
    case Op::Eventually:
      out += "F ";
      render_rec(f.child(), 3, out);
      break;
    case Op::Henceforth:
      out += "G ";
      render_rec(f.child(), 3, out);
      break;
    default: break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_rec(f, 0, out);
  return out;
}

inline std::string Closure::describe(const Formula& f) { return render(f); }

// ---------------------------------------------------------------------------
// Parsing.

struct ParseError : std::runtime_error {
  int line;
  int column;
  std::vector<std::string> expected;

  ParseError(int ln, int col, const std::string& what, std::vector<std::string> exp)
      : std::runtime_error("parse error at " + std::to_string(ln) + ":" +
                           std::to_string(col) + ": " + what),
        line(ln),
        column(col),
        expected(std::move(exp)) {}
};

namespace detail {

enum class Tok { End, Atom, False, True, Next, Ev, Hence, Not, And, Or, Imp, Iff, LPar, RPar };

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  Tok tok = Tok::End;
  std::string text;
  int tok_line = 1, tok_col = 1;

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> exp) const {
    throw ParseError(tok_line, tok_col, what, std::move(exp));
  }

  void bump() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void advance() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') bump();
      } else {
        break;
      }
    }
    tok_line = line;
    tok_col = col;
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    char c = src[pos];
    if (c >= 'a' && c <= 'z') {
      std::string id;
      while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                  src[pos] == '_')) {
        id += src[pos];
        bump();
      }
      if (id == "false") {
        tok = Tok::False;
      } else if (id == "true") {
        tok = Tok::True;
      } else {
        tok = Tok::Atom;
        text = id;
      }
      return;
    }
    switch (c) {
      case 'X': bump(); tok = Tok::Next; return;
      case 'F': bump(); tok = Tok::Ev; return;
      case 'G': bump(); tok = Tok::Hence; return;
      case '~': bump(); tok = Tok::Not; return;
      case '&': bump(); tok = Tok::And; return;
      case '|': bump(); tok = Tok::Or; return;
      case '(': bump(); tok = Tok::LPar; return;
      case ')': bump(); tok = Tok::RPar; return;
      case '<':
        bump();
        if (src.compare(pos, 2, "->") == 0) {
          bump();
          bump();
          tok = Tok::Iff;
          return;
        }
        fail("expected '<->'", {"<->"});
      case '-':
        bump();
        if (pos < src.size() && src[pos] == '>') {
          bump();
          tok = Tok::Imp;
          return;
        }
        fail("expected '->'", {"->"});
      default:
        fail(std::string("unexpected character '") + c + "'",
             {"formula"});
    }
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(std::string_view s) : lex(s) {}

  Formula parse() {
    Formula f = imp_chain();
    if (lex.tok != Tok::End)
      lex.fail("trailing input", {"end of input"});
    return f;
  }

  Formula imp_chain() {
    std::vector<Formula> operands{or_expr()};
    bool have_op = false;
    Tok chain_op = Tok::Imp;
    while (lex.tok == Tok::Imp || lex.tok == Tok::Iff) {
      if (have_op && lex.tok != chain_op)
        lex.fail("'->' and '<->' do not mix without parentheses", {"(", ")"});
      chain_op = lex.tok;
      have_op = true;
      lex.advance();
      operands.push_back(or_expr());
    }
    Formula acc = operands.back();
    for (std::size_t i = operands.size() - 1; i-- > 0;) {
      acc = chain_op == Tok::Imp ? implies(operands[i], acc) : iff(operands[i], acc);
    }
    return acc;
  }

  Formula or_expr() {
    Formula acc = and_expr();
    while (lex.tok == Tok::Or) {
      lex.advance();
      acc = disj(acc, and_expr());
    }
    return acc;
  }

  Formula and_expr() {
    Formula acc = unary();
    while (lex.tok == Tok::And) {
      lex.advance();
      acc = conj(acc, unary());
    }
    return acc;
  }

  Formula unary() {
    switch (lex.tok) {
      case Tok::Next: lex.advance(); return next(unary());
      case Tok::Ev: lex.advance(); return eventually(unary());
      case Tok::Hence: lex.advance(); return henceforth(unary());
      case Tok::Not: lex.advance(); return negation(unary());
      default: return primary();
    }
  }

  Formula primary() {
    switch (lex.tok) {
      case Tok::Atom: {
        Formula f = atom(lex.text);
        lex.advance();
        return f;
      }
      case Tok::False: lex.advance(); return bottom();
      case Tok::True: lex.advance(); return truth();
      case Tok::LPar: {
        lex.advance();
        Formula f = imp_chain();
        if (lex.tok != Tok::RPar) lex.fail("expected ')'", {")"});
        lex.advance();
        return f;
      }
      default:
        lex.fail("expected a formula",
                 {"atom", "false", "true", "X", "F", "G", "~", "("});
    }
  }
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  detail::Parser p(text);
  return p.parse();
}

}  // namespace itl
