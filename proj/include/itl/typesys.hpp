#pragma once

// Two-sided types over a finite subformula-closed set, their orders and the
// temporal compatibility relation between consecutive instants.
//
// A type is a partition (negative; positive) of the closure.  Only the
// positive part is stored; membership conditions force the negative part to
// be the complement.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "itl/formula.hpp"

namespace itl {

using TypeMask = std::uint64_t;

class TwoSidedType {
 public:
  TwoSidedType(ClosurePtr sigma, TypeMask positive)
      : sigma_(std::move(sigma)), pos_(positive) {}

  const ClosurePtr& sigma() const { return sigma_; }
  TypeMask positive_mask() const { return pos_; }

  bool positive(std::size_t i) const { return (pos_ >> i) & 1u; }
  bool negative(std::size_t i) const { return !positive(i); }
  bool positive(const Formula& f) const { return positive(sigma_->at(f)); }
  bool negative(const Formula& f) const { return !positive(f); }

  std::vector<Formula> positive_formulas() const {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < sigma_->size(); ++i)
      if (positive(i)) out.push_back((*sigma_)[i]);
    return out;
  }
  std::vector<Formula> negative_formulas() const {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < sigma_->size(); ++i)
      if (!positive(i)) out.push_back((*sigma_)[i]);
    return out;
  }

  // `+{...} -{...}` as used inside structure files.
  std::string to_string() const {
    std::string out = "+{";
    bool first = true;
    for (std::size_t i = 0; i < sigma_->size(); ++i)
      if (positive(i)) {
        if (!first) out += ", ";
        out += render((*sigma_)[i]);
        first = false;
      }
    out += "} -{";
    first = true;
    for (std::size_t i = 0; i < sigma_->size(); ++i)
      if (!positive(i)) {
        if (!first) out += ", ";
        out += render((*sigma_)[i]);
        first = false;
      }
    out += "}";
    return out;
  }

  friend bool operator==(const TwoSidedType& a, const TwoSidedType& b) {
    return a.pos_ == b.pos_ && same_sigma(a, b);
  }
  friend bool operator!=(const TwoSidedType& a, const TwoSidedType& b) {
    return !(a == b);
  }

  static bool same_sigma(const TwoSidedType& a, const TwoSidedType& b) {
    return a.sigma_ == b.sigma_ || *a.sigma_ == *b.sigma_;
  }

 private:
  ClosurePtr sigma_;
  TypeMask pos_;
};

namespace detail {

inline void require_same_sigma(const TwoSidedType& a, const TwoSidedType& b) {
  if (!TwoSidedType::same_sigma(a, b))
    throw std::invalid_argument("types are over different closures");
}

// Membership conditions over raw masks; `i` must have all its subformulas at
// smaller indices already fixed in `mask`.
inline bool type_bit_admissible(const Closure& sigma, TypeMask mask, std::size_t i) {
  const Formula& f = sigma[i];
  bool pos = (mask >> i) & 1u;
  switch (f.op()) {
    case Op::Bottom:
      return !pos;
    case Op::And: {
      bool l = (mask >> sigma.at(f.lhs())) & 1u;
      bool r = (mask >> sigma.at(f.rhs())) & 1u;
      return pos == (l && r);
    }
    case Op::Or: {
      bool l = (mask >> sigma.at(f.lhs())) & 1u;
      bool r = (mask >> sigma.at(f.rhs())) & 1u;
      return pos == (l || r);
    }
    case Op::Implies: {
      if (!pos) return true;
      bool l = (mask >> sigma.at(f.lhs())) & 1u;
      bool r = (mask >> sigma.at(f.rhs())) & 1u;
      return !l || r;
    }
    case Op::Eventually: {
      if (pos) return true;
      bool arg = (mask >> sigma.at(f.child())) & 1u;
      return !arg;  // a refuted eventuality refutes its body now
    }
    default:
      return true;  // atoms and X are unconstrained
  }
}

inline bool valid_type_mask(const Closure& sigma, TypeMask mask) {
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (!type_bit_admissible(sigma, mask, i)) return false;
  return true;
}

}  // namespace detail

// All two-sided types over `sigma`, in a fixed deterministic order
// (backtracking over members in closure order, negative side first).
inline std::vector<TwoSidedType> enumerate_types(const ClosurePtr& sigma) {
  if (!sigma->box_free())
    throw std::invalid_argument("two-sided types are defined for box-free closures only");
  if (sigma->size() > 48)
    throw std::invalid_argument("closure too large to enumerate types over");
  std::vector<TwoSidedType> out;
  const Closure& s = *sigma;
  const std::size_t n = s.size();
  TypeMask mask = 0;
  // DFS in member order; at depth i all bits < i are fixed.
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.emplace_back(sigma, mask);
      return;
    }
    for (int bit = 0; bit <= 1; ++bit) {
      if (bit)
        mask |= TypeMask{1} << i;
      else
        mask &= ~(TypeMask{1} << i);
      if (detail::type_bit_admissible(s, mask, i)) self(self, i + 1);
    }
    mask &= ~(TypeMask{1} << i);
  };
  rec(rec, 0);
  return out;
}

// Phi <= Psi when the positive parts are included (same closure).
inline bool type_leq(const TwoSidedType& a, const TwoSidedType& b) {
  detail::require_same_sigma(a, b);
  return (a.positive_mask() & ~b.positive_mask()) == 0;
}

// Componentwise inclusion for types over nested closures.
inline bool type_sub(const TwoSidedType& a, const TwoSidedType& b) {
  const Closure& sa = *a.sigma();
  const Closure& sb = *b.sigma();
  if (!sa.subset_of(sb))
    throw std::invalid_argument("type_sub requires the first closure to be included in the second");
  // Both parts included means: every member of the smaller closure keeps its side.
  for (std::size_t i = 0; i < sa.size(); ++i)
    if (a.positive(i) != b.positive(sb.at(sa[i]))) return false;
  return true;
}

namespace detail {

// Raw-mask version of the compatibility relation for one instant step.
inline bool st_masks(const Closure& sigma, TypeMask a, TypeMask b) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Formula& f = sigma[i];
    if (f.op() == Op::Next) {
      std::size_t j = sigma.at(f.child());
      bool ap = (a >> i) & 1u;
      bool bp = (b >> j) & 1u;
      if (ap && !bp) return false;
      if (!ap && bp) return false;
    } else if (f.op() == Op::Eventually) {
      std::size_t j = sigma.at(f.child());
      bool ap = (a >> i) & 1u;
      if (ap && !((a >> j) & 1u) && !((b >> i) & 1u)) return false;  // pending stays positive
      if (!ap && ((b >> i) & 1u)) return false;                      // refuted stays negative
    }
  }
  return true;
}

}  // namespace detail

inline bool st_related(const TwoSidedType& a, const TwoSidedType& b) {
  detail::require_same_sigma(a, b);
  return detail::st_masks(*a.sigma(), a.positive_mask(), b.positive_mask());
}

}  // namespace itl
