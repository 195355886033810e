// Canonical graded expressions over jet variables.
//
// An Expr is a normalized sum of monomials.  Each monomial is
//
//   coefficient * i^{phase} * (even jets and superfield symbols, with powers)
//                * (formal powers (base)^{g})
//                * (ordered product of odd atoms)
//
// Odd atoms anticommute; reordering into the canonical order contributes the
// sign of the permutation, and a repeated odd atom annihilates the monomial.
// Formal powers carry symbolic exponents; integer exponents >= 0 are expanded
// eagerly so each value has one representation.  A bare jet J standing next to
// a power with base i*J is absorbed into the power, and unit prefactors of
// single-jet bases are folded into the phase, so e.g. (f_x)^{-1} and
// i*(i*f_x)^{-1} normalize identically.
#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <tuple>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace ptskdv::sym {

enum class Field : int { U = 0, Xi = 1, F = 2 };

inline const char* field_name(Field f) {
  switch (f) {
    case Field::U: return "u";
    case Field::Xi: return "xi";
    case Field::F: return "f";
  }
  return "?";
}

inline bool field_is_odd(Field f) { return f == Field::Xi; }

// d_t^{t_order} d_x^{x_order} of a component field.
struct Jet {
  Field field;
  int x_order = 0;
  int t_order = 0;
  auto key() const { return std::tuple(static_cast<int>(field), x_order, t_order); }
  bool operator==(const Jet& o) const { return key() == o.key(); }
  bool operator<(const Jet& o) const { return key() < o.key(); }
};

// Opaque symbol for the order-th superderivative of the base superfield.
// Parity alternates: even order is odd, odd order is even.
struct SuperJet {
  int order = 0;
  bool operator==(const SuperJet& o) const { return order == o.order; }
  bool operator<(const SuperJet& o) const { return order < o.order; }
};

inline bool superjet_is_odd(const SuperJet& s) { return s.order % 2 == 0; }

// Auxiliary odd constants used by symmetry variations.
struct EtaGen {
  int index = 0;
  bool operator==(const EtaGen& o) const { return index == o.index; }
  bool operator<(const EtaGen& o) const { return index < o.index; }
};

struct ThetaAtom {
  bool operator==(const ThetaAtom&) const { return true; }
  bool operator<(const ThetaAtom&) const { return false; }
};

// d_x^{order} applied to the deformed x-derivative of xi.  Kept opaque: the
// deformed derivative of an odd generator has no jet expansion.
struct DeformedXiJet {
  int order = 0;
  ParamExponent eps;
  auto key() const { return std::tuple(order, eps); }
  bool operator==(const DeformedXiJet& o) const { return order == o.order && eps == o.eps; }
  bool operator<(const DeformedXiJet& o) const { return key() < o.key(); }
};

// Even commuting factors: u/f jets and even superfield symbols.
using EvenKey = std::variant<Jet, SuperJet>;
// Odd anticommuting factors, in canonical order by variant index then value.
using OddAtom = std::variant<EtaGen, ThetaAtom, Jet, DeformedXiJet, SuperJet>;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// (base)^{exponent} with even, odd-free, power-free base.
struct FormalPower {
  ExprPtr base;
  ParamExponent exponent;
};

struct Monomial {
  Coefficient coef{1};
  ParamExponent phase;                // symbolic part of an i^{g} prefactor
  std::map<EvenKey, int> evens;       // powers >= 1
  std::vector<FormalPower> powers;    // sorted by base, bases distinct
  std::vector<OddAtom> odds;          // strictly increasing
};

int compare(const Expr& a, const Expr& b);

inline int compare(const ParamExponent& a, const ParamExponent& b) {
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

inline int compare(const FormalPower& a, const FormalPower& b) {
  if (a.base.get() != b.base.get()) {
    int c = compare(*a.base, *b.base);
    if (c != 0) return c;
  }
  return compare(a.exponent, b.exponent);
}

// Structure key: everything except the coefficient.
inline int compare_structure(const Monomial& a, const Monomial& b) {
  if (a.evens != b.evens) return a.evens < b.evens ? -1 : 1;
  if (a.powers.size() != b.powers.size()) return a.powers.size() < b.powers.size() ? -1 : 1;
  for (size_t k = 0; k < a.powers.size(); ++k) {
    int c = compare(a.powers[k], b.powers[k]);
    if (c != 0) return c;
  }
  if (a.odds != b.odds) return a.odds < b.odds ? -1 : 1;
  return compare(a.phase, b.phase);
}

class Expr {
 public:
  Expr() = default;

  static Expr zero() { return Expr(); }
  static Expr constant(Coefficient c) {
    Monomial m;
    m.coef = std::move(c);
    return from_monomials({std::move(m)});
  }
  static Expr one() { return constant(Coefficient(1)); }

  // Merges already-normalized monomials: sort by structure, combine
  // coefficients, drop zeros.
  static Expr assemble(std::vector<Monomial> ms) {
    std::sort(ms.begin(), ms.end(),
              [](const Monomial& a, const Monomial& b) { return compare_structure(a, b) < 0; });
    Expr e;
    for (auto& m : ms) {
      if (m.coef.is_zero()) continue;
      if (!e.ms_.empty() && compare_structure(e.ms_.back(), m) == 0) {
        e.ms_.back().coef = e.ms_.back().coef + m.coef;
        if (e.ms_.back().coef.is_zero()) e.ms_.pop_back();
      } else {
        e.ms_.push_back(std::move(m));
      }
    }
    return e;
  }

  // Assembles a canonical Expr from possibly unnormalized monomials.
  static Expr from_monomials(std::vector<Monomial> ms);

  const std::vector<Monomial>& monomials() const { return ms_; }
  bool is_zero() const { return ms_.empty(); }

  bool is_constant() const {
    return ms_.empty() ||
           (ms_.size() == 1 && ms_[0].evens.empty() && ms_[0].powers.empty() &&
            ms_[0].odds.empty() && ms_[0].phase == ParamExponent());
  }
  Coefficient constant_value() const {
    if (ms_.empty()) return Coefficient(0);
    if (!is_constant()) throw std::logic_error("constant_value of non-constant expression");
    return ms_[0].coef;
  }

  // 0 = all even, 1 = all odd; nullopt for mixed-parity sums.
  std::optional<int> parity() const {
    std::optional<int> p;
    for (auto& m : ms_) {
      int mp = static_cast<int>(m.odds.size() % 2);
      if (!p) p = mp;
      else if (*p != mp) return std::nullopt;
    }
    if (!p) p = 0;
    return p;
  }
  bool is_even() const { return parity() == 0; }
  bool is_odd() const { return is_zero() || parity() == 1; }

 private:
  std::vector<Monomial> ms_;
  friend int compare(const Expr& a, const Expr& b);
};

inline int compare(const Expr& a, const Expr& b) {
  size_t n = std::min(a.ms_.size(), b.ms_.size());
  for (size_t k = 0; k < n; ++k) {
    int c = compare_structure(a.ms_[k], b.ms_[k]);
    if (c != 0) return c;
    const Coefficient &ca = a.ms_[k].coef, &cb = b.ms_[k].coef;
    if (!ca.equals(cb)) {
      if (ca.num.terms != cb.num.terms) return ca.num.terms < cb.num.terms ? -1 : 1;
      return ca.den.terms < cb.den.terms ? -1 : 1;
    }
  }
  if (a.ms_.size() != b.ms_.size()) return a.ms_.size() < b.ms_.size() ? -1 : 1;
  return 0;
}

Expr mul(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Normalization.

namespace detail {

// Sorts odd atoms tracking the permutation sign; false when a repeat makes
// the product vanish.
inline bool sort_odds(std::vector<OddAtom>& odds, int& sign) {
  for (size_t i = 1; i < odds.size(); ++i) {
    for (size_t j = i; j > 0 && odds[j] < odds[j - 1]; --j) {
      std::swap(odds[j], odds[j - 1]);
      sign = -sign;
    }
  }
  for (size_t i = 1; i < odds.size(); ++i)
    if (odds[i] == odds[i - 1]) return false;
  return true;
}

inline std::optional<int> unit_phase_index(const Coefficient& c) {
  if (c.den != ParamPoly(1) || !c.num.is_constant()) return std::nullopt;
  RationalComplex v = c.num.constant_value();
  for (int k = 0; k < 4; ++k)
    if (v == RationalComplex::i_pow(k)) return k;
  return std::nullopt;
}

struct SingleJetBase {
  Jet jet;
  int gamma_ipow;  // base = i^{gamma_ipow} * jet
};

inline std::optional<SingleJetBase> as_single_jet_base(const Expr& base) {
  const auto& ms = base.monomials();
  if (ms.size() != 1) return std::nullopt;
  const Monomial& m = ms[0];
  if (!m.odds.empty() || !m.powers.empty()) return std::nullopt;
  if (m.phase != ParamExponent()) return std::nullopt;
  if (m.evens.size() != 1 || m.evens.begin()->second != 1) return std::nullopt;
  const Jet* j = std::get_if<Jet>(&m.evens.begin()->first);
  if (!j) return std::nullopt;
  auto k = unit_phase_index(m.coef);
  if (!k) return std::nullopt;
  return SingleJetBase{*j, *k};
}

inline Expr expr_int_power(const Expr& base, long long n) {
  Expr acc = Expr::one();
  for (long long k = 0; k < n; ++k) acc = mul(acc, base);
  return acc;
}

}  // namespace detail

// Normalizes one monomial; eager expansion of literal powers may fan out.
inline Expr normalize_monomial(Monomial m) {
  if (m.coef.is_zero()) return Expr::zero();

  // Rewrite unit-prefactor single-jet bases over the representative i*J:
  // (i^k J)^g = i^{(k-1)g} (i J)^g.
  for (auto& fp : m.powers) {
    if (!fp.base || fp.base->is_zero())
      throw MalformedExpression("formal power with empty base");
    auto sj = detail::as_single_jet_base(*fp.base);
    if (sj && sj->gamma_ipow != 1) {
      int shift = ((sj->gamma_ipow - 1) % 4 + 4) % 4;
      m.phase = m.phase + fp.exponent * rat(shift);
      Monomial bm;
      bm.coef = Coefficient::i_unit();
      bm.evens.emplace(sj->jet, 1);
      std::vector<Monomial> one;
      one.push_back(std::move(bm));
      fp.base = std::make_shared<Expr>(Expr::assemble(std::move(one)));
    }
  }

  // Merge powers sharing a base; exponents add.
  std::sort(m.powers.begin(), m.powers.end(),
            [](const FormalPower& a, const FormalPower& b) { return compare(a, b) < 0; });
  std::vector<FormalPower> merged;
  for (auto& fp : m.powers) {
    if (!merged.empty() && compare(*merged.back().base, *fp.base) == 0)
      merged.back().exponent = merged.back().exponent + fp.exponent;
    else
      merged.push_back(std::move(fp));
  }

  // Absorb bare jets into matching single-jet powers:
  // J^k (i J)^g = i^{-k} (i J)^{g+k}.
  for (auto& fp : merged) {
    auto sj = detail::as_single_jet_base(*fp.base);
    if (!sj || sj->gamma_ipow != 1) continue;
    auto it = m.evens.find(EvenKey{sj->jet});
    if (it == m.evens.end()) continue;
    int k = it->second;
    m.evens.erase(it);
    fp.exponent = fp.exponent + rat(k);
    m.coef = m.coef.scaled(RationalComplex::i_pow(-k));
  }

  // Fold the integer part of the phase into the coefficient.
  if (is_integer(m.phase.lit) && m.phase.lit != 0) {
    m.coef = m.coef.scaled(RationalComplex::i_pow(to_ll(m.phase.lit)));
    m.phase.lit = 0;
  }

  // Literal integer exponents >= 0 expand eagerly.
  std::vector<std::pair<ExprPtr, long long>> expand;
  m.powers.clear();
  for (auto& fp : merged) {
    auto n = fp.exponent.literal_int();
    if (n && *n >= 0) {
      if (*n > 0) expand.emplace_back(fp.base, *n);
    } else {
      m.powers.push_back(std::move(fp));
    }
  }

  int sign = 1;
  if (!detail::sort_odds(m.odds, sign)) return Expr::zero();
  if (sign < 0) m.coef = m.coef.scaled(RationalComplex(-1));
  if (m.coef.is_zero()) return Expr::zero();

  std::vector<Monomial> one;
  one.push_back(std::move(m));
  Expr acc = Expr::assemble(std::move(one));
  for (auto& [base, n] : expand) acc = mul(acc, detail::expr_int_power(*base, n));
  return acc;
}

inline Expr Expr::from_monomials(std::vector<Monomial> ms) {
  std::vector<Monomial> out;
  for (auto& m : ms) {
    Expr e = normalize_monomial(std::move(m));
    for (auto& em : e.monomials()) out.push_back(em);
  }
  return assemble(std::move(out));
}

// ---------------------------------------------------------------------------
// Construction helpers.

inline Expr sc(Coefficient c) { return Expr::constant(std::move(c)); }
inline Expr sc(long long n) { return Expr::constant(Coefficient(n)); }
inline Expr sc_rat(BigRat r) { return Expr::constant(Coefficient(RationalComplex(std::move(r)))); }
inline Expr imag_unit() { return Expr::constant(Coefficient::i_unit()); }

inline Expr jet(Field f, int x_order = 0, int t_order = 0) {
  Monomial m;
  if (field_is_odd(f)) m.odds.push_back(Jet{f, x_order, t_order});
  else m.evens.emplace(Jet{f, x_order, t_order}, 1);
  return Expr::from_monomials({std::move(m)});
}
inline Expr jet_u(int x_order = 0, int t_order = 0) { return jet(Field::U, x_order, t_order); }
inline Expr jet_xi(int x_order = 0, int t_order = 0) { return jet(Field::Xi, x_order, t_order); }
inline Expr jet_f(int x_order = 0, int t_order = 0) { return jet(Field::F, x_order, t_order); }

inline Expr theta() {
  Monomial m;
  m.odds.push_back(ThetaAtom{});
  return Expr::from_monomials({std::move(m)});
}
inline Expr eta(int index = 0) {
  Monomial m;
  m.odds.push_back(EtaGen{index});
  return Expr::from_monomials({std::move(m)});
}
inline Expr superjet(int order) {
  Monomial m;
  SuperJet s{order};
  if (superjet_is_odd(s)) m.odds.push_back(s);
  else m.evens.emplace(s, 1);
  return Expr::from_monomials({std::move(m)});
}
inline Expr deformed_xi_jet(int order, ParamExponent eps) {
  Monomial m;
  m.odds.push_back(DeformedXiJet{order, std::move(eps)});
  return Expr::from_monomials({std::move(m)});
}
// i^{g} as a standalone factor.
inline Expr phase_power(ParamExponent g) {
  Monomial m;
  m.phase = std::move(g);
  return Expr::from_monomials({std::move(m)});
}

// ---------------------------------------------------------------------------
// Ring operations.

inline Expr add(const Expr& a, const Expr& b) {
  std::vector<Monomial> ms;
  ms.reserve(a.monomials().size() + b.monomials().size());
  for (auto& m : a.monomials()) ms.push_back(m);
  for (auto& m : b.monomials()) ms.push_back(m);
  return Expr::assemble(std::move(ms));
}

inline Expr scale(const Expr& a, const Coefficient& c) {
  if (c.is_zero()) return Expr::zero();
  std::vector<Monomial> ms = a.monomials();
  for (auto& m : ms) m.coef = m.coef * c;
  return Expr::assemble(std::move(ms));
}

inline Expr neg(const Expr& a) { return scale(a, Coefficient(-1)); }
inline Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }

inline Expr mul(const Expr& a, const Expr& b) {
  std::vector<Monomial> out;
  for (auto& ma : a.monomials()) {
    for (auto& mb : b.monomials()) {
      Monomial m;
      m.coef = ma.coef * mb.coef;
      if (m.coef.is_zero()) continue;
      m.phase = ma.phase + mb.phase;
      m.evens = ma.evens;
      for (auto& [k, p] : mb.evens) m.evens[k] += p;
      m.powers = ma.powers;
      m.powers.insert(m.powers.end(), mb.powers.begin(), mb.powers.end());
      m.odds = ma.odds;
      m.odds.insert(m.odds.end(), mb.odds.begin(), mb.odds.end());
      Expr e = normalize_monomial(std::move(m));
      for (auto& em : e.monomials()) out.push_back(em);
    }
  }
  return Expr::assemble(std::move(out));
}

inline Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }

inline bool equals_zero(const Expr& e) { return e.is_zero(); }
inline bool equals(const Expr& a, const Expr& b) { return sub(a, b).is_zero(); }

// ---------------------------------------------------------------------------
// x-derivative.

namespace detail {

inline ParamPoly exponent_poly(const ParamExponent& g) {
  ParamPoly p(RationalComplex(g.lit));
  for (auto& [v, c] : g.coefs) p = p + ParamPoly::var(v).scaled(RationalComplex(c));
  return p;
}

}  // namespace detail

inline Expr x_derivative(const Expr& a, int times = 1) {
  if (times < 0) throw std::invalid_argument("negative derivative order");
  Expr cur = a;
  for (int rep = 0; rep < times; ++rep) {
    std::vector<Monomial> out;
    for (auto& m : cur.monomials()) {
      // Even jet factors: J^k -> k J^{k-1} J'.
      for (auto& [key, p] : m.evens) {
        Monomial t = m;
        t.coef = t.coef.scaled(RationalComplex(rat(p)));
        auto it = t.evens.find(key);
        if (--it->second == 0) t.evens.erase(it);
        EvenKey dkey = std::visit(
            [](auto atom) -> EvenKey {
              using T = std::decay_t<decltype(atom)>;
              if constexpr (std::is_same_v<T, Jet>) {
                atom.x_order += 1;
                return EvenKey{atom};
              } else {
                atom.order += 2;  // d_x = D^2 on superfield symbols
                return EvenKey{atom};
              }
            },
            key);
        t.evens[dkey] += 1;
        Expr e = normalize_monomial(std::move(t));
        for (auto& em : e.monomials()) out.push_back(em);
      }
      // Formal powers: (B^g)' = g B^{g-1} B'.
      for (size_t k = 0; k < m.powers.size(); ++k) {
        Monomial t = m;
        t.coef = t.coef * Coefficient(detail::exponent_poly(m.powers[k].exponent));
        t.powers[k].exponent = t.powers[k].exponent - rat(1);
        Expr dbase = x_derivative(*m.powers[k].base, 1);
        Expr prod = mul(normalize_monomial(std::move(t)), dbase);
        for (auto& em : prod.monomials()) out.push_back(em);
      }
      // Odd factors, differentiated in place (d_x is even, no sign).
      for (size_t k = 0; k < m.odds.size(); ++k) {
        Monomial t = m;
        bool drop = false;
        t.odds[k] = std::visit(
            [&](auto atom) -> OddAtom {
              using T = std::decay_t<decltype(atom)>;
              if constexpr (std::is_same_v<T, EtaGen> || std::is_same_v<T, ThetaAtom>) {
                drop = true;
                return OddAtom{atom};
              } else if constexpr (std::is_same_v<T, Jet>) {
                atom.x_order += 1;
                return OddAtom{atom};
              } else if constexpr (std::is_same_v<T, DeformedXiJet>) {
                atom.order += 1;
                return OddAtom{atom};
              } else {
                atom.order += 2;
                return OddAtom{atom};
              }
            },
            m.odds[k]);
        if (drop) continue;
        Expr e = normalize_monomial(std::move(t));
        for (auto& em : e.monomials()) out.push_back(em);
      }
    }
    cur = Expr::assemble(std::move(out));
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Powers with symbolic exponents.

namespace detail {

// Core factor B^g for an odd-free even base.
inline Expr power_core(const Expr& base, const ParamExponent& g) {
  if (base.is_zero()) {
    if (g.is_literal() && g.lit > 0) return Expr::zero();
    throw MalformedExpression("power of zero with non-positive exponent");
  }
  auto n = g.literal_int();
  if (n && *n >= 0) return expr_int_power(base, *n);
  if (base.is_constant()) {
    Coefficient c = base.constant_value();
    if (c.is_one()) return Expr::one();
    auto k = unit_phase_index(c);
    if (k) {
      Monomial m;
      m.phase = g * rat(*k);
      return Expr::from_monomials({std::move(m)});
    }
    // Literal negative powers of a plain scalar evaluate exactly.
    if (n && c.den == ParamPoly(1) && c.num.is_constant())
      return Expr::constant(Coefficient(c.num.constant_value().pow(*n)));
    throw MalformedExpression("symbolic power of a non-unit scalar");
  }
  for (auto& m : base.monomials()) {
    if (!m.powers.empty())
      throw MalformedExpression("nested formal power");
    if (!m.odds.empty())
      throw MalformedExpression("odd atom inside a formal power base");
  }
  Monomial m;
  m.powers.push_back(FormalPower{std::make_shared<Expr>(base), g});
  return Expr::from_monomials({std::move(m)});
}

}  // namespace detail

// (core + soul)^g with nilpotent soul: finite binomial expansion
// sum_k C(g,k) core^{g-k} soul^k.  The base must be even; the odd-free part
// (the core) must be nonzero unless g is a positive integer.
inline Expr nilpotent_power(const Expr& base, const ParamExponent& g) {
  if (!base.is_zero() && !base.is_even())
    throw MalformedExpression("formal power of an odd expression");
  std::vector<Monomial> core_ms, soul_ms;
  for (auto& m : base.monomials())
    (m.odds.empty() ? core_ms : soul_ms).push_back(m);
  Expr core = Expr::assemble(std::move(core_ms));
  Expr soul = Expr::assemble(std::move(soul_ms));

  if (core.is_zero()) {
    auto n = g.literal_int();
    if (n && *n >= 1) return detail::expr_int_power(soul, *n);
    throw MalformedExpression("formal power base has no invertible part");
  }
  if (soul.is_zero()) return detail::power_core(core, g);

  Expr acc = Expr::zero();
  Expr soul_k = Expr::one();
  Coefficient binom(1);
  for (long long k = 0;; ++k) {
    if (k > 0) {
      // binom *= (g - (k-1)) / k
      binom = binom * Coefficient(detail::exponent_poly(g - rat(k - 1)));
      binom = binom.scaled(RationalComplex(BigRat(1) / BigRat(k)));
      soul_k = mul(soul_k, soul);
      if (soul_k.is_zero()) break;
      if (binom.is_zero()) break;
    }
    Expr term = scale(mul(detail::power_core(core, g - rat(k)), soul_k), binom);
    acc = add(acc, term);
    if (k > 64) throw std::logic_error("nilpotent expansion failed to terminate");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Substitution.

// Atom-level rewriting.  Handlers return the replacement expression for an
// atom, or nullopt to keep it.  Odd replacements may have any parity; signs
// follow from rebuilding the monomial as an ordered product.
using EvenRule = std::function<std::optional<Expr>(const EvenKey&)>;
using OddRule = std::function<std::optional<Expr>(const OddAtom&)>;

inline Expr substitute_atoms(const Expr& e, const EvenRule& even_rule, const OddRule& odd_rule) {
  std::vector<Monomial> out;
  for (auto& m : e.monomials()) {
    Monomial head;
    head.coef = m.coef;
    head.phase = m.phase;
    Expr acc = Expr::from_monomials({std::move(head)});
    for (auto& [key, p] : m.evens) {
      std::optional<Expr> rep = even_rule ? even_rule(key) : std::nullopt;
      Expr factor;
      if (rep) {
        factor = detail::expr_int_power(*rep, p);
      } else {
        Monomial fm;
        fm.evens.emplace(key, p);
        factor = Expr::from_monomials({std::move(fm)});
      }
      acc = mul(acc, factor);
    }
    for (auto& fp : m.powers) {
      Expr nb = substitute_atoms(*fp.base, even_rule, odd_rule);
      Expr factor;
      if (compare(nb, *fp.base) == 0) {
        Monomial fm;
        fm.powers.push_back(fp);
        factor = Expr::from_monomials({std::move(fm)});
      } else {
        factor = nilpotent_power(nb, fp.exponent);
      }
      acc = mul(acc, factor);
    }
    for (auto& atom : m.odds) {
      std::optional<Expr> rep = odd_rule ? odd_rule(atom) : std::nullopt;
      Expr factor;
      if (rep) {
        factor = *rep;
      } else {
        Monomial fm;
        fm.odds.push_back(atom);
        factor = Expr::from_monomials({std::move(fm)});
      }
      acc = mul(acc, factor);
    }
    for (auto& em : acc.monomials()) out.push_back(em);
  }
  return Expr::assemble(std::move(out));
}

// Field-level substitution rule: replaces jets of `field` with matching
// t_order.  With prolong, a rule stated for the base jet (x_order 0) applies
// to every x-derivative via d_x^k of the replacement; otherwise only the
// exact jet is replaced.
struct SubstRule {
  Jet target;        // x_order must be 0 when prolong is used
  Expr replacement;
};

inline Expr substitute(const Expr& e, const std::vector<SubstRule>& rules, bool prolong) {
  for (auto& r : rules)
    if (prolong && r.target.x_order != 0)
      throw std::invalid_argument("prolonged rules must target x_order 0");
  auto find_rule = [&](Field f, int x_order, int t_order) -> std::optional<Expr> {
    for (auto& r : rules) {
      if (r.target.field != f || r.target.t_order != t_order) continue;
      if (prolong) return x_derivative(r.replacement, x_order);
      if (r.target.x_order == x_order) return r.replacement;
    }
    return std::nullopt;
  };
  bool xi_rules = false;
  for (auto& r : rules) xi_rules |= (r.target.field == Field::Xi);
  EvenRule er = [&](const EvenKey& k) -> std::optional<Expr> {
    if (auto* j = std::get_if<Jet>(&k)) return find_rule(j->field, j->x_order, j->t_order);
    return std::nullopt;
  };
  OddRule orl = [&](const OddAtom& a) -> std::optional<Expr> {
    if (auto* j = std::get_if<Jet>(&a)) return find_rule(j->field, j->x_order, j->t_order);
    if (xi_rules && std::holds_alternative<DeformedXiJet>(a))
      throw UnsupportedTransform("substitution into a deformed xi derivative");
    return std::nullopt;
  };
  return substitute_atoms(e, er, orl);
}

// Parameter substitution: evaluates coefficients, phases, power exponents
// and deformed xi derivatives at literal parameter values.
inline Expr substitute_params(const Expr& e, const ParamValues& vals) {
  std::vector<Monomial> out;
  for (auto& m : e.monomials()) {
    Monomial head;
    head.coef = m.coef.substitute(vals);
    head.phase = m.phase.substitute(vals);
    if (head.phase.is_literal() && !is_integer(head.phase.lit))
      throw MalformedExpression("phase i^g evaluated at a non-integer literal");
    head.evens = m.evens;
    bool dead = false;
    std::vector<Expr> factors;
    for (auto& fp : m.powers) {
      Expr nb = substitute_params(*fp.base, vals);
      factors.push_back(nilpotent_power(nb, fp.exponent.substitute(vals)));
    }
    for (auto& atom : m.odds) {
      if (auto* d = std::get_if<DeformedXiJet>(&atom)) {
        ParamExponent ne = d->eps.substitute(vals);
        if (ne.is_literal()) {
          if (!is_integer(ne.lit))
            throw MalformedExpression("deformed xi derivative at a non-integer exponent");
          long long n = to_ll(ne.lit);
          if (n == 1) {
            Monomial fm;
            fm.odds.push_back(Jet{Field::Xi, d->order + 1, 0});
            factors.push_back(Expr::from_monomials({std::move(fm)}));
            continue;
          }
          if (n >= 2) {  // -i (i xi_x)^n = 0 for n >= 2
            dead = true;
            break;
          }
          if (n == 0) {  // -i (i xi_x)^0 = -i, killed by any further d_x
            if (d->order > 0) {
              dead = true;
              break;
            }
            factors.push_back(sc(Coefficient(RationalComplex(rat(0), rat(-1)))));
            continue;
          }
          throw MalformedExpression("deformed xi derivative at a negative exponent");
        }
        Monomial fm;
        fm.odds.push_back(DeformedXiJet{d->order, ne});
        factors.push_back(Expr::from_monomials({std::move(fm)}));
      } else {
        Monomial fm;
        fm.odds.push_back(atom);
        factors.push_back(Expr::from_monomials({std::move(fm)}));
      }
    }
    if (dead) continue;
    Expr acc = Expr::from_monomials({std::move(head)});
    for (auto& f : factors) acc = mul(acc, f);
    for (auto& em : acc.monomials()) out.push_back(em);
  }
  return Expr::assemble(std::move(out));
}

}  // namespace ptskdv::sym
