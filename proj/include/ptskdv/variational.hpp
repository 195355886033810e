// Variational calculus: partial derivatives with respect to jets and
// superfield symbols, Euler operators, the deformed Hamiltonian density and
// its flow, and a total-x-derivative decision procedure with witness.
//
// The superspace Euler operator uses left partials and the sign pattern
// (-1)^{k(k-1)/2}, i.e. +,+,-,- repeating in k:
//   delta H / delta Phi = sum_k (-1)^{k(k-1)/2} D^k (dH / d(D^k Phi)).
#pragma once

#include "deformed.hpp"

namespace ptskdv::super {

// d/d(key) with key an even jet or even superfield symbol, including
// occurrences inside formal power bases.
inline Expr partial_even(const Expr& e, const EvenKey& key) {
  std::vector<Monomial> out;
  for (auto& m : e.monomials()) {
    auto it = m.evens.find(key);
    if (it != m.evens.end()) {
      Monomial t = m;
      t.coef = t.coef.scaled(RationalComplex(rat(it->second)));
      auto tit = t.evens.find(key);
      if (--tit->second == 0) t.evens.erase(tit);
      Expr norm = normalize_monomial(std::move(t));
      for (auto& em : norm.monomials()) out.push_back(em);
    }
    for (size_t k = 0; k < m.powers.size(); ++k) {
      Expr dbase = partial_even(*m.powers[k].base, key);
      if (dbase.is_zero()) continue;
      Monomial t = m;
      t.coef = t.coef * Coefficient(sym::detail::exponent_poly(m.powers[k].exponent));
      t.powers[k].exponent = t.powers[k].exponent - rat(1);
      Expr prod = mul(normalize_monomial(std::move(t)), dbase);
      for (auto& em : prod.monomials()) out.push_back(em);
    }
  }
  return Expr::assemble(std::move(out));
}

// Left derivative d/d(atom) for an odd atom: remove the atom, with the sign
// of commuting the derivative past everything to its left.
inline Expr partial_odd(const Expr& e, const OddAtom& atom) {
  std::vector<Monomial> out;
  for (auto& m : e.monomials()) {
    for (size_t k = 0; k < m.odds.size(); ++k) {
      if (!(m.odds[k] == atom)) continue;
      Monomial t = m;
      t.odds.erase(t.odds.begin() + k);
      if (k % 2 == 1) t.coef = t.coef.scaled(RationalComplex(-1));
      out.push_back(std::move(t));
      break;  // canonical monomials contain each odd atom at most once
    }
  }
  return Expr::assemble(std::move(out));
}

// d/d(D^k Phi) regardless of the symbol's parity.
inline Expr partial_superjet(const Expr& e, int order) {
  SuperJet s{order};
  if (superjet_is_odd(s)) return partial_odd(e, OddAtom{s});
  return partial_even(e, EvenKey{s});
}

inline int max_superjet_order(const Expr& e) {
  int mx = -1;
  for (auto& m : e.monomials()) {
    for (auto& [k, p] : m.evens)
      if (auto* s = std::get_if<SuperJet>(&k)) mx = std::max(mx, s->order);
    for (auto& a : m.odds)
      if (auto* s = std::get_if<SuperJet>(&a)) mx = std::max(mx, s->order);
    for (auto& fp : m.powers) mx = std::max(mx, max_superjet_order(*fp.base));
  }
  return mx;
}

// Replaces every D^k Phi symbol by its concrete superspace expression.
inline Expr substitute_superjets(const Expr& e) {
  EvenRule er = [](const EvenKey& k) -> std::optional<Expr> {
    if (auto* s = std::get_if<SuperJet>(&k)) return join_theta(super_D(phi(), s->order));
    return std::nullopt;
  };
  OddRule odd = [](const OddAtom& a) -> std::optional<Expr> {
    if (auto* s = std::get_if<SuperJet>(&a)) return join_theta(super_D(phi(), s->order));
    return std::nullopt;
  };
  return substitute_atoms(e, er, odd);
}

// delta H / delta Phi for a density written in D^k Phi symbols.
inline SuperfieldExpr variational_derivative(const Expr& density) {
  int K = max_superjet_order(density);
  if (K < 0) throw MalformedExpression("density has no superfield symbols");
  SuperfieldExpr acc{Expr::zero(), Expr::zero()};
  for (int k = 0; k <= K; ++k) {
    Expr p = partial_superjet(density, k);
    if (p.is_zero()) continue;
    SuperfieldExpr term = super_D(split_theta(substitute_superjets(p)), k);
    int sign = (k % 4 < 2) ? 1 : -1;  // (-1)^{k(k-1)/2}
    acc = sign > 0 ? s_add(acc, term) : s_sub(acc, term);
  }
  return acc;
}

// Phi_t = D(delta H / delta Phi).
inline SuperfieldExpr hamiltonian_flow(const Expr& density) {
  return super_D(variational_derivative(density));
}

// The deformed Hamiltonian density
//   H = Phi (D Phi)^2 + 1/(1+eps) D^2 Phi * (-i (i D^3 Phi)^eps).
inline Expr hdef_density() {
  ParamExponent eps = ParamExponent::var(Param::Eps);
  Expr first = mul(superjet(0), mul(superjet(1), superjet(1)));
  Expr cube = scale(nilpotent_power(mul(imag_unit(), superjet(3)), eps),
                    Coefficient(RationalComplex(rat(0), rat(-1))));
  Expr second = scale(mul(superjet(2), cube),
                      Coefficient(ParamPoly(1), ParamPoly(1) + ParamPoly::var(Param::Eps)));
  return add(first, second);
}

// Berezin integral of the density after substituting concrete superfields:
// the x-integrand of the Hamiltonian in component fields.
inline Expr hdef_integrand() {
  return berezin_integrate(split_theta(substitute_superjets(hdef_density())));
}

// ---------------------------------------------------------------------------
// Component Euler operators and exactness.

namespace detail {

inline void scan_orders(const Expr& e, Field f, int& mx, bool& has_t) {
  for (auto& m : e.monomials()) {
    for (auto& [k, p] : m.evens)
      if (auto* j = std::get_if<Jet>(&k)) {
        if (j->t_order > 0) has_t = true;
        if (j->field == f) mx = std::max(mx, j->x_order);
      }
    for (auto& a : m.odds)
      if (auto* j = std::get_if<Jet>(&a)) {
        if (j->t_order > 0) has_t = true;
        if (j->field == f) mx = std::max(mx, j->x_order);
      }
    for (auto& fp : m.powers) scan_orders(*fp.base, f, mx, has_t);
  }
}

}  // namespace detail

// sum_k (-d_x)^k d/d(field^{(k)}), the x-only Euler operator.
inline Expr euler_operator(const Expr& density, Field f) {
  int mx = -1;
  bool has_t = false;
  detail::scan_orders(density, f, mx, has_t);
  if (has_t) throw MalformedExpression("time derivatives inside a variational density");
  Expr acc = Expr::zero();
  for (int k = 0; k <= mx; ++k) {
    Jet J{f, k, 0};
    Expr p = field_is_odd(f) ? partial_odd(density, OddAtom{J}) : partial_even(density, EvenKey{J});
    if (p.is_zero()) continue;
    Expr term = x_derivative(p, k);
    acc = (k % 2 == 0) ? add(acc, term) : sub(acc, term);
  }
  return acc;
}

struct ExactnessResult {
  bool exact = false;
  std::optional<Expr> witness;  // e = d_x(witness) when produced
};

namespace detail {

struct JetRank {
  int x_order = -1;
  int field_rank = -1;  // xi > u > f
  bool operator<(const JetRank& o) const {
    return std::tie(x_order, field_rank) < std::tie(o.x_order, o.field_rank);
  }
  bool operator==(const JetRank& o) const {
    return x_order == o.x_order && field_rank == o.field_rank;
  }
};

inline int field_rank_of(Field f) {
  switch (f) {
    case Field::Xi: return 2;
    case Field::U: return 1;
    case Field::F: return 0;
  }
  return 0;
}

inline JetRank mono_rank(const Monomial& m) {
  JetRank r;
  auto consider = [&](const Jet& j) {
    JetRank c{j.x_order, field_rank_of(j.field)};
    if (r < c) r = c;
  };
  for (auto& [k, p] : m.evens)
    if (auto* j = std::get_if<Jet>(&k)) consider(*j);
  for (auto& a : m.odds)
    if (auto* j = std::get_if<Jet>(&a)) consider(*j);
  return r;
}

// One peeling step: pick the monomial holding the highest jet J', replace
// J' by its antiderivative jet J, divide by the multiplicity that d_x of the
// candidate produces in front of the J' structure, subtract.  Returns false
// when the leading structure cannot be integrated this way.
inline bool peel_step(Expr& e, Expr& acc) {
  JetRank best;
  for (auto& m : e.monomials()) {
    JetRank r = mono_rank(m);
    if (best < r) best = r;
  }
  if (best.x_order <= 0) return false;
  const Monomial* pick = nullptr;
  for (auto& m : e.monomials())
    if (mono_rank(m) == best) {
      pick = &m;
      break;
    }
  Field f = best.field_rank == 2 ? Field::Xi : (best.field_rank == 1 ? Field::U : Field::F);
  Jet lead{f, best.x_order, 0};
  Jet down{f, best.x_order - 1, 0};

  // Build the candidate structure with coefficient 1 and the lead replaced.
  Monomial c = *pick;
  Coefficient p = c.coef;
  c.coef = Coefficient(1);
  bool replaced = false;
  if (field_is_odd(f)) {
    for (auto& a : c.odds)
      if (auto* j = std::get_if<Jet>(&a); j && *j == lead) {
        *j = down;
        replaced = true;
        break;
      }
  } else {
    auto it = c.evens.find(EvenKey{lead});
    if (it != c.evens.end()) {
      if (it->second != 1) return false;  // lead appears to a power
      c.evens.erase(it);
      c.evens[EvenKey{down}] += 1;
      replaced = true;
    }
  }
  if (!replaced) return false;  // lead lives only inside a formal power base
  Expr cand = normalize_monomial(std::move(c));
  if (cand.is_zero()) return false;  // replacement collided with an existing odd atom

  Expr d = x_derivative(cand);
  const Monomial* match = nullptr;
  for (auto& m : d.monomials())
    if (compare_structure(m, *pick) == 0) {
      match = &m;
      break;
    }
  if (!match || match->coef.is_zero()) return false;
  // scale = p / match->coef; the multiplicity is lambda-free by construction
  Coefficient q = match->coef;
  if (!q.num.is_zero()) {
    for (auto& [mono, cc] : q.num.terms)
      if (mono[static_cast<int>(Param::Lambda)] != 0) return false;
  }
  Coefficient s = (p * Coefficient(q.den)).divided_by(q.num);
  acc = add(acc, scale(cand, s));
  e = sub(e, scale(d, s));
  // the peel must not raise the leading rank
  for (auto& m : e.monomials())
    if (best < mono_rank(m)) return false;
  return true;
}

}  // namespace detail

// Decides whether a theta-free density is d_x of something, via the Euler
// operators; on success also attempts to produce the antiderivative.
inline ExactnessResult is_total_x_derivative(const Expr& e) {
  for (auto& m : e.monomials())
    for (auto& a : m.odds)
      if (std::holds_alternative<ThetaAtom>(a))
        throw MalformedExpression("theta inside an x-density");
  for (Field f : {Field::U, Field::Xi, Field::F})
    if (!euler_operator(e, f).is_zero()) return {false, std::nullopt};
  Expr rem = e, acc = Expr::zero();
  for (int step = 0; step < 500 && !rem.is_zero(); ++step)
    if (!detail::peel_step(rem, acc)) break;
  if (rem.is_zero() && equals(x_derivative(acc), e)) return {true, acc};
  return {true, std::nullopt};
}

}  // namespace ptskdv::super
