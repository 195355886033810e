// PT and supersymmetry transforms with invariance certification.
//
// PT acts by t -> -t, x -> -x, i -> -i together with u -> u, xi -> i xi,
// theta -> i theta.  On jets this contributes (-1)^{x_order+t_order}; the
// scalar coefficient is conjugated.  Formal power bases must map to
// themselves: a base picking up any prefactor (even -1) has no canonical
// transformed power, and unresolved phase factors i^{g} are never conjugated
// in isolation.
//
// The supersymmetry variation is u -> u + eta xi_x, xi -> xi + eta u,
// prolonged to all jets.  Invariance of an evolution system is the on-shell
// statement: the variation of (u_t - R_u, xi_t - R_xi) vanishes after
// substituting the equations of motion back in.
#pragma once

#include <utility>

#include "models.hpp"
#include "render.hpp"

namespace ptskdv::super {

inline Expr pt_transform(const Expr& e) {
  std::vector<Monomial> out;
  for (auto& m : e.monomials()) {
    if (!(m.phase == ParamExponent()))
      throw UnsupportedTransform("PT of an unresolved phase power i^g");
    Monomial t = m;
    t.coef = t.coef.conj();
    RationalComplex factor(1);
    for (auto& [key, p] : m.evens) {
      if (auto* j = std::get_if<Jet>(&key)) {
        if ((j->x_order + j->t_order) % 2 == 1 && p % 2 == 1)
          factor = -factor;
      } else {
        throw UnsupportedTransform("PT of a superfield symbol");
      }
    }
    for (auto& a : m.odds) {
      if (auto* j = std::get_if<Jet>(&a)) {
        factor = factor * RationalComplex::i_unit();
        if ((j->x_order + j->t_order) % 2 == 1) factor = -factor;
      } else if (std::holds_alternative<ThetaAtom>(a)) {
        factor = factor * RationalComplex::i_unit();
      } else {
        throw UnsupportedTransform("PT of an auxiliary odd generator");
      }
    }
    for (auto& fp : t.powers) {
      Expr tb = pt_transform(*fp.base);
      if (!equals(tb, *fp.base))
        throw UnsupportedTransform("PT sends a formal power base to " + to_string(tb) +
                                   ", which differs from " + to_string(*fp.base) +
                                   "; no canonical power exists");
    }
    t.coef = t.coef.scaled(factor);
    out.push_back(std::move(t));
  }
  return Expr::assemble(std::move(out));
}

struct TransformReport {
  bool invariant = false;
  std::vector<std::pair<std::string, Expr>> residuals;
  std::string context;
};

// u_t = R_u transforms PT-covariantly iff PT(R_u) = -R_u; the xi equation
// carries one factor of i from the left-hand side, so invariance there reads
// PT(R_xi) = -i R_xi.
inline TransformReport pt_invariant(const ModelSystem& model) {
  ModelSystem m = to_components(model);
  TransformReport r;
  r.context = std::string("PT covariance of ") + model_name(m.id);
  Expr res_u = add(pt_transform(m.ru), m.ru);
  Expr res_xi = add(pt_transform(m.rxi), scale(m.rxi, Coefficient::i_unit()));
  r.residuals.emplace_back("u", res_u);
  r.residuals.emplace_back("xi", res_xi);
  r.invariant = res_u.is_zero() && res_xi.is_zero();
  return r;
}

// A theta-free density integrated in x alone is PT-invariant when it maps to
// itself; a full superspace density picks up one factor of i that the
// transformed Berezin measure absorbs.
inline TransformReport pt_invariant_density(const Expr& density, bool superspace) {
  TransformReport r;
  r.context = superspace ? "PT covariance of a superspace density"
                         : "PT invariance of a density";
  Expr res = superspace ? sub(pt_transform(density), scale(density, Coefficient::i_unit()))
                        : sub(pt_transform(density), density);
  r.residuals.emplace_back("density", res);
  r.invariant = res.is_zero();
  return r;
}

// ---------------------------------------------------------------------------
// Supersymmetry.

inline Expr susy_transform(const Expr& e, int eta_index = 0) {
  EvenRule er = [&](const EvenKey& k) -> std::optional<Expr> {
    if (auto* j = std::get_if<Jet>(&k)) {
      if (j->field == Field::U) {
        Expr shift = mul(eta(eta_index), jet_xi(j->x_order + 1, j->t_order));
        return add(jet_u(j->x_order, j->t_order), shift);
      }
      return std::nullopt;  // the auxiliary even field is a spectator
    }
    throw UnsupportedTransform("supersymmetry variation of a superfield symbol");
  };
  OddRule odd = [&](const OddAtom& a) -> std::optional<Expr> {
    if (auto* j = std::get_if<Jet>(&a)) {
      Expr shift = mul(eta(eta_index), jet_u(j->x_order, j->t_order));
      return add(jet_xi(j->x_order, j->t_order), shift);
    }
    if (std::holds_alternative<EtaGen>(a)) return std::nullopt;
    throw UnsupportedTransform("supersymmetry variation of a non-jet odd atom");
  };
  return substitute_atoms(e, er, odd);
}

// On-shell residuals of the supersymmetry variation.  Both vanish iff the
// system is invariant.
inline TransformReport susy_invariant(const ModelSystem& model, int eta_index = 0) {
  ModelSystem m = to_components(model);
  TransformReport r;
  r.context = std::string("supersymmetry covariance of ") + model_name(m.id);
  std::vector<SubstRule> eom = {{Jet{Field::U, 0, 1}, m.ru}, {Jet{Field::Xi, 0, 1}, m.rxi}};
  Expr res_u = susy_transform(sub(jet_u(0, 1), m.ru), eta_index);
  res_u = substitute(res_u, eom, true);
  Expr res_xi = susy_transform(sub(jet_xi(0, 1), m.rxi), eta_index);
  res_xi = substitute(res_xi, eom, true);
  r.residuals.emplace_back("u", res_u);
  r.residuals.emplace_back("xi", res_xi);
  r.invariant = res_u.is_zero() && res_xi.is_zero();
  return r;
}

// ---------------------------------------------------------------------------
// Numeric certification of non-vanishing residuals.
//
// Even jets are given exact random rational values; odd atoms stay symbolic,
// so the result is a polynomial in the odd generators whose coefficients
// witness non-vanishing without any floating point.

inline Expr evaluate_even_jets(const Expr& e, unsigned seed) {
  // Deterministic pseudo-random rationals p/q, p in [-60,60], q in [1,7].
  auto next = [state = static_cast<unsigned long long>(seed) * 6364136223846793005ull +
                       1442695040888963407ull]() mutable {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<unsigned>(state >> 33);
  };
  std::map<Jet, BigRat> values;
  EvenRule er = [&](const EvenKey& k) -> std::optional<Expr> {
    if (auto* j = std::get_if<Jet>(&k)) {
      if (field_is_odd(j->field)) return std::nullopt;
      auto it = values.find(*j);
      if (it == values.end()) {
        long long p = static_cast<long long>(next() % 121) - 60;
        long long q = 1 + next() % 7;
        if (p == 0) p = 1;
        it = values.emplace(*j, rat(p, q)).first;
      }
      return sc_rat(it->second);
    }
    return std::nullopt;
  };
  return substitute_atoms(e, er, nullptr);
}

// True when the expression is certified nonzero by an exact evaluation at
// random rational even jets (retrying a few seeds to dodge accidental roots).
inline bool certify_nonzero(const Expr& e, const ParamValues& params, int attempts = 3) {
  if (e.is_zero()) return false;
  for (int k = 0; k < attempts; ++k) {
    Expr inst = substitute_params(e, params);
    Expr val = evaluate_even_jets(inst, 1234567u + 999u * static_cast<unsigned>(k));
    if (!val.is_zero()) return true;
  }
  return false;
}

}  // namespace ptskdv::super
