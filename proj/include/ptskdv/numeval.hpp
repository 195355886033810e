// Evaluates symbolic expressions in a finite Grassmann algebra: even jets
// get even elements, odd jets and generators get odd elements, parameters get
// complex numbers, and the formal phase i^g becomes exp(i pi g / 2).
#pragma once

#include <map>
#include <numbers>
#include <optional>

#include "expr.hpp"
#include "grassmann.hpp"

namespace ptskdv::num {

struct NumContext {
  int n_gen = 0;
  std::map<sym::Jet, GrassmannElement> jets;
  std::map<int, GrassmannElement> etas;
  std::optional<GrassmannElement> theta;
  std::map<sym::Param, Complex> params;
};

inline Complex eval_exponent(const sym::ParamExponent& g,
                             const std::map<sym::Param, Complex>& params) {
  Complex r(sym::to_double(g.lit));
  for (auto& [p, c] : g.coefs) {
    auto it = params.find(p);
    if (it == params.end()) throw ValidationError("unassigned parameter in an exponent");
    r += Complex(sym::to_double(c)) * it->second;
  }
  return r;
}

namespace detail {

inline const GrassmannElement& looked_up(const NumContext& ctx, const sym::Jet& j) {
  auto it = ctx.jets.find(j);
  if (it == ctx.jets.end()) {
    const char* f = j.field == sym::Field::U ? "u" : (j.field == sym::Field::Xi ? "xi" : "f");
    throw ValidationError("unassigned jet value: " + std::string(f) + "(" +
                          std::to_string(j.x_order) + "," + std::to_string(j.t_order) + ")");
  }
  return it->second;
}

inline void require_parity(const GrassmannElement& v, int want, const char* what) {
  auto p = v.parity();
  if (!p || (*p != want && !v.is_zero()))
    throw ValidationError(std::string("value of wrong parity assigned to ") + what);
}

}  // namespace detail

inline GrassmannElement num_evaluate(const sym::Expr& e, const NumContext& ctx) {
  using sym::Jet;
  GrassmannElement acc(ctx.n_gen);
  for (auto& m : e.monomials()) {
    Complex cv = m.coef.eval(ctx.params);
    if (!(m.phase.is_literal() && m.phase.lit == 0))
      cv *= std::exp(Complex(0.0, std::numbers::pi / 2.0) * eval_exponent(m.phase, ctx.params));
    // Terms absent at these parameter values are skipped before their factors
    // are touched; the factors may be singular exactly where the coefficient
    // vanishes.
    if (cv == Complex(0.0, 0.0)) continue;
    GrassmannElement term = GrassmannElement::scalar(ctx.n_gen, cv);
    for (auto& [k, p] : m.evens) {
      auto* j = std::get_if<Jet>(&k);
      if (!j) throw MalformedExpression("superfield symbol in numeric evaluation");
      const GrassmannElement& v = detail::looked_up(ctx, *j);
      detail::require_parity(v, 0, "an even jet");
      for (int q = 0; q < p; ++q) term = g_mul(term, v);
    }
    for (auto& fp : m.powers)
      term = g_mul(term, g_pow(num_evaluate(*fp.base, ctx),
                               eval_exponent(fp.exponent, ctx.params)));
    for (auto& a : m.odds) {
      const GrassmannElement* v = nullptr;
      if (auto* j = std::get_if<Jet>(&a)) {
        v = &detail::looked_up(ctx, *j);
      } else if (auto* g = std::get_if<sym::EtaGen>(&a)) {
        auto it = ctx.etas.find(g->index);
        if (it == ctx.etas.end()) throw ValidationError("unassigned odd generator");
        v = &it->second;
      } else if (std::holds_alternative<sym::ThetaAtom>(a)) {
        if (!ctx.theta) throw ValidationError("unassigned theta value");
        v = &*ctx.theta;
      } else {
        throw MalformedExpression("opaque odd symbol in numeric evaluation");
      }
      detail::require_parity(*v, 1, "an odd atom");
      term = g_mul(term, *v);
    }
    acc = g_add(acc, term);
  }
  return acc;
}

}  // namespace ptskdv::num
