// Evaluates symbolic expressions as Grassmann-valued grid fields: jets become
// spectral derivatives of the state, formal powers go through the pointwise
// principal branch, odd products convolve generator masks.  The simulator
// integrates exactly the expressions the algebra produced.
#pragma once

#include "gfield.hpp"

namespace ptskdv::num {

struct GridContext {
  Grid grid;
  FftPlan plan;
  std::map<sym::Param, Complex> params;
  bool use_dealias = true;

  GridContext() = default;
  GridContext(int n, double length, std::map<sym::Param, Complex> p, bool deal = true)
      : grid(n, length), plan(n), params(std::move(p)), use_dealias(deal) {}
};

struct StateFields {
  GrassmannField u, xi;
};

namespace detail {

inline void scan_jets(const sym::Expr& e, int& max_u, int& max_xi) {
  auto see = [&](const sym::Jet& j) {
    if (j.t_order > 0) throw ValidationError("time derivative in a grid expression");
    if (j.field == sym::Field::F)
      throw ValidationError("auxiliary field carries no grid data");
    (j.field == sym::Field::U ? max_u : max_xi) = std::max(
        j.field == sym::Field::U ? max_u : max_xi, j.x_order);
  };
  for (auto& m : e.monomials()) {
    for (auto& [k, p] : m.evens) {
      if (auto* j = std::get_if<sym::Jet>(&k)) see(*j);
      else throw MalformedExpression("superfield symbol in a grid expression");
    }
    for (auto& a : m.odds) {
      if (auto* j = std::get_if<sym::Jet>(&a)) see(*j);
      else throw MalformedExpression("non-jet odd symbol in a grid expression");
    }
    for (auto& fp : m.powers) scan_jets(*fp.base, max_u, max_xi);
  }
}

}  // namespace detail

// Spectral derivatives of the state, shared across monomials.
struct JetFieldCache {
  std::vector<GrassmannField> du, dxi;  // index = x-order

  JetFieldCache(const GridContext& ctx, const StateFields& s, int max_u, int max_xi) {
    du.reserve(max_u + 1);
    dxi.reserve(max_xi + 1);
    for (int k = 0; k <= max_u; ++k) du.push_back(f_dx(ctx.grid, ctx.plan, s.u, k));
    for (int k = 0; k <= max_xi; ++k) dxi.push_back(f_dx(ctx.grid, ctx.plan, s.xi, k));
  }

  const GrassmannField& jet(const sym::Jet& j) const {
    const auto& v = j.field == sym::Field::U ? du : dxi;
    if (j.x_order >= static_cast<int>(v.size()))
      throw ValidationError("jet order missing from the derivative cache");
    return v[static_cast<std::size_t>(j.x_order)];
  }
};

inline GrassmannField evaluate_on_grid(const sym::Expr& e, const GridContext& ctx,
                                       const JetFieldCache& cache, int n_gen) {
  int n = ctx.grid.n;
  GrassmannField acc(n_gen, n);
  for (auto& m : e.monomials()) {
    Complex c = m.coef.eval(ctx.params);
    if (!(m.phase.is_literal() && m.phase.lit == 0))
      c *= std::exp(Complex(0.0, std::numbers::pi / 2.0) * eval_exponent(m.phase, ctx.params));
    // A term whose coefficient degenerates to zero is absent from the equation
    // at these parameter values; its factors must not be touched, since they
    // may be singular precisely where the coefficient vanishes.
    if (c == Complex(0.0, 0.0)) continue;
    GrassmannField term;
    bool started = false;
    auto fold = [&](const GrassmannField& f) {
      if (!started) {
        term = f_scale(f, c);  // the scalar head needs no dealiasing
        started = true;
      } else {
        term = f_mul(ctx.grid, ctx.plan, term, f, ctx.use_dealias);
      }
    };
    for (auto& [k, p] : m.evens) {
      auto* j = std::get_if<sym::Jet>(&k);
      if (!j) throw MalformedExpression("superfield symbol in a grid expression");
      for (int q = 0; q < p; ++q) fold(cache.jet(*j));
    }
    for (auto& fp : m.powers) {
      Complex g = eval_exponent(fp.exponent, ctx.params);
      if (g == Complex(0.0, 0.0)) continue;  // x^0 = 1, drop the factor
      GrassmannField base = evaluate_on_grid(*fp.base, ctx, cache, n_gen);
      if (g == Complex(1.0, 0.0)) fold(base);
      else fold(f_pow(ctx.grid, ctx.plan, base, g, ctx.use_dealias));
    }
    for (auto& a : m.odds) {
      auto* j = std::get_if<sym::Jet>(&a);
      if (!j) throw MalformedExpression("non-jet odd symbol in a grid expression");
      fold(cache.jet(*j));
    }
    if (!started) {
      term = GrassmannField(n_gen, n);
      for (auto& v : term.comp[0]) v = c;
    }
    acc = f_add(acc, term);
  }
  return acc;
}

// Convenience wrapper building the cache for a single expression.
inline GrassmannField evaluate_on_grid(const sym::Expr& e, const GridContext& ctx,
                                       const StateFields& s) {
  int mu = 0, mx = 0;
  detail::scan_jets(e, mu, mx);
  JetFieldCache cache(ctx, s, mu, mx);
  return evaluate_on_grid(e, ctx, cache, s.u.n_gen);
}

}  // namespace ptskdv::num
