// Shared helpers for the test suite.
#pragma once

#include <random>

#include "ptskdv/expr.hpp"
#include "ptskdv/render.hpp"

namespace th {

using namespace ptskdv::sym;

inline ParamExponent eps_exp(long long shift = 0) {
  return ParamExponent::var(Param::Eps) + ParamExponent(shift);
}

// (i * J)^g
inline Expr ipow_of(const Expr& base, const ParamExponent& g) {
  return nilpotent_power(mul(imag_unit(), base), g);
}

inline Coefficient crat(long long n, long long d = 1) {
  return Coefficient(RationalComplex(rat(n, d)));
}

// Small random canonical expressions for property tests.  Depth-bounded sums
// and products over a fixed atom pool; powers appear via (i*u_x)^{eps+k}.
inline Expr random_expr(std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (depth == 0) {
    switch (pick(10)) {
      case 0: return sc(crat(pick(7) - 3));
      case 1: return jet_u(pick(3));
      case 2: return jet_f(pick(2));
      case 3: return jet_xi(pick(3));
      case 4: return theta();
      case 5: return eta(pick(2));
      case 6: return mul(sc(crat(pick(5) - 2)), jet_u(pick(2)));
      case 7: return ipow_of(jet_u(1), eps_exp(pick(3) - 1));
      case 8: return jet_u(0, pick(2));
      default: return imag_unit();
    }
  }
  switch (pick(3)) {
    case 0: {
      Expr a = random_expr(rng, depth - 1);
      Expr b = random_expr(rng, depth - 1);
      return add(a, b);
    }
    case 1: {
      Expr a = random_expr(rng, depth - 1);
      Expr b = random_expr(rng, depth - 1);
      return mul(a, b);
    }
    default:
      return random_expr(rng, depth - 1);
  }
}

}  // namespace th
