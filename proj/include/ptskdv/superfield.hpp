// Superspace expressions split along theta: e = body + theta * theta_part.
//
// The superderivative D = theta d_x + d_theta acts as
//   D(b + theta t) = t + theta b_x,
// so D^2 = d_x.  Berezin integration in theta returns the theta part.
#pragma once

#include "expr.hpp"

namespace ptskdv::super {

using namespace ptskdv::sym;

struct SuperfieldExpr {
  Expr body;        // theta-free
  Expr theta_part;  // theta-free
};

// Splits an arbitrary expression along theta.  The sign accounts for moving
// theta to the front of the odd product it sits in.
inline SuperfieldExpr split_theta(const Expr& e) {
  std::vector<Monomial> body, tp;
  for (auto& m : e.monomials()) {
    int pos = -1;
    for (size_t k = 0; k < m.odds.size(); ++k)
      if (std::holds_alternative<ThetaAtom>(m.odds[k])) {
        pos = static_cast<int>(k);
        break;
      }
    if (pos < 0) {
      body.push_back(m);
    } else {
      Monomial t = m;
      t.odds.erase(t.odds.begin() + pos);
      if (pos % 2 == 1) t.coef = t.coef.scaled(RationalComplex(-1));
      tp.push_back(std::move(t));
    }
  }
  return {Expr::assemble(std::move(body)), Expr::assemble(std::move(tp))};
}

inline Expr join_theta(const SuperfieldExpr& s) {
  return add(s.body, mul(theta(), s.theta_part));
}

inline SuperfieldExpr s_add(const SuperfieldExpr& a, const SuperfieldExpr& b) {
  return {add(a.body, b.body), add(a.theta_part, b.theta_part)};
}
inline SuperfieldExpr s_sub(const SuperfieldExpr& a, const SuperfieldExpr& b) {
  return {sub(a.body, b.body), sub(a.theta_part, b.theta_part)};
}
inline SuperfieldExpr s_neg(const SuperfieldExpr& a) { return {neg(a.body), neg(a.theta_part)}; }
inline SuperfieldExpr s_scale(const SuperfieldExpr& a, const Coefficient& c) {
  return {scale(a.body, c), scale(a.theta_part, c)};
}
inline SuperfieldExpr s_mul(const SuperfieldExpr& a, const SuperfieldExpr& b) {
  return split_theta(mul(join_theta(a), join_theta(b)));
}
inline bool s_is_zero(const SuperfieldExpr& a) {
  return a.body.is_zero() && a.theta_part.is_zero();
}

// The base superfield Phi = xi + theta u.
inline SuperfieldExpr phi() { return {jet_xi(0), jet_u(0)}; }

inline SuperfieldExpr super_D(const SuperfieldExpr& s) {
  return {s.theta_part, x_derivative(s.body)};
}
inline SuperfieldExpr super_D(const SuperfieldExpr& s, int times) {
  SuperfieldExpr r = s;
  for (int k = 0; k < times; ++k) r = super_D(r);
  return r;
}
inline Expr super_D_expr(const Expr& e) { return join_theta(super_D(split_theta(e))); }

// integral d_theta of (b + theta t) is t.
inline Expr berezin_integrate(const SuperfieldExpr& s) { return s.theta_part; }
inline Expr berezin_integrate(const Expr& e) { return split_theta(e).theta_part; }

}  // namespace ptskdv::super
