// Deformed derivatives and the four deformed superderivative families.
//
// The deformed x-derivative is d_{x,eps} X = -i (i X_x)^eps, iterated as
// d^n_{x,eps} = d_x^{n-1} d_{x,eps}.  It is not a derivation: it does not
// distribute over sums or products, so it only applies to a whole field.
// On the odd component it stays opaque (a DeformedXiJet atom).
//
// Families (first order, then their stated actions on Phi):
//   bf        D_eps      = theta d_{x,eps} + d_theta      (deforms both parts)
//   fermionic Dhat_eps   deforms the xi tower only
//   bosonic   Dtilde_eps deforms the u tower only
//   check     Dcheck_eps^3 = -i (i D^3 . )^eps, higher orders via plain D
// All collapse to the plain D at eps = 1.
#pragma once

#include "superfield.hpp"

namespace ptskdv::super {

// d^n_{x,eps} applied to an even expression, or to the bare odd generator xi.
inline Expr deformed_partial_of(const Expr& X, const ParamExponent& eps, int n) {
  if (n < 0) throw std::invalid_argument("negative deformed derivative order");
  if (n == 0) return X;
  if (X.is_zero()) return Expr::zero();
  if (!X.is_even()) {
    const auto& ms = X.monomials();
    if (ms.size() == 1 && ms[0].odds.size() == 1 && ms[0].evens.empty() &&
        ms[0].powers.empty() && ms[0].coef.is_one() && ms[0].phase == ParamExponent()) {
      if (auto* j = std::get_if<Jet>(&ms[0].odds[0]);
          j && j->field == Field::Xi && j->x_order == 0 && j->t_order == 0)
        return deformed_xi_jet(n - 1, eps);
    }
    throw UnsupportedTransform("deformed derivative of an odd expression other than xi");
  }
  Expr base = mul(imag_unit(), x_derivative(X));
  Expr first = scale(nilpotent_power(base, eps),
                     Coefficient(RationalComplex(rat(0), rat(-1))));
  return x_derivative(first, n - 1);
}

inline Expr deformed_partial(Field f, const ParamExponent& eps, int n) {
  return deformed_partial_of(jet(f), eps, n);
}

// D_eps (b + theta t) = t + theta d_{x,eps} b.
inline SuperfieldExpr super_D_eps(const SuperfieldExpr& s, const ParamExponent& eps) {
  return {s.theta_part, deformed_partial_of(s.body, eps, 1)};
}

enum class DFamily { Plain, Bf, Fermionic, Bosonic, Check };

inline const char* family_name(DFamily f) {
  switch (f) {
    case DFamily::Plain: return "plain";
    case DFamily::Bf: return "bf";
    case DFamily::Fermionic: return "fermionic";
    case DFamily::Bosonic: return "bosonic";
    case DFamily::Check: return "check";
  }
  return "?";
}

namespace detail {

inline bool is_phi(const SuperfieldExpr& s) {
  SuperfieldExpr p = phi();
  return equals(s.body, p.body) && equals(s.theta_part, p.theta_part);
}

// d^m_{x,eps} xi as an atom; m >= 1.
inline Expr dxi(int m, const ParamExponent& eps) { return deformed_xi_jet(m - 1, eps); }

}  // namespace detail

// n-th power of a deformed family applied to e.  Orders 1 and 2 act on any
// superfield expression by composing the first-order operators; the families
// do not compose beyond that (their defining tables are not iterates), so
// n >= 3 is defined on Phi only, with the single exception of the check
// family whose higher orders are plain derivatives of the cube.
inline SuperfieldExpr D_family(const SuperfieldExpr& e, DFamily fam, const ParamExponent& eps,
                               int n) {
  if (n < 0) throw std::invalid_argument("negative family order");
  if (n == 0) return e;
  switch (fam) {
    case DFamily::Plain:
      return super_D(e, n);
    case DFamily::Bf: {
      if (n == 1) return super_D_eps(e, eps);
      if (n == 2) return super_D_eps(super_D_eps(e, eps), eps);
      if (!detail::is_phi(e))
        throw UnsupportedTransform("bf family beyond order 2 is defined on Phi only");
      int m = (n + 1) / 2;
      if (n % 2 == 1)
        return {deformed_partial(Field::U, eps, m - 1), detail::dxi(m, eps)};
      return {detail::dxi(m, eps), deformed_partial(Field::U, eps, m)};
    }
    case DFamily::Fermionic: {
      if (n == 1) return super_D_eps(e, eps);
      if (n == 2) return super_D(super_D_eps(e, eps));
      if (!detail::is_phi(e))
        throw UnsupportedTransform("fermionic family beyond order 2 is defined on Phi only");
      int m = (n + 1) / 2;
      if (n % 2 == 1) return {jet_u(m - 1), detail::dxi(m, eps)};
      return {detail::dxi(m, eps), jet_u(m)};
    }
    case DFamily::Bosonic: {
      if (n == 1) return super_D(e);
      if (n == 2) return super_D_eps(super_D(e), eps);
      if (!detail::is_phi(e))
        throw UnsupportedTransform("bosonic family beyond order 2 is defined on Phi only");
      int m = (n + 1) / 2;
      if (n % 2 == 1) return {deformed_partial(Field::U, eps, m - 1), jet_xi(m)};
      return {jet_xi(m), deformed_partial(Field::U, eps, m)};
    }
    case DFamily::Check: {
      if (n <= 2) return super_D(e, n);
      Expr cube = join_theta(super_D(e, 3));
      Expr deformed = scale(nilpotent_power(mul(imag_unit(), cube), eps),
                            Coefficient(RationalComplex(rat(0), rat(-1))));
      return super_D(split_theta(deformed), n - 3);
    }
  }
  throw std::logic_error("unreachable family");
}

}  // namespace ptskdv::super
