#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace ptskdv::sym;
using th::crat;
using th::eps_exp;
using th::ipow_of;

TEST_CASE("odd atoms anticommute and square to zero") {
  CHECK(mul(theta(), theta()).is_zero());
  CHECK(mul(jet_xi(1), jet_xi(1)).is_zero());
  // xi_x * xi reorders to -(xi * xi_x)
  Expr lhs = mul(jet_xi(1), jet_xi(0));
  Expr rhs = neg(mul(jet_xi(0), jet_xi(1)));
  CHECK(equals(lhs, rhs));
  // eta < theta < xi jets in the canonical order
  Expr m = mul(mul(theta(), eta(0)), jet_xi(2));
  REQUIRE(m.monomials().size() == 1);
  const auto& odds = m.monomials()[0].odds;
  REQUIRE(odds.size() == 3);
  CHECK(std::holds_alternative<EtaGen>(odds[0]));
  CHECK(std::holds_alternative<ThetaAtom>(odds[1]));
  CHECK(std::holds_alternative<Jet>(odds[2]));
  CHECK(m.monomials()[0].coef.equals(Coefficient(-1)));
}

TEST_CASE("products are associative and graded commutative") {
  std::mt19937 rng(20260823);
  for (int trial = 0; trial < 200; ++trial) {
    Expr a = th::random_expr(rng, 2);
    Expr b = th::random_expr(rng, 2);
    Expr c = th::random_expr(rng, 2);
    CHECK(equals(mul(mul(a, b), c), mul(a, mul(b, c))));
    auto pa = a.parity(), pb = b.parity();
    if (pa && pb) {
      Expr ab = mul(a, b), ba = mul(b, a);
      if (*pa == 1 && *pb == 1) CHECK(equals(ab, neg(ba)));
      else CHECK(equals(ab, ba));
    }
  }
}

TEST_CASE("three odd atoms: every ordering matches the permutation sign") {
  // Signs of products of eta, theta, xi_x in all six orders against the
  // canonical order eta*theta*xi_x.
  Expr f[3] = {eta(0), theta(), jet_xi(1)};
  Expr canonical = mul(mul(f[0], f[1]), f[2]);
  int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  int sign[6] = {1, -1, -1, 1, 1, -1};
  for (int k = 0; k < 6; ++k) {
    Expr p = mul(mul(f[perm[k][0]], f[perm[k][1]]), f[perm[k][2]]);
    Expr want = sign[k] > 0 ? canonical : neg(canonical);
    CHECK(equals(p, want));
  }
}

TEST_CASE("normalization is idempotent on random trees") {
  std::mt19937 rng(987654321);
  for (int trial = 0; trial < 1000; ++trial) {
    Expr e = th::random_expr(rng, 3);
    Expr renorm = Expr::from_monomials(e.monomials());
    CHECK(compare(e, renorm) == 0);
  }
}

TEST_CASE("powers with the same base merge by adding exponents") {
  Expr a = ipow_of(jet_u(1), eps_exp());
  Expr b = ipow_of(jet_u(1), ParamExponent(-1));
  Expr prod = mul(a, b);
  CHECK(equals(prod, ipow_of(jet_u(1), eps_exp(-1))));
  // merging down to exponent zero erases the factor
  CHECK(equals(mul(a, ipow_of(jet_u(1), -eps_exp())), Expr::one()));
}

TEST_CASE("bare jets absorb into single-jet powers") {
  // u_x * (i u_x)^eps = -i (i u_x)^{eps+1}
  Expr lhs = mul(jet_u(1), ipow_of(jet_u(1), eps_exp()));
  Expr rhs = scale(ipow_of(jet_u(1), eps_exp(1)), Coefficient(RationalComplex(rat(0), rat(-1))));
  CHECK(equals(lhs, rhs));
  // and literal results expand: u_x * (i u_x)^{-1} = -i
  Expr collapsed = mul(jet_u(1), ipow_of(jet_u(1), ParamExponent(-1)));
  CHECK(equals(collapsed, sc(Coefficient(RationalComplex(rat(0), rat(-1))))));
}

TEST_CASE("unit prefactors of single-jet bases normalize to a representative") {
  // (f_x)^{-1} == i * (i f_x)^{-1}
  Expr a = nilpotent_power(jet_f(1), ParamExponent(-1));
  Expr b = mul(imag_unit(), ipow_of(jet_f(1), ParamExponent(-1)));
  CHECK(equals(a, b));
  // (-i u_x)^eps == i^{2 eps} (i u_x)^eps  (fold through the phase)
  Expr c = nilpotent_power(scale(jet_u(1), Coefficient(RationalComplex(rat(0), rat(-1)))),
                           eps_exp());
  Expr d = mul(phase_power(eps_exp() * rat(2)), ipow_of(jet_u(1), eps_exp()));
  CHECK(equals(c, d));
}

TEST_CASE("integer exponents expand eagerly") {
  Expr sq = nilpotent_power(add(jet_u(), jet_f()), ParamExponent(2));
  Expr expect = add(add(mul(jet_u(), jet_u()), scale(mul(jet_u(), jet_f()), crat(2))),
                    mul(jet_f(), jet_f()));
  CHECK(equals(sq, expect));
  CHECK(equals(nilpotent_power(mul(imag_unit(), jet_u(1)), ParamExponent(1)),
               mul(imag_unit(), jet_u(1))));
}

TEST_CASE("x derivative: product and power rules") {
  // d/dx (u^2 u_x) = 2 u u_x^2 + u^2 u_xx
  Expr e = mul(mul(jet_u(), jet_u()), jet_u(1));
  Expr d = x_derivative(e);
  Expr expect = add(scale(mul(jet_u(), mul(jet_u(1), jet_u(1))), crat(2)),
                    mul(mul(jet_u(), jet_u()), jet_u(2)));
  CHECK(equals(d, expect));
  // d/dx (i u_x)^eps = eps (i u_x)^{eps-1} i u_xx
  Expr p = x_derivative(ipow_of(jet_u(1), eps_exp()));
  Expr expect2 = scale(mul(ipow_of(jet_u(1), eps_exp(-1)), mul(imag_unit(), jet_u(2))),
                       Coefficient::var(Param::Eps));
  CHECK(equals(p, expect2));
  // theta and eta are constants
  CHECK(x_derivative(theta()).is_zero());
  CHECK(x_derivative(eta(1)).is_zero());
  // odd jets advance in place
  CHECK(equals(x_derivative(mul(theta(), jet_xi(0))), mul(theta(), jet_xi(1))));
}

TEST_CASE("x derivative satisfies the Leibniz rule") {
  std::mt19937 rng(555);
  for (int trial = 0; trial < 200; ++trial) {
    Expr a = th::random_expr(rng, 2);
    Expr b = th::random_expr(rng, 2);
    Expr lhs = x_derivative(mul(a, b));
    Expr rhs = add(mul(x_derivative(a), b), mul(a, x_derivative(b)));
    CHECK(equals(lhs, rhs));
  }
}

TEST_CASE("substitution with prolongation") {
  // u -> u + eta xi_x applied to u_x gives u_x + eta xi_xx
  Expr r = substitute(jet_u(1), {{Jet{Field::U, 0, 0}, add(jet_u(), mul(eta(0), jet_xi(1)))}},
                      true);
  CHECK(equals(r, add(jet_u(1), mul(eta(0), jet_xi(2)))));
  // u_tx under u_t -> 6 u u_x - u_xxx
  Expr rhs_kdv = sub(scale(mul(jet_u(), jet_u(1)), crat(6)), jet_u(3));
  Expr r2 = substitute(jet_u(1, 1), {{Jet{Field::U, 0, 1}, rhs_kdv}}, true);
  Expr expect = add(sub(scale(mul(jet_u(1), jet_u(1)), crat(6)), jet_u(4)),
                    scale(mul(jet_u(), jet_u(2)), crat(6)));
  CHECK(equals(r2, expect));
  // without prolongation only the exact jet matches
  Expr r3 = substitute(jet_u(1), {{Jet{Field::U, 0, 0}, jet_f()}}, false);
  CHECK(equals(r3, jet_u(1)));
}

TEST_CASE("substitution reaches formal power bases") {
  Expr p = ipow_of(jet_u(1), eps_exp());
  Expr r = substitute(p, {{Jet{Field::U, 0, 0}, add(jet_u(), mul(eta(0), jet_xi(1)))}}, true);
  // (i(u_x + eta xi_xx))^eps = (iu_x)^eps + eps (iu_x)^{eps-1} i eta xi_xx
  Expr expect = add(p, scale(mul(ipow_of(jet_u(1), eps_exp(-1)),
                                 mul(imag_unit(), mul(eta(0), jet_xi(2)))),
                             Coefficient::var(Param::Eps)));
  CHECK(equals(r, expect));
}

TEST_CASE("nilpotent powers: binomial expansion stops at the soul's nilpotency") {
  // (1 + 3 eta1 eta2)^eps = 1 + 3 eps eta1 eta2
  Expr base = add(Expr::one(), scale(mul(eta(0), eta(1)), crat(3)));
  Expr p = nilpotent_power(base, eps_exp());
  Expr expect = add(Expr::one(),
                    scale(mul(eta(0), eta(1)), Coefficient::var(Param::Eps) * Coefficient(3)));
  CHECK(equals(p, expect));
  // soul^2 = 0 here, so no eps(eps-1)/2 term survives
  CHECK(p.monomials().size() == 2);
}

TEST_CASE("nilpotent power error cases") {
  CHECK_THROWS_AS(nilpotent_power(jet_xi(1), eps_exp()), ptskdv::MalformedExpression);
  // no invertible part: base is pure soul
  CHECK_THROWS_AS(nilpotent_power(mul(theta(), jet_xi(1)), eps_exp()),
                  ptskdv::MalformedExpression);
  // pure soul with a positive integer exponent is fine (expands, here to zero)
  CHECK(nilpotent_power(mul(theta(), jet_xi(1)), ParamExponent(2)).is_zero());
  // nested powers are rejected
  Expr p = ipow_of(jet_u(1), eps_exp());
  CHECK_THROWS_AS(nilpotent_power(add(p, jet_u()), ParamExponent::var(Param::Kappa)),
                  ptskdv::MalformedExpression);
  // non-unit scalars have no formal power
  CHECK_THROWS_AS(nilpotent_power(sc(crat(2)), eps_exp()), ptskdv::MalformedExpression);
  // but unit scalars do: (-1)^eps = i^{2 eps}
  CHECK(equals(nilpotent_power(sc(crat(-1)), eps_exp()), phase_power(eps_exp() * rat(2))));
}

TEST_CASE("parameter substitution collapses deformed structures") {
  Expr p = ipow_of(jet_u(1), eps_exp());
  // eps = 1: (i u_x)^1 = i u_x
  CHECK(equals(substitute_params(p, {{Param::Eps, rat(1)}}), mul(imag_unit(), jet_u(1))));
  // eps = 3: expands to -i u_x^3 ... here (i u_x)^3 = i^3 u_x^3 = -i u_x^3
  Expr cubed = substitute_params(p, {{Param::Eps, rat(3)}});
  CHECK(equals(cubed, scale(mul(jet_u(1), mul(jet_u(1), jet_u(1))),
                            Coefficient(RationalComplex(rat(0), rat(-1))))));
  // phases evaluate: i^{eps-1} at eps=3 is -1
  Expr ph = phase_power(eps_exp(-1));
  CHECK(equals(substitute_params(ph, {{Param::Eps, rat(3)}}), sc(crat(-1))));
  // deformed xi derivative: eps=1 turns it into xi_x, eps=2 kills it
  Expr dxi = deformed_xi_jet(0, eps_exp());
  CHECK(equals(substitute_params(dxi, {{Param::Eps, rat(1)}}), jet_xi(1)));
  CHECK(substitute_params(dxi, {{Param::Eps, rat(2)}}).is_zero());
  // eps=0 on the underived atom leaves the constant -i
  CHECK(equals(substitute_params(dxi, {{Param::Eps, rat(0)}}),
               sc(Coefficient(RationalComplex(rat(0), rat(-1))))));
  CHECK(substitute_params(deformed_xi_jet(2, eps_exp()), {{Param::Eps, rat(0)}}).is_zero());
}

TEST_CASE("coefficient identities cancel exactly") {
  // eps/(1+eps) - eps * (1+eps)^{-1} = 0 at the expression level
  Coefficient frac(ParamPoly::var(Param::Eps), ParamPoly(1) + ParamPoly::var(Param::Eps));
  Coefficient prod = Coefficient::var(Param::Eps) *
                     Coefficient(ParamPoly(1), ParamPoly(1) + ParamPoly::var(Param::Eps));
  CHECK(sub(sc(frac), sc(prod)).is_zero());
}

TEST_CASE("rendering is deterministic and readable") {
  Expr e = add(scale(mul(jet_u(), jet_u(1)), crat(6)), neg(jet_u(3)));
  CHECK(to_string(e) == "6*u*u_x + -1*u_xxx");
  Expr p = ipow_of(jet_u(1), eps_exp(-1));
  CHECK(to_string(p) == "(i*u_x)^[eps-1]");
  CHECK(to_string(mul(theta(), jet_xi(1))) == "th*xi_x");
  CHECK(to_latex(jet_xi(2)) == "\\xi_{xx}");
}
