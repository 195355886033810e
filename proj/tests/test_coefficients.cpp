#include <catch2/catch_amalgamated.hpp>

#include "ptskdv/params.hpp"

using namespace ptskdv::sym;

TEST_CASE("rational complex arithmetic is exact") {
  RationalComplex a(rat(1, 3), rat(2));
  RationalComplex b(rat(-2), rat(1, 5));
  CHECK((a * b) == RationalComplex(rat(-16, 15), rat(-59, 15)));
  CHECK((a + b) == RationalComplex(rat(-5, 3), rat(11, 5)));
  CHECK(a * a.inv() == RationalComplex(1));
  CHECK(a.conj().conj() == a);
  CHECK(RationalComplex::i_pow(2) == RationalComplex(-1));
  CHECK(RationalComplex::i_pow(-1) == RationalComplex(rat(0), rat(-1)));
  CHECK(RationalComplex::i_pow(7) == RationalComplex(rat(0), rat(-1)));
  CHECK(RationalComplex(rat(2), rat(3)).pow(3) == RationalComplex(rat(-46), rat(9)));
}

TEST_CASE("affine exponents") {
  ParamExponent e = ParamExponent::var(Param::Eps);
  ParamExponent g = e - ParamExponent(1);
  CHECK(!g.is_literal());
  CHECK((g + ParamExponent(1)) == e);
  CHECK((e - e).is_literal_int());
  CHECK(g.substitute({{Param::Eps, rat(3)}}).literal_int() == 2);
  CHECK(ParamExponent::var(Param::Eps, rat(2)).eval({{Param::Eps, rat(1, 2)}}) == rat(1));
  CHECK_THROWS(ParamExponent::var(Param::Lambda));
  CHECK(to_string(g) == "eps-1");
}

TEST_CASE("parameter polynomials") {
  ParamPoly eps = ParamPoly::var(Param::Eps);
  ParamPoly p = (eps - ParamPoly(1)) * eps;  // eps^2 - eps
  CHECK(p.substitute({{Param::Eps, rat(3)}}).constant_value() == RationalComplex(6));
  ParamPoly lam_inv = ParamPoly::var(Param::Lambda, -1);
  CHECK((lam_inv * ParamPoly::var(Param::Lambda)).is_constant());
  CHECK_THROWS_AS(lam_inv.substitute({{Param::Lambda, rat(0)}}), std::domain_error);
}

TEST_CASE("coefficient field: rational functions with structural normal form") {
  Coefficient eps = Coefficient::var(Param::Eps);
  Coefficient one_plus = Coefficient(1) + eps;
  // eps/(1+eps) constructed two different ways
  Coefficient a = Coefficient(ParamPoly::var(Param::Eps), ParamPoly(1) + ParamPoly::var(Param::Eps));
  Coefficient b = eps * Coefficient(ParamPoly(1), ParamPoly(1) + ParamPoly::var(Param::Eps));
  CHECK(a.equals(b));
  CHECK((a - b).is_zero());
  // (1 - eps^2)/(1+eps) == (1-eps) only after cross-multiplied comparison
  Coefficient c(ParamPoly(1) - ParamPoly::var(Param::Eps) * ParamPoly::var(Param::Eps),
                ParamPoly(1) + ParamPoly::var(Param::Eps));
  Coefficient d = Coefficient(1) - eps;
  CHECK(c.equals(d));
  CHECK_FALSE(c.equals(eps));
  CHECK((one_plus * a).equals(eps));
}

TEST_CASE("coefficient substitution and poles") {
  Coefficient a(ParamPoly::var(Param::Eps), ParamPoly(1) + ParamPoly::var(Param::Eps));
  CHECK(a.substitute({{Param::Eps, rat(1)}}).equals(Coefficient(RationalComplex(rat(1, 2)))));
  CHECK_THROWS_AS(a.substitute({{Param::Eps, rat(-1)}}), std::domain_error);
  Coefficient lam = Coefficient::var(Param::Lambda);
  Coefficient m = lam * a;
  Coefficient partial = m.substitute({{Param::Eps, rat(2)}});
  CHECK(partial.equals(lam.scaled(RationalComplex(rat(2, 3)))));
  auto v = m.eval({{Param::Lambda, {3.0, 0.0}}, {Param::Eps, {2.0, 0.0}}});
  CHECK(std::abs(v - std::complex<double>(2.0, 0.0)) < 1e-14);
}

TEST_CASE("denominators stay lambda-free") {
  CHECK_THROWS_AS(Coefficient(ParamPoly(1), ParamPoly::var(Param::Lambda)), std::invalid_argument);
  Coefficient a(ParamPoly(1), ParamPoly(1) + ParamPoly::var(Param::Eps));
  CHECK_THROWS_AS(a.divided_by(ParamPoly::var(Param::Lambda)), std::invalid_argument);
  Coefficient b = a.divided_by(ParamPoly::var(Param::Eps));
  CHECK((b * Coefficient::var(Param::Eps)).equals(a));
}
