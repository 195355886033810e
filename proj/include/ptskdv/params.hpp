// Deformation parameters and the exact coefficient ring.
//
// Coefficients are rational functions in (lambda, eps, kappa, mu, nu) with
// Gaussian-rational numerator coefficients: Laurent in lambda, polynomial in
// the others, denominators restricted to the non-lambda variables.
// Exponents of formal powers are affine forms over (eps, kappa, mu, nu).
#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace ptskdv::sym {

enum class Param : int { Lambda = 0, Eps = 1, Kappa = 2, Mu = 3, Nu = 4 };
inline constexpr int kNumParams = 5;

inline const char* param_name(Param p) {
  switch (p) {
    case Param::Lambda: return "lam";
    case Param::Eps: return "eps";
    case Param::Kappa: return "kappa";
    case Param::Mu: return "mu";
    case Param::Nu: return "nu";
  }
  return "?";
}

inline const char* param_latex(Param p) {
  switch (p) {
    case Param::Lambda: return "\\lambda";
    case Param::Eps: return "\\varepsilon";
    case Param::Kappa: return "\\kappa";
    case Param::Mu: return "\\mu";
    case Param::Nu: return "\\nu";
  }
  return "?";
}

inline std::optional<Param> param_from_name(const std::string& s) {
  for (int k = 0; k < kNumParams; ++k)
    if (s == param_name(static_cast<Param>(k))) return static_cast<Param>(k);
  return std::nullopt;
}

using ParamValues = std::map<Param, BigRat>;

// Affine exponent c0 + sum_p c_p * p over the non-lambda parameters.
struct ParamExponent {
  BigRat lit{0};
  std::map<Param, BigRat> coefs;  // entries always nonzero, never Lambda

  ParamExponent() = default;
  ParamExponent(BigRat literal) : lit(std::move(literal)) {}
  ParamExponent(long long literal) : lit(rat(literal)) {}

  static ParamExponent var(Param p, BigRat c = rat(1)) {
    if (p == Param::Lambda)
      throw std::invalid_argument("lambda cannot appear in a power exponent");
    ParamExponent e;
    if (c != 0) e.coefs[p] = std::move(c);
    return e;
  }

  bool is_literal() const { return coefs.empty(); }
  bool is_literal_int() const { return coefs.empty() && is_integer(lit); }
  std::optional<long long> literal_int() const {
    if (!is_literal_int()) return std::nullopt;
    return to_ll(lit);
  }

  ParamExponent operator+(const ParamExponent& o) const {
    ParamExponent r = *this;
    r.lit += o.lit;
    for (auto& [p, c] : o.coefs) {
      auto it = r.coefs.find(p);
      if (it == r.coefs.end()) r.coefs.emplace(p, c);
      else {
        it->second += c;
        if (it->second == 0) r.coefs.erase(it);
      }
    }
    return r;
  }
  ParamExponent operator-() const {
    ParamExponent r;
    r.lit = -lit;
    for (auto& [p, c] : coefs) r.coefs[p] = -c;
    return r;
  }
  ParamExponent operator-(const ParamExponent& o) const { return *this + (-o); }
  ParamExponent operator*(const BigRat& s) const {
    ParamExponent r;
    if (s == 0) return r;
    r.lit = lit * s;
    for (auto& [p, c] : coefs) r.coefs[p] = c * s;
    return r;
  }

  bool operator==(const ParamExponent& o) const { return lit == o.lit && coefs == o.coefs; }
  bool operator!=(const ParamExponent& o) const { return !(*this == o); }
  bool operator<(const ParamExponent& o) const {
    if (lit != o.lit) return lit < o.lit;
    return coefs < o.coefs;
  }

  // Partial evaluation; drops substituted variables.
  ParamExponent substitute(const ParamValues& vals) const {
    ParamExponent r;
    r.lit = lit;
    for (auto& [p, c] : coefs) {
      auto it = vals.find(p);
      if (it != vals.end()) r.lit += c * it->second;
      else r.coefs[p] = c;
    }
    return r;
  }

  BigRat eval(const ParamValues& vals) const {
    ParamExponent r = substitute(vals);
    if (!r.is_literal()) throw std::invalid_argument("exponent not fully evaluated");
    return r.lit;
  }
};

inline std::string to_string(const ParamExponent& e) {
  if (e.is_literal()) return to_string(e.lit);
  std::string s;
  bool first = true;
  for (auto& [p, c] : e.coefs) {
    std::string term;
    if (c == 1) term = param_name(p);
    else if (c == -1) term = std::string("-") + param_name(p);
    else term = to_string(c) + "*" + param_name(p);
    if (!first && term[0] != '-') s += "+";
    s += term;
    first = false;
  }
  if (e.lit != 0) {
    if (e.lit > 0) s += "+";
    s += to_string(e.lit);
  }
  return s;
}

// Monomial exponent vector over the five parameters.  Lambda may be negative.
using PMono = std::array<int, kNumParams>;

// Sparse polynomial over PMono with Gaussian-rational coefficients.
struct ParamPoly {
  std::map<PMono, RationalComplex> terms;  // values always nonzero

  ParamPoly() = default;
  ParamPoly(RationalComplex c) {
    if (!c.is_zero()) terms.emplace(PMono{0, 0, 0, 0, 0}, std::move(c));
  }
  ParamPoly(long long n) : ParamPoly(RationalComplex(n)) {}

  static ParamPoly var(Param p, int power = 1) {
    ParamPoly r;
    PMono m{0, 0, 0, 0, 0};
    m[static_cast<int>(p)] = power;
    r.terms.emplace(m, RationalComplex(1));
    return r;
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 && terms.begin()->first == PMono{0, 0, 0, 0, 0});
  }
  RationalComplex constant_value() const {
    if (terms.empty()) return RationalComplex(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms.begin()->second;
  }

  void add_term(const PMono& m, const RationalComplex& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) terms.emplace(m, c);
    else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  ParamPoly operator+(const ParamPoly& o) const {
    ParamPoly r = *this;
    for (auto& [m, c] : o.terms) r.add_term(m, c);
    return r;
  }
  ParamPoly operator-() const {
    ParamPoly r;
    for (auto& [m, c] : terms) r.terms.emplace(m, -c);
    return r;
  }
  ParamPoly operator-(const ParamPoly& o) const { return *this + (-o); }
  ParamPoly operator*(const ParamPoly& o) const {
    ParamPoly r;
    for (auto& [m1, c1] : terms)
      for (auto& [m2, c2] : o.terms) {
        PMono m;
        for (int k = 0; k < kNumParams; ++k) m[k] = m1[k] + m2[k];
        r.add_term(m, c1 * c2);
      }
    return r;
  }
  ParamPoly scaled(const RationalComplex& s) const {
    ParamPoly r;
    if (s.is_zero()) return r;
    for (auto& [m, c] : terms) r.terms.emplace(m, c * s);
    return r;
  }
  ParamPoly conj() const {
    ParamPoly r;
    for (auto& [m, c] : terms) r.terms.emplace(m, c.conj());
    return r;
  }

  bool operator==(const ParamPoly& o) const { return terms == o.terms; }
  bool operator!=(const ParamPoly& o) const { return !(*this == o); }
  bool operator<(const ParamPoly& o) const { return terms < o.terms; }

  // Partial evaluation; lambda substitution requires a nonzero value when
  // negative lambda powers are present.
  ParamPoly substitute(const ParamValues& vals) const {
    ParamPoly r;
    for (auto& [m, c] : terms) {
      PMono mm = m;
      RationalComplex cc = c;
      for (auto& [p, v] : vals) {
        int k = static_cast<int>(p);
        if (mm[k] == 0) continue;
        if (v == 0 && mm[k] < 0)
          throw std::domain_error("negative power of parameter evaluated at zero");
        BigRat f = 1;
        long long e = mm[k] >= 0 ? mm[k] : -static_cast<long long>(mm[k]);
        for (long long j = 0; j < e; ++j) f *= v;
        if (mm[k] < 0) {
          if (f == 0) throw std::domain_error("division by zero in parameter substitution");
          cc = cc * RationalComplex(BigRat(1) / f);
        } else {
          cc = cc * RationalComplex(f);
        }
        mm[k] = 0;
      }
      r.add_term(mm, cc);
    }
    return r;
  }
};

inline std::string to_string(const ParamPoly& p) {
  if (p.terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [m, c] : p.terms) {
    std::string factors;
    for (int k = 0; k < kNumParams; ++k) {
      if (m[k] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += param_name(static_cast<Param>(k));
      if (m[k] != 1) factors += "^" + std::to_string(m[k]);
    }
    std::string cs = to_string(c);
    std::string term;
    if (factors.empty()) term = cs;
    else if (c.is_one()) term = factors;
    else if (c == RationalComplex(-1)) term = "-" + factors;
    else term = cs + "*" + factors;
    if (!first && term[0] != '-') s += "+";
    s += term;
    first = false;
  }
  return s;
}

// num/den rational function.  den has no lambda dependence and is kept with
// unit leading coefficient so structurally equal values compare equal.
struct Coefficient {
  ParamPoly num;
  ParamPoly den{1};

  Coefficient() : num(0) {}
  Coefficient(RationalComplex c) : num(std::move(c)) {}
  Coefficient(long long n) : num(n) {}
  Coefficient(ParamPoly n) : num(std::move(n)) { normalize(); }
  Coefficient(ParamPoly n, ParamPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::invalid_argument("zero denominator");
    for (auto& [m, c] : den.terms)
      if (m[static_cast<int>(Param::Lambda)] != 0)
        throw std::invalid_argument("lambda in denominator");
    normalize();
  }

  static Coefficient one() { return Coefficient(1); }
  static Coefficient i_unit() { return Coefficient(RationalComplex::i_unit()); }
  static Coefficient var(Param p, int power = 1) { return Coefficient(ParamPoly::var(p, power)); }

  void normalize() {
    if (num.is_zero()) {
      den = ParamPoly(1);
      return;
    }
    if (den.is_constant()) {
      RationalComplex d = den.constant_value();
      if (!d.is_one()) num = num.scaled(d.inv());
      den = ParamPoly(1);
      return;
    }
    RationalComplex lead = den.terms.begin()->second;
    if (!lead.is_one()) {
      RationalComplex s = lead.inv();
      num = num.scaled(s);
      den = den.scaled(s);
    }
  }

  bool is_zero() const { return num.is_zero(); }
  bool is_one() const { return den == ParamPoly(1) && num == ParamPoly(1); }

  Coefficient operator*(const Coefficient& o) const {
    Coefficient r;
    r.num = num * o.num;
    r.den = den * o.den;
    r.normalize();
    return r;
  }
  Coefficient operator+(const Coefficient& o) const {
    Coefficient r;
    if (den == o.den) {
      r.num = num + o.num;
      r.den = den;
    } else {
      r.num = num * o.den + o.num * den;
      r.den = den * o.den;
    }
    r.normalize();
    return r;
  }
  Coefficient operator-() const {
    Coefficient r = *this;
    r.num = -r.num;
    return r;
  }
  Coefficient operator-(const Coefficient& o) const { return *this + (-o); }
  Coefficient scaled(const RationalComplex& s) const {
    Coefficient r = *this;
    r.num = r.num.scaled(s);
    r.normalize();
    return r;
  }
  // Divide by a polynomial (used when integrating formal powers).
  Coefficient divided_by(const ParamPoly& p) const {
    if (p.is_zero()) throw std::domain_error("division by zero polynomial");
    for (auto& [m, c] : p.terms)
      if (m[static_cast<int>(Param::Lambda)] != 0)
        throw std::invalid_argument("lambda in denominator");
    Coefficient r;
    r.num = num;
    r.den = den * p;
    r.normalize();
    return r;
  }

  Coefficient conj() const {
    Coefficient r;
    r.num = num.conj();
    r.den = den.conj();
    r.normalize();
    return r;
  }

  bool equals(const Coefficient& o) const {
    if (den == o.den) return num == o.num;
    return num * o.den == o.num * den;
  }

  // Partial evaluation; throws on a denominator zero (e.g. eps -> -1 under
  // a 1/(1+eps) coefficient).
  Coefficient substitute(const ParamValues& vals) const {
    ParamPoly n = num.substitute(vals);
    ParamPoly d = den.substitute(vals);
    if (d.is_zero()) throw std::domain_error("coefficient pole under parameter substitution");
    return Coefficient(std::move(n), std::move(d));
  }

  std::complex<double> eval(const std::map<Param, std::complex<double>>& vals) const {
    auto eval_poly = [&](const ParamPoly& p) {
      std::complex<double> acc = 0.0;
      for (auto& [m, c] : p.terms) {
        std::complex<double> t = c.to_complex();
        for (int k = 0; k < kNumParams; ++k) {
          if (m[k] == 0) continue;
          auto it = vals.find(static_cast<Param>(k));
          if (it == vals.end()) throw std::invalid_argument("parameter value missing");
          t *= std::pow(it->second, static_cast<double>(m[k]));
        }
        acc += t;
      }
      return acc;
    };
    std::complex<double> d = eval_poly(den);
    if (d == std::complex<double>(0.0, 0.0))
      throw std::domain_error("coefficient pole in numeric evaluation");
    return eval_poly(num) / d;
  }
};

inline std::string to_string(const Coefficient& c) {
  if (c.den == ParamPoly(1)) {
    if (c.num.terms.size() > 1) return "(" + to_string(c.num) + ")";
    return to_string(c.num);
  }
  return "(" + to_string(c.num) + ")/(" + to_string(c.den) + ")";
}

}  // namespace ptskdv::sym
