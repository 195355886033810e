// Deterministic text and LaTeX rendering of canonical expressions.
#pragma once

#include <string>

#include "expr.hpp"

namespace ptskdv::sym {

namespace detail {

inline std::string jet_suffix(int x_order, int t_order) {
  std::string s;
  for (int k = 0; k < t_order; ++k) s += 't';
  if (x_order <= 4) {
    for (int k = 0; k < x_order; ++k) s += 'x';
  } else {
    s += "x" + std::to_string(x_order);
  }
  return s;
}

inline std::string jet_text(const Jet& j) {
  std::string s = field_name(j.field);
  std::string suf = jet_suffix(j.x_order, j.t_order);
  if (!suf.empty()) s += "_" + suf;
  return s;
}

inline std::string jet_latex(const Jet& j) {
  std::string base = j.field == Field::Xi ? "\\xi" : field_name(j.field);
  std::string suf = jet_suffix(j.x_order, j.t_order);
  if (suf.empty()) return base;
  return base + "_{" + suf + "}";
}

inline std::string exp_brace(const ParamExponent& g) { return "[" + to_string(g) + "]"; }

}  // namespace detail

inline std::string to_string(const EvenKey& k) {
  if (auto* j = std::get_if<Jet>(&k)) return detail::jet_text(*j);
  const SuperJet& s = std::get<SuperJet>(k);
  if (s.order == 0) return "Phi";
  return "D^" + std::to_string(s.order) + "Phi";
}

inline std::string to_string(const OddAtom& a) {
  if (auto* e = std::get_if<EtaGen>(&a)) return "eta" + std::to_string(e->index + 1);
  if (std::get_if<ThetaAtom>(&a)) return "th";
  if (auto* j = std::get_if<Jet>(&a)) return detail::jet_text(*j);
  if (auto* d = std::get_if<DeformedXiJet>(&a)) {
    std::string core = "dxe[xi;" + to_string(d->eps) + "]";
    if (d->order == 0) return core;
    return "dx^" + std::to_string(d->order) + "(" + core + ")";
  }
  const SuperJet& s = std::get<SuperJet>(a);
  if (s.order == 0) return "Phi";
  return "D^" + std::to_string(s.order) + "Phi";
}

std::string to_string(const Expr& e);

inline std::string to_string(const Monomial& m) {
  std::string s;
  auto push = [&](const std::string& f) {
    if (!s.empty()) s += "*";
    s += f;
  };
  if (!m.coef.is_one()) push(to_string(m.coef));
  if (!(m.phase == ParamExponent())) push("ipw" + detail::exp_brace(m.phase));
  for (auto& [k, p] : m.evens) {
    std::string f = to_string(k);
    if (p != 1) f += "^" + std::to_string(p);
    push(f);
  }
  for (auto& fp : m.powers)
    push("(" + to_string(*fp.base) + ")^" + detail::exp_brace(fp.exponent));
  for (auto& a : m.odds) push(to_string(a));
  if (s.empty()) s = "1";
  return s;
}

inline std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string s;
  for (auto& m : e.monomials()) {
    if (!s.empty()) s += " + ";
    s += to_string(m);
  }
  return s;
}

// ---------------------------------------------------------------------------
// LaTeX-ish rendering.

namespace detail {

inline std::string latex_exponent(const ParamExponent& g) {
  if (g.is_literal()) return ptskdv::sym::to_string(g.lit);
  std::string s;
  bool first = true;
  for (auto& [p, c] : g.coefs) {
    std::string term;
    if (c == 1) term = param_latex(p);
    else if (c == -1) term = std::string("-") + param_latex(p);
    else term = ptskdv::sym::to_string(c) + param_latex(p);
    if (!first && term[0] != '-') s += "+";
    s += term;
    first = false;
  }
  if (g.lit != 0) {
    if (g.lit > 0) s += "+";
    s += ptskdv::sym::to_string(g.lit);
  }
  return s;
}

inline std::string latex_coefficient(const Coefficient& c) {
  // Compact forms for the common cases; anything else renders as a fraction
  // of polynomial strings.
  if (c.den == ParamPoly(1) && c.num.is_constant()) {
    RationalComplex v = c.num.constant_value();
    if (v == RationalComplex(1)) return "";
    if (v == RationalComplex(-1)) return "-";
    if (v == RationalComplex::i_unit()) return "i";
    if (v == -RationalComplex::i_unit()) return "-i";
    return ptskdv::sym::to_string(v);
  }
  std::string num = ptskdv::sym::to_string(c.num);
  for (int k = 0; k < kNumParams; ++k) {
    Param p = static_cast<Param>(k);
    std::string from = param_name(p);
    std::string to = param_latex(p);
    size_t pos = 0;
    while ((pos = num.find(from, pos)) != std::string::npos) {
      num.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  if (c.den == ParamPoly(1)) return "(" + num + ")";
  std::string den = ptskdv::sym::to_string(c.den);
  for (int k = 0; k < kNumParams; ++k) {
    Param p = static_cast<Param>(k);
    std::string from = param_name(p);
    std::string to = param_latex(p);
    size_t pos = 0;
    while ((pos = den.find(from, pos)) != std::string::npos) {
      den.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return "\\frac{" + num + "}{" + den + "}";
}

}  // namespace detail

std::string to_latex(const Expr& e);

inline std::string to_latex(const Monomial& m) {
  std::string s = detail::latex_coefficient(m.coef);
  auto push = [&](const std::string& f) {
    if (!s.empty() && s != "-") s += " ";
    s += f;
  };
  if (!(m.phase == ParamExponent())) push("i^{" + detail::latex_exponent(m.phase) + "}");
  for (auto& [k, p] : m.evens) {
    std::string f;
    if (auto* j = std::get_if<Jet>(&k)) f = detail::jet_latex(*j);
    else {
      const SuperJet& sj = std::get<SuperJet>(k);
      f = sj.order == 0 ? "\\Phi" : "D^{" + std::to_string(sj.order) + "}\\Phi";
    }
    if (p != 1) f = f + "^{" + std::to_string(p) + "}";
    push(f);
  }
  for (auto& fp : m.powers)
    push("\\left(" + to_latex(*fp.base) + "\\right)^{" + detail::latex_exponent(fp.exponent) +
         "}");
  for (auto& a : m.odds) {
    if (auto* eg = std::get_if<EtaGen>(&a)) push("\\eta_{" + std::to_string(eg->index + 1) + "}");
    else if (std::get_if<ThetaAtom>(&a)) push("\\theta");
    else if (auto* j = std::get_if<Jet>(&a)) push(detail::jet_latex(*j));
    else if (auto* d = std::get_if<DeformedXiJet>(&a)) {
      std::string core = "\\partial_{x," + detail::latex_exponent(d->eps) + "}\\xi";
      if (d->order > 0) core = "\\partial_x^{" + std::to_string(d->order) + "}" + core;
      push(core);
    } else {
      const SuperJet& sj = std::get<SuperJet>(a);
      push(sj.order == 0 ? "\\Phi" : "D^{" + std::to_string(sj.order) + "}\\Phi");
    }
  }
  if (s.empty()) s = "1";
  else if (s == "-") s = "-1";
  return s;
}

inline std::string to_latex(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string s;
  for (auto& m : e.monomials()) {
    std::string t = to_latex(m);
    if (!s.empty()) {
      if (!t.empty() && t[0] == '-') s += " - ", t = t.substr(1);
      else s += " + ";
    }
    s += t;
  }
  return s;
}

}  // namespace ptskdv::sym
