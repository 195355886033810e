// Catalog of PT-deformed supersymmetric KdV systems.
//
// Superfield-form models give Phi_t; component-form models give the pair
// (u_t, xi_t).  Parameters are symbolic unless fixed at build time.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deformed.hpp"

namespace ptskdv::super {

enum class ModelId { Skdv, Kdvn, Zs, Xx, Flow };
enum class ModelForm { Superfield, Component };

inline const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::Skdv: return "skdv";
    case ModelId::Kdvn: return "kdvn";
    case ModelId::Zs: return "zs";
    case ModelId::Xx: return "xx";
    case ModelId::Flow: return "flow";
  }
  return "?";
}

inline std::optional<ModelId> model_from_name(const std::string& s) {
  for (ModelId id : {ModelId::Skdv, ModelId::Kdvn, ModelId::Zs, ModelId::Xx, ModelId::Flow})
    if (s == model_name(id)) return id;
  return std::nullopt;
}

inline std::vector<Param> model_params(ModelId id) {
  switch (id) {
    case ModelId::Skdv: return {Param::Lambda};
    case ModelId::Kdvn: return {Param::Lambda};
    case ModelId::Zs: return {Param::Lambda, Param::Eps, Param::Kappa, Param::Mu, Param::Nu};
    case ModelId::Xx: return {Param::Lambda, Param::Eps};
    case ModelId::Flow: return {Param::Eps};
  }
  return {};
}

struct ModelSystem {
  ModelId id{};
  ModelForm form{};
  std::map<Param, std::optional<BigRat>> params;  // declared; value when fixed
  SuperfieldExpr rphi;  // Phi_t (superfield form)
  Expr ru, rxi;         // u_t, xi_t (component form)
};

// Expands a superfield model into components: Phi_t = xi_t + theta u_t.
inline ModelSystem to_components(const ModelSystem& m) {
  if (m.form == ModelForm::Component) return m;
  ModelSystem r = m;
  r.form = ModelForm::Component;
  r.ru = m.rphi.theta_part;
  r.rxi = m.rphi.body;
  if (!r.ru.is_even() && !r.ru.is_zero())
    throw MalformedExpression("u equation is not even");
  if (!r.rxi.is_odd())
    throw MalformedExpression("xi equation is not odd");
  return r;
}

namespace detail {

inline Coefficient lam() { return Coefficient::var(Param::Lambda); }
inline Coefficient inv_one_plus_eps() {
  return Coefficient(ParamPoly(1), ParamPoly(1) + ParamPoly::var(Param::Eps));
}

}  // namespace detail

inline ModelSystem build_model(ModelId id, const ParamValues& fixed = {}) {
  ModelSystem m;
  m.id = id;
  for (Param p : model_params(id)) m.params[p] = std::nullopt;
  for (auto& [p, v] : fixed) {
    auto it = m.params.find(p);
    if (it == m.params.end())
      throw ValidationError(std::string("parameter ") + param_name(p) + " is not used by model " +
                            model_name(id));
    it->second = v;
  }

  SuperfieldExpr P = phi();
  auto D = [&](int n) { return super_D(P, n); };
  Coefficient lam = detail::lam();

  switch (id) {
    case ModelId::Skdv: {
      // Phi_t = -D^6 Phi + lam D^2(Phi D Phi) + (6 - 2 lam) D Phi D^2 Phi
      SuperfieldExpr r = s_neg(D(6));
      r = s_add(r, s_scale(super_D(s_mul(P, D(1)), 2), lam));
      r = s_add(r, s_scale(s_mul(D(1), D(2)), Coefficient(6) - lam * Coefficient(2)));
      m.form = ModelForm::Superfield;
      m.rphi = r;
      break;
    }
    case ModelId::Kdvn: {
      // Phi_t = -D^6 Phi + 6 D Phi D^2 Phi + lam Phi D^3 Phi - lam D Phi D^2 Phi
      SuperfieldExpr r = s_neg(D(6));
      r = s_add(r, s_scale(s_mul(D(1), D(2)), Coefficient(6) - lam));
      r = s_add(r, s_scale(s_mul(P, D(3)), lam));
      m.form = ModelForm::Superfield;
      m.rphi = r;
      break;
    }
    case ModelId::Zs: {
      // Four independently deformed bosonic-family towers.
      ParamExponent eps = ParamExponent::var(Param::Eps);
      ParamExponent kap = ParamExponent::var(Param::Kappa);
      ParamExponent muu = ParamExponent::var(Param::Mu);
      ParamExponent nuu = ParamExponent::var(Param::Nu);
      auto Dt = [&](const ParamExponent& g, int n) {
        return D_family(P, DFamily::Bosonic, g, n);
      };
      SuperfieldExpr r = s_neg(Dt(eps, 6));
      r = s_add(r, s_scale(s_mul(Dt(kap, 1), Dt(kap, 2)), Coefficient(6)));
      r = s_add(r, s_scale(s_mul(P, Dt(muu, 3)), lam));
      r = s_sub(r, s_scale(s_mul(Dt(nuu, 1), Dt(nuu, 2)), lam));
      m.form = ModelForm::Superfield;
      m.rphi = r;
      break;
    }
    case ModelId::Xx: {
      // Check-family deformation of the dispersion term only.
      ParamExponent eps = ParamExponent::var(Param::Eps);
      SuperfieldExpr r = s_neg(D_family(P, DFamily::Check, eps, 6));
      r = s_add(r, s_scale(s_mul(D(1), D(2)), Coefficient(6) - lam));
      r = s_add(r, s_scale(s_mul(P, D(3)), lam));
      m.form = ModelForm::Superfield;
      m.rphi = r;
      break;
    }
    case ModelId::Flow: {
      // Phi_t = 4 DPhi D^2Phi + 2 Phi D^3Phi
      //         - 1/(1+eps) [ Dcheck_eps^6 Phi + i eps D^4(D^2Phi Dcheck_{eps-1}^3 Phi) ]
      ParamExponent eps = ParamExponent::var(Param::Eps);
      SuperfieldExpr r = s_scale(s_mul(D(1), D(2)), Coefficient(4));
      r = s_add(r, s_scale(s_mul(P, D(3)), Coefficient(2)));
      SuperfieldExpr brk = D_family(P, DFamily::Check, eps, 6);
      SuperfieldExpr tail =
          super_D(s_mul(D(2), D_family(P, DFamily::Check, eps - ParamExponent(1), 3)), 4);
      brk = s_add(brk, s_scale(tail, Coefficient::i_unit() * Coefficient::var(Param::Eps)));
      r = s_sub(r, s_scale(brk, detail::inv_one_plus_eps()));
      m.form = ModelForm::Superfield;
      m.rphi = r;
      break;
    }
  }

  ParamValues vals;
  for (auto& [p, v] : m.params)
    if (v) vals[p] = *v;
  if (!vals.empty()) {
    m.rphi.body = substitute_params(m.rphi.body, vals);
    m.rphi.theta_part = substitute_params(m.rphi.theta_part, vals);
  }
  return m;
}

}  // namespace ptskdv::super
