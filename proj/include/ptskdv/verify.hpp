// Runtime verification suites.  Each suite re-derives a block of the symbolic
// calculus and checks it against independently frozen closed forms, so the
// command line tool can certify a build without the test harness present.
//
// Checks that assert a breakdown (a residual that must NOT vanish) pass only
// when the residual is both formally nonzero and certified nonzero by exact
// rational evaluation at generic jets.
#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ptskdv/deformed.hpp"
#include "ptskdv/models.hpp"
#include "ptskdv/render.hpp"
#include "ptskdv/transforms.hpp"
#include "ptskdv/variational.hpp"

namespace ptskdv::super {

struct VerifyCheck {
  std::string id;
  bool pass = false;
  std::string detail;  // empty on pass, residual or reason on failure
  double wall_ms = 0.0;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace vdetail {

struct Outcome {
  bool pass = false;
  std::string detail;
};

inline void run_check(VerifyReport& rep, std::string id, const std::function<Outcome()>& body) {
  VerifyCheck c;
  c.id = std::move(id);
  auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = body();
    c.pass = o.pass;
    c.detail = std::move(o.detail);
  } catch (const std::exception& ex) {
    c.pass = false;
    c.detail = std::string("exception: ") + ex.what();
  }
  c.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rep.checks.push_back(std::move(c));
}

inline Outcome expect_equal(const Expr& got, const Expr& want) {
  if (equals(got, want)) return {true, ""};
  return {false, "got " + to_string(got) + "  !=  " + to_string(want)};
}

inline Outcome expect_zero(const Expr& e, const std::string& label) {
  if (e.is_zero()) return {true, ""};
  return {false, label + " residual " + to_string(e)};
}

inline Outcome expect_invariant(const TransformReport& r) {
  if (r.invariant) return {true, ""};
  for (const auto& [label, res] : r.residuals)
    if (!res.is_zero()) return {false, label + " residual " + to_string(res)};
  return {false, "not invariant"};
}

// Pass-when-noninvariant: the breakdown must be real, not a cancellation bug,
// so at least one residual has to survive exact numeric evaluation.
inline Outcome expect_broken(const TransformReport& r, const ParamValues& at) {
  if (r.invariant)
    return {false, "expected a nonvanishing residual, but every equation closes identically"};
  for (const auto& [label, res] : r.residuals)
    if (!res.is_zero() && certify_nonzero(res, at))
      return {true, ""};
  return {false, "residual could not be certified nonzero at generic jets"};
}

inline ParamExponent eps_exp(long long shift = 0) {
  return ParamExponent::var(Param::Eps) + ParamExponent(shift);
}

inline Expr ipow_of(const Expr& base, const ParamExponent& g) {
  return nilpotent_power(mul(imag_unit(), base), g);
}

inline Coefficient ceps(long long shift = 0) {
  return Coefficient::var(Param::Eps) + Coefficient(shift);
}

inline Expr minus_i() { return sc(Coefficient(RationalComplex(rat(0), rat(-1)))); }

inline Coefficient over_one_plus_eps(RationalComplex num) {
  return Coefficient(ParamPoly(std::move(num)), ParamPoly(1) + ParamPoly::var(Param::Eps));
}

inline bool s_equals(const SuperfieldExpr& a, const SuperfieldExpr& b) {
  return equals(a.body, b.body) && equals(a.theta_part, b.theta_part);
}

inline SuperfieldExpr subst_params(const SuperfieldExpr& s, const ParamValues& v) {
  return {substitute_params(s.body, v), substitute_params(s.theta_part, v)};
}

// u_t = 6 u u_x - u_xxx - lam xi xi_xx
inline Expr classic_ut() {
  Coefficient lam = Coefficient::var(Param::Lambda);
  return sub(sub(scale(mul(jet_u(), jet_u(1)), Coefficient(6)), jet_u(3)),
             scale(mul(jet_xi(0), jet_xi(2)), lam));
}

// xi_t = -xi_xxx + (6 - lam) u xi_x + lam xi u_x
inline Expr classic_xit() {
  Coefficient lam = Coefficient::var(Param::Lambda);
  return add(add(neg(jet_xi(3)), scale(mul(jet_u(), jet_xi(1)), Coefficient(6) - lam)),
             scale(mul(jet_xi(0), jet_u(1)), lam));
}

// u^3 - 2 u xi xi_x - 1/(1+eps) (i u_x)^{eps+1} - eps/(1+eps) (i u_x)^{eps-1} xi_x xi_xx
inline Expr frozen_integrand() {
  Expr cubic = mul(jet_u(0), mul(jet_u(0), jet_u(0)));
  Expr pair = scale(mul(jet_u(0), mul(jet_xi(0), jet_xi(1))), Coefficient(-2));
  Expr power = scale(ipow_of(jet_u(1), eps_exp(1)), over_one_plus_eps(RationalComplex(-1)));
  Expr mixed = scale(mul(ipow_of(jet_u(1), eps_exp(-1)), mul(jet_xi(1), jet_xi(2))),
                     Coefficient(ParamPoly::var(Param::Eps).scaled(RationalComplex(-1)),
                                 ParamPoly(1) + ParamPoly::var(Param::Eps)));
  return add(add(cubic, pair), add(power, mixed));
}

// eta (xi u^2 - i/(1+eps) (i u_x)^eps xi_x)
inline Expr frozen_witness() {
  Expr a = mul(mul(mul(jet_u(0), jet_u(0)), eta(0)), jet_xi(0));
  Expr b = scale(mul(mul(ipow_of(jet_u(1), eps_exp(0)), eta(0)), jet_xi(1)),
                 over_one_plus_eps(RationalComplex(rat(0), rat(-1))));
  return add(a, b);
}

// Random expressions built from atoms the parity transform supports.
inline Expr random_pt_supported(std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  if (depth == 0) {
    switch (pick(8)) {
      case 0: return sc(pick(9) - 4);
      case 1: return scale(imag_unit(), Coefficient(RationalComplex(rat(pick(5) + 1, pick(3) + 1))));
      case 2: return jet_u(pick(4), pick(2));
      case 3: return jet_f(pick(3));
      case 4: return jet_xi(pick(4), pick(2));
      case 5: return theta();
      case 6: return ipow_of(jet_u(1), eps_exp(pick(5) - 2));
      default: return ipow_of(jet_u(3), eps_exp(pick(3) - 1));
    }
  }
  Expr a = random_pt_supported(rng, depth - 1);
  Expr b = random_pt_supported(rng, depth - 1);
  return pick(2) == 0 ? add(a, b) : mul(a, b);
}

// Random theta-free, t-free densities for Euler operator property checks.
inline Expr random_density(std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  if (depth == 0) {
    switch (pick(7)) {
      case 0: return sc(pick(7) - 3);
      case 1: return jet_u(pick(4));
      case 2: return jet_f(pick(3));
      case 3: return jet_xi(pick(4));
      case 4: return eta(pick(2));
      default: return ipow_of(jet_u(1), eps_exp(pick(5) - 2));
    }
  }
  Expr a = random_density(rng, depth - 1);
  Expr b = random_density(rng, depth - 1);
  return pick(2) == 0 ? add(a, b) : mul(a, b);
}

inline ModelSystem component_system(Expr ru, Expr rxi) {
  ModelSystem m;
  m.id = ModelId::Skdv;
  m.form = ModelForm::Component;
  m.ru = std::move(ru);
  m.rxi = std::move(rxi);
  return m;
}

}  // namespace vdetail

// ---------------------------------------------------------------------------
// Suite: closed forms of the deformed x-derivative.

inline VerifyReport verify_derivatives() {
  using namespace vdetail;
  VerifyReport rep;
  rep.suite = "derivatives";

  run_check(rep, "first_order_closed_form", [] {
    Expr got = deformed_partial(Field::F, eps_exp(), 1);
    return expect_equal(got, mul(minus_i(), ipow_of(jet_f(1), eps_exp())));
  });

  run_check(rep, "second_order_closed_form", [] {
    Expr got = deformed_partial(Field::F, eps_exp(), 2);
    return expect_equal(got, scale(mul(ipow_of(jet_f(1), eps_exp(-1)), jet_f(2)), ceps()));
  });

  run_check(rep, "third_order_closed_form", [] {
    Expr got = deformed_partial(Field::F, eps_exp(), 3);
    Expr want =
        add(scale(mul(mul(imag_unit(), ipow_of(jet_f(1), eps_exp(-2))), mul(jet_f(2), jet_f(2))),
                  ceps() * ceps(-1)),
            scale(mul(ipow_of(jet_f(1), eps_exp(-1)), jet_f(3)), ceps()));
    return expect_equal(got, want);
  });

  run_check(rep, "fourth_order_closed_form", [] {
    Expr got = deformed_partial(Field::F, eps_exp(), 4);
    Expr fxx = jet_f(2), fxxx = jet_f(3), fxxxx = jet_f(4);
    Expr inv_fx = nilpotent_power(jet_f(1), ParamExponent(-1));
    Expr inv_fx2 = nilpotent_power(jet_f(1), ParamExponent(-2));
    Expr inv_fx3 = nilpotent_power(jet_f(1), ParamExponent(-3));
    Coefficient poly = Coefficient(2) + ceps() * ceps(-3);
    Expr bracket = add(add(scale(mul(mul(fxx, mul(fxx, fxx)), inv_fx3), poly),
                           scale(mul(mul(fxx, fxxx), inv_fx2), ceps(-1) * Coefficient(3))),
                       mul(fxxxx, inv_fx));
    Expr want = scale(mul(mul(minus_i(), ipow_of(jet_f(1), eps_exp())), bracket), ceps());
    return expect_equal(got, want);
  });

  run_check(rep, "half_negative_parameter_schwarzian", [] {
    // third order at eps = -1/2: -1/2 (i f_x)^{-3/2} (f_xxx - 3/2 f_xx^2 / f_x)
    ParamExponent mh{rat(-1, 2)};
    Expr got = deformed_partial(Field::F, mh, 3);
    Expr bracket = sub(jet_f(3), scale(mul(mul(jet_f(2), jet_f(2)),
                                           nilpotent_power(jet_f(1), ParamExponent(-1))),
                                       Coefficient(RationalComplex(rat(3, 2)))));
    Expr want = scale(mul(ipow_of(jet_f(1), ParamExponent(rat(-3, 2))), bracket),
                      Coefficient(RationalComplex(rat(-1, 2))));
    return expect_equal(got, want);
  });

  run_check(rep, "unit_parameter_collapse", [] {
    for (int n = 1; n <= 4; ++n) {
      Expr d = substitute_params(deformed_partial(Field::U, eps_exp(), n), {{Param::Eps, rat(1)}});
      if (!equals(d, jet_u(n)))
        return Outcome{false, "order " + std::to_string(n) + ": " + to_string(d)};
    }
    return Outcome{true, ""};
  });

  run_check(rep, "integer_parameter_polynomial", [] {
    Expr got = substitute_params(deformed_partial(Field::U, eps_exp(), 1), {{Param::Eps, rat(3)}});
    return expect_equal(got, neg(mul(jet_u(1), mul(jet_u(1), jet_u(1)))));
  });

  run_check(rep, "sum_rule_fails_generically", [] {
    Expr lhs = deformed_partial_of(add(jet_u(), jet_f()), eps_exp(), 1);
    Expr rhs = add(deformed_partial(Field::U, eps_exp(), 1), deformed_partial(Field::F, eps_exp(), 1));
    if (equals(lhs, rhs)) return Outcome{false, "operator distributed over a sum"};
    Expr at_one = sub(substitute_params(lhs, {{Param::Eps, rat(1)}}),
                      substitute_params(rhs, {{Param::Eps, rat(1)}}));
    return expect_zero(at_one, "unit-parameter");
  });

  return rep;
}

// ---------------------------------------------------------------------------
// Suite: superderivative family tables on the base superfield.

inline VerifyReport verify_tables() {
  using namespace vdetail;
  VerifyReport rep;
  rep.suite = "tables";

  auto check_table = [](DFamily fam, const std::vector<SuperfieldExpr>& want) -> Outcome {
    SuperfieldExpr P = phi();
    for (int n = 1; n <= static_cast<int>(want.size()); ++n) {
      SuperfieldExpr got = D_family(P, fam, eps_exp(), n);
      if (!s_equals(got, want[n - 1]))
        return {false, std::string(family_name(fam)) + " order " + std::to_string(n) +
                           ": body " + to_string(got.body) + ", theta " + to_string(got.theta_part)};
    }
    return {true, ""};
  };
  auto dxu = [](int m) { return deformed_partial(Field::U, eps_exp(), m); };
  auto dxxi = [](int m) { return deformed_xi_jet(m - 1, eps_exp()); };

  run_check(rep, "both_towers_deformed_orders_1_to_6", [&] {
    std::vector<SuperfieldExpr> want = {
        {jet_u(0), dxxi(1)},  {dxxi(1), dxu(1)}, {dxu(1), dxxi(2)},
        {dxxi(2), dxu(2)},    {dxu(2), dxxi(3)}, {dxxi(3), dxu(3)},
    };
    return check_table(DFamily::Bf, want);
  });

  run_check(rep, "odd_tower_deformed_orders_1_to_6", [&] {
    std::vector<SuperfieldExpr> want = {
        {jet_u(0), dxxi(1)}, {dxxi(1), jet_u(1)}, {jet_u(1), dxxi(2)},
        {dxxi(2), jet_u(2)}, {jet_u(2), dxxi(3)}, {dxxi(3), jet_u(3)},
    };
    return check_table(DFamily::Fermionic, want);
  });

  run_check(rep, "even_tower_deformed_orders_1_to_6", [&] {
    std::vector<SuperfieldExpr> want = {
        {jet_u(0), jet_xi(1)}, {jet_xi(1), dxu(1)}, {dxu(1), jet_xi(2)},
        {jet_xi(2), dxu(2)},   {dxu(2), jet_xi(3)}, {jet_xi(3), dxu(3)},
    };
    return check_table(DFamily::Bosonic, want);
  });

  run_check(rep, "cubed_operator_deformation_orders_3_and_6", [&] {
    SuperfieldExpr P = phi();
    if (!s_equals(D_family(P, DFamily::Check, eps_exp(), 1), super_D(P)))
      return Outcome{false, "order 1 is not the plain superderivative"};
    if (!s_equals(D_family(P, DFamily::Check, eps_exp(), 2), super_D(P, 2)))
      return Outcome{false, "order 2 is not the plain second superderivative"};
    SuperfieldExpr c3 = D_family(P, DFamily::Check, eps_exp(), 3);
    if (!equals(c3.body, dxu(1)))
      return Outcome{false, "order 3 body " + to_string(c3.body)};
    Expr theta3 = scale(mul(ipow_of(jet_u(1), eps_exp(-1)), jet_xi(2)), Coefficient::var(Param::Eps));
    if (!equals(c3.theta_part, theta3))
      return Outcome{false, "order 3 theta part " + to_string(c3.theta_part)};
    SuperfieldExpr c6 = D_family(P, DFamily::Check, eps_exp(), 6);
    Expr body6 = scale(add(mul(deformed_partial(Field::U, eps_exp(-1), 2), jet_xi(2)),
                           mul(deformed_partial(Field::U, eps_exp(-1), 1), jet_xi(3))),
                       Coefficient::i_unit() * Coefficient::var(Param::Eps));
    if (!equals(c6.body, body6))
      return Outcome{false, "order 6 body " + to_string(c6.body)};
    if (!equals(c6.theta_part, dxu(3)))
      return Outcome{false, "order 6 theta part " + to_string(c6.theta_part)};
    return Outcome{true, ""};
  });

  run_check(rep, "unit_parameter_collapse_all_families", [] {
    SuperfieldExpr P = phi();
    for (DFamily fam : {DFamily::Bf, DFamily::Fermionic, DFamily::Bosonic, DFamily::Check}) {
      for (int n = 1; n <= 6; ++n) {
        SuperfieldExpr d = subst_params(D_family(P, fam, eps_exp(), n), {{Param::Eps, rat(1)}});
        if (!s_equals(d, super_D(P, n)))
          return Outcome{false, std::string(family_name(fam)) + " order " + std::to_string(n)};
      }
    }
    return Outcome{true, ""};
  });

  run_check(rep, "square_law_breaks_under_deformation", [] {
    SuperfieldExpr P = phi();
    Expr diff = sub(join_theta(D_family(P, DFamily::Bf, eps_exp(), 2)), x_derivative(join_theta(P)));
    if (diff.is_zero()) return Outcome{false, "squared operator still equals d_x"};
    Expr at_one = substitute_params(diff, {{Param::Eps, rat(1)}});
    return expect_zero(at_one, "unit-parameter square law");
  });

  return rep;
}

// ---------------------------------------------------------------------------
// Suite: parity-time covariance.

inline VerifyReport verify_pt() {
  using namespace vdetail;
  VerifyReport rep;
  rep.suite = "pt";

  run_check(rep, "double_application_is_identity", [] {
    std::mt19937 rng(77001);
    for (int k = 0; k < 200; ++k) {
      Expr e = random_pt_supported(rng, 2);
      if (!equals(pt_transform(pt_transform(e)), e))
        return Outcome{false, "involution broke on " + to_string(e)};
    }
    return Outcome{true, ""};
  });

  run_check(rep, "split_superfield_pair_covariant", [] {
    return expect_invariant(pt_invariant(build_model(ModelId::Skdv)));
  });
  run_check(rep, "nonsplit_superfield_pair_covariant", [] {
    return expect_invariant(pt_invariant(build_model(ModelId::Kdvn)));
  });
  run_check(rep, "independent_deformations_covariant", [] {
    return expect_invariant(pt_invariant(build_model(ModelId::Zs)));
  });
  run_check(rep, "dispersion_deformation_covariant", [] {
    return expect_invariant(pt_invariant(build_model(ModelId::Xx)));
  });
  run_check(rep, "hamiltonian_flow_covariant", [] {
    return expect_invariant(pt_invariant(build_model(ModelId::Flow)));
  });

  run_check(rep, "component_density_covariant", [] {
    return expect_invariant(pt_invariant_density(hdef_integrand(), false));
  });
  run_check(rep, "superspace_density_covariant", [] {
    return expect_invariant(pt_invariant_density(substitute_superjets(hdef_density()), true));
  });

  run_check(rep, "diffusion_pair_breaks_covariance", [] {
    TransformReport r = pt_invariant(component_system(jet_u(2), jet_xi(2)));
    return expect_broken(r, {});
  });

  return rep;
}

// ---------------------------------------------------------------------------
// Suite: on-shell supersymmetry closure.

inline VerifyReport verify_susy() {
  using namespace vdetail;
  VerifyReport rep;
  rep.suite = "susy";

  run_check(rep, "deformed_derivative_variation_rule", [] {
    // delta(d_{x,eps} u) = eps (i u_x)^{eps-1} eta xi_xx
    Expr d1 = deformed_partial(Field::U, eps_exp(0), 1);
    Expr delta = sub(susy_transform(d1), d1);
    Expr want = scale(mul(mul(ipow_of(jet_u(1), eps_exp(-1)), eta(0)), jet_xi(2)),
                      Coefficient::var(Param::Eps));
    return expect_equal(delta, want);
  });

  run_check(rep, "split_superfield_pair_closes", [] {
    return expect_invariant(susy_invariant(build_model(ModelId::Skdv)));
  });
  run_check(rep, "nonsplit_superfield_pair_closes", [] {
    return expect_invariant(susy_invariant(build_model(ModelId::Kdvn)));
  });

  run_check(rep, "aligned_deformations_close", [] {
    ParamValues ones = {{Param::Eps, rat(1)}, {Param::Kappa, rat(1)},
                        {Param::Mu, rat(1)}, {Param::Nu, rat(1)}};
    return expect_invariant(susy_invariant(build_model(ModelId::Zs, ones)));
  });

  run_check(rep, "offset_deformation_breaks_closure", [] {
    // dispersion exponent moved off the aligned point; pass-when-noninvariant
    ParamValues vals = {{Param::Eps, rat(2)}, {Param::Kappa, rat(1)},
                        {Param::Mu, rat(1)}, {Param::Nu, rat(1)}};
    TransformReport r = susy_invariant(build_model(ModelId::Zs, vals));
    return expect_broken(r, {{Param::Lambda, rat(3)}});
  });

  run_check(rep, "dispersion_deformation_even_equation_closes", [] {
    TransformReport r = susy_invariant(build_model(ModelId::Xx));
    for (const auto& [label, res] : r.residuals)
      if (label == "u") return expect_zero(res, "u");
    return Outcome{false, "no u residual reported"};
  });

  run_check(rep, "dispersion_deformation_odd_equation_breaks_closure", [] {
    // pass-when-noninvariant; the variation in fact cancels, so this check
    // reports the cancellation instead of inventing a residual
    TransformReport r = susy_invariant(build_model(ModelId::Xx));
    const Expr* rxi = nullptr;
    for (const auto& [label, res] : r.residuals)
      if (label == "xi") rxi = &res;
    if (rxi == nullptr) return Outcome{false, "no xi residual reported"};
    if (rxi->is_zero())
      return Outcome{false,
                     "expected the odd equation to break the on-shell closure, but its "
                     "variation cancels identically: the deformed dispersion terms of the "
                     "odd equation reassemble into the third deformed derivative of u, so "
                     "the whole pair is supersymmetric"};
    if (!certify_nonzero(*rxi, {{Param::Lambda, rat(3)}}))
      return Outcome{false, "xi residual could not be certified nonzero"};
    return Outcome{true, ""};
  });

  run_check(rep, "integrand_variation_is_total_derivative", [] {
    Expr integ = hdef_integrand();
    Expr delta = sub(susy_transform(integ), integ);
    auto r = is_total_x_derivative(delta);
    if (!r.exact) return Outcome{false, "variation is not exact"};
    if (!r.witness) return Outcome{false, "no antiderivative witness produced"};
    if (!equals(*r.witness, frozen_witness()))
      return Outcome{false, "witness " + to_string(*r.witness)};
    if (!equals(x_derivative(*r.witness), delta))
      return Outcome{false, "witness derivative does not reproduce the variation"};
    return Outcome{true, ""};
  });

  return rep;
}

// ---------------------------------------------------------------------------
// Suite: Hamiltonian density, variational flow, and component structure.

inline VerifyReport verify_hamiltonian() {
  using namespace vdetail;
  VerifyReport rep;
  rep.suite = "hamiltonian";

  run_check(rep, "superfield_partial_derivatives", [] {
    Expr d3 = partial_superjet(hdef_density(), 3);
    Expr want3 = scale(mul(superjet(2), nilpotent_power(mul(imag_unit(), superjet(3)), eps_exp(-1))),
                       Coefficient(ParamPoly::var(Param::Eps),
                                   ParamPoly(1) + ParamPoly::var(Param::Eps)));
    if (!equals(d3, want3)) return Outcome{false, "third-symbol partial " + to_string(d3)};
    Expr d1 = partial_superjet(hdef_density(), 1);
    return expect_equal(d1, scale(mul(superjet(0), superjet(1)), Coefficient(2)));
  });

  run_check(rep, "component_integrand_reduction", [] {
    return expect_equal(hdef_integrand(), frozen_integrand());
  });

  run_check(rep, "variational_flow_matches_direct_construction", [] {
    SuperfieldExpr flow = hamiltonian_flow(hdef_density());
    ModelSystem direct = build_model(ModelId::Flow);
    if (!equals(flow.body, direct.rphi.body))
      return Outcome{false, "body " + to_string(flow.body)};
    if (!equals(flow.theta_part, direct.rphi.theta_part))
      return Outcome{false, "theta part " + to_string(flow.theta_part)};
    return Outcome{true, ""};
  });

  run_check(rep, "flow_components_have_hamiltonian_structure", [] {
    // u_t = d_x(E_u h), xi_t = -E_xi h
    ModelSystem m = to_components(build_model(ModelId::Flow));
    Expr h = hdef_integrand();
    if (!equals(m.ru, x_derivative(euler_operator(h, Field::U))))
      return Outcome{false, "even flow is not the x-derivative of the even Euler expression"};
    if (!equals(m.rxi, neg(euler_operator(h, Field::Xi))))
      return Outcome{false, "odd flow is not minus the odd Euler expression"};
    return Outcome{true, ""};
  });

  run_check(rep, "unit_parameter_flow_is_classic_pair", [] {
    ModelSystem m = to_components(build_model(ModelId::Flow));
    ParamValues one = {{Param::Eps, rat(1)}};
    ModelSystem classic = to_components(build_model(ModelId::Kdvn, ParamValues{{Param::Lambda, rat(2)}}));
    if (!equals(substitute_params(m.ru, one), classic.ru))
      return Outcome{false, "even equation " + to_string(substitute_params(m.ru, one))};
    if (!equals(substitute_params(m.rxi, one), classic.rxi))
      return Outcome{false, "odd equation " + to_string(substitute_params(m.rxi, one))};
    return Outcome{true, ""};
  });

  run_check(rep, "euler_operators_annihilate_exact_densities", [] {
    std::mt19937 rng(515001);
    for (int k = 0; k < 60; ++k) {
      Expr d = x_derivative(random_density(rng, 2));
      if (!euler_operator(d, Field::U).is_zero() || !euler_operator(d, Field::Xi).is_zero() ||
          !euler_operator(d, Field::F).is_zero())
        return Outcome{false, "a total derivative survived an Euler operator"};
    }
    return Outcome{true, ""};
  });

  return rep;
}

// ---------------------------------------------------------------------------
// Dispatch.

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"derivatives", "tables", "pt", "susy", "hamiltonian"};
  return names;
}

inline VerifyReport run_verify_suite(const std::string& name) {
  if (name == "derivatives") return verify_derivatives();
  if (name == "tables") return verify_tables();
  if (name == "pt") return verify_pt();
  if (name == "susy") return verify_susy();
  if (name == "hamiltonian") return verify_hamiltonian();
  throw ValidationError("unknown verify suite '" + name +
                        "'; expected all, derivatives, tables, pt, susy, or hamiltonian");
}

inline std::vector<VerifyReport> run_verify(const std::string& which) {
  std::vector<VerifyReport> out;
  if (which == "all") {
    for (const auto& n : verify_suite_names()) out.push_back(run_verify_suite(n));
  } else {
    out.push_back(run_verify_suite(which));
  }
  return out;
}

}  // namespace ptskdv::super
