// Classic fourth-order Runge-Kutta time stepping with sampling callbacks,
// blow-up detection, and per-sample diagnostics.
#pragma once

#include <cstdio>
#include <functional>

#include "rhs.hpp"

namespace ptskdv::num {

inline StateFields state_axpy(const StateFields& y, double a, const StateFields& x) {
  StateFields r = y;
  f_axpy(r.u, Complex(a), x.u);
  f_axpy(r.xi, Complex(a), x.xi);
  return r;
}

inline void rk4_step(const GridContext& ctx, const ModelRhs& rhs, StateFields& s, double dt) {
  StateFields k1 = rhs(ctx, s);
  StateFields k2 = rhs(ctx, state_axpy(s, dt / 2.0, k1));
  StateFields k3 = rhs(ctx, state_axpy(s, dt / 2.0, k2));
  StateFields k4 = rhs(ctx, state_axpy(s, dt, k3));
  f_axpy(s.u, Complex(dt / 6.0), k1.u);
  f_axpy(s.xi, Complex(dt / 6.0), k1.xi);
  f_axpy(s.u, Complex(dt / 3.0), k2.u);
  f_axpy(s.xi, Complex(dt / 3.0), k2.xi);
  f_axpy(s.u, Complex(dt / 3.0), k3.u);
  f_axpy(s.xi, Complex(dt / 3.0), k3.xi);
  f_axpy(s.u, Complex(dt / 6.0), k4.u);
  f_axpy(s.xi, Complex(dt / 6.0), k4.xi);
}

struct DiagRow {
  double t = 0.0;
  double mass = 0.0;        // Re integral u dx (body)
  double momentum = 0.0;    // Re integral u^2 dx (body)
  double h_real = 0.0;      // body of the Hamiltonian value
  double h_imag = 0.0;
  double max_u = 0.0;       // max |u| over body values
  double tail_fraction = 0.0;  // spectral energy in the upper half of the kept band
};

inline DiagRow diagnostics(const GridContext& ctx, const StateFields& s, double t, Complex eps) {
  DiagRow r;
  r.t = t;
  double dx = ctx.grid.dx();
  Complex mass(0.0), mom(0.0);
  for (int j = 0; j < ctx.grid.n; ++j) {
    Complex v = s.u.comp[0][j];
    mass += v;
    mom += v * v;
    r.max_u = std::max(r.max_u, std::abs(v));
  }
  r.mass = (mass * dx).real();
  r.momentum = (mom * dx).real();
  GrassmannElement h = hamiltonian_value(ctx, s, eps);
  r.h_real = h.body().real();
  r.h_imag = h.body().imag();
  std::vector<Complex> hat = s.u.comp[0];
  ctx.plan.forward(hat);
  double kept = 0.0, tail = 0.0;
  int cut = ctx.grid.n / 3;
  for (int j = 0; j < ctx.grid.n; ++j) {
    if (!ctx.grid.keep[j]) continue;
    int sgn = j <= ctx.grid.n / 2 ? j : j - ctx.grid.n;
    double e = std::norm(hat[j]);
    kept += e;
    if (std::abs(sgn) * 2 > cut) tail += e;
  }
  r.tail_fraction = kept > 0.0 ? tail / kept : 0.0;
  return r;
}

struct SimSpec {
  double dt = 1e-3;
  long long steps = 0;
  long long sample_every = 1;
  double blowup_threshold = 1e8;
};

// Steps the state forward, invoking the callback on the initial state and on
// every sampling point (always including the final step).
inline void simulate(const GridContext& ctx, const ModelRhs& rhs, StateFields& s,
                     const SimSpec& spec,
                     const std::function<void(long long, double, const StateFields&)>& on_sample) {
  on_sample(0, 0.0, s);
  for (long long k = 1; k <= spec.steps; ++k) {
    try {
      rk4_step(ctx, rhs, s, spec.dt);
    } catch (const SingularConfiguration& e) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", spec.dt * static_cast<double>(k - 1));
      throw SingularConfiguration(std::string(e.what()) + " (during the step from t=" + buf + ")",
                                  e.grid_index);
    }
    double t = spec.dt * static_cast<double>(k);
    if (k % spec.sample_every == 0 || k == spec.steps) {
      if (!s.u.finite() || !s.xi.finite())
        throw BlowUpError("state stopped being finite", t);
      if (std::max(s.u.norm_inf(), s.xi.norm_inf()) > spec.blowup_threshold)
        throw BlowUpError("state norm exceeded the blow-up threshold", t);
      on_sample(k, t, s);
    }
  }
}

}  // namespace ptskdv::num
