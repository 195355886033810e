// Grassmann-valued periodic fields: one grid function per generator mask.
// Binary products convolve masks with the reordering sign; nonlinear terms
// are dealiased component by component.
#pragma once

#include "grid.hpp"
#include "numeval.hpp"
#include "parallel.hpp"

namespace ptskdv::num {

struct GrassmannField {
  int n_gen = 0;
  std::vector<std::vector<Complex>> comp;  // comp[mask][point]

  GrassmannField() = default;
  GrassmannField(int gens, int npts)
      : n_gen(gens), comp(std::size_t{1} << gens, std::vector<Complex>(npts, Complex(0.0))) {
    if (gens < 0 || gens > kMaxGenerators)
      throw ValidationError("generator count out of range");
  }

  int npts() const { return comp.empty() ? 0 : static_cast<int>(comp[0].size()); }
  std::size_t masks() const { return comp.size(); }

  GrassmannElement at(int j) const {
    GrassmannElement r(n_gen);
    for (std::size_t m = 0; m < comp.size(); ++m) r.c[m] = comp[m][j];
    return r;
  }
  void set(int j, const GrassmannElement& v) {
    for (std::size_t m = 0; m < comp.size(); ++m) comp[m][j] = v.c[m];
  }

  double norm_inf() const {
    double r = 0.0;
    for (auto& c : comp)
      for (auto& v : c) r = std::max(r, std::abs(v));
    return r;
  }
  bool finite() const {
    for (auto& c : comp)
      for (auto& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
  // keeps only components of the given parity
  void project_parity(int parity) {
    for (std::size_t m = 0; m < comp.size(); ++m)
      if (std::popcount(m) % 2 != parity)
        for (auto& v : comp[m]) v = Complex(0.0);
  }
  bool has_parity(int parity, double tol = 0.0) const {
    for (std::size_t m = 0; m < comp.size(); ++m)
      if (std::popcount(m) % 2 != parity)
        for (auto& v : comp[m])
          if (std::abs(v) > tol) return false;
    return true;
  }
};

// exact test, used to skip transforms on empty sectors without breaking
// bit-for-bit determinism
inline bool f_is_zero(const GrassmannField& a) {
  for (auto& c : a.comp)
    for (auto& v : c)
      if (v != Complex(0.0)) return false;
  return true;
}

inline GrassmannField f_add(const GrassmannField& a, const GrassmannField& b) {
  GrassmannField r = a;
  for (std::size_t m = 0; m < r.comp.size(); ++m)
    for (int j = 0; j < r.npts(); ++j) r.comp[m][j] += b.comp[m][j];
  return r;
}

inline GrassmannField f_sub(const GrassmannField& a, const GrassmannField& b) {
  GrassmannField r = a;
  for (std::size_t m = 0; m < r.comp.size(); ++m)
    for (int j = 0; j < r.npts(); ++j) r.comp[m][j] -= b.comp[m][j];
  return r;
}

inline GrassmannField f_scale(const GrassmannField& a, Complex s) {
  GrassmannField r = a;
  for (auto& c : r.comp)
    for (auto& v : c) v *= s;
  return r;
}

inline void f_axpy(GrassmannField& y, Complex a, const GrassmannField& x) {
  for (std::size_t m = 0; m < y.comp.size(); ++m)
    for (int j = 0; j < y.npts(); ++j) y.comp[m][j] += a * x.comp[m][j];
}

inline bool component_zero(const std::vector<Complex>& c) {
  for (auto& v : c)
    if (v != Complex(0.0)) return false;
  return true;
}

inline GrassmannField f_dealias(const Grid& g, const FftPlan& plan, GrassmannField f) {
  parallel_for(0, f.comp.size(), [&](std::size_t m) {
    if (!component_zero(f.comp[m])) dealias(g, plan, f.comp[m]);
  });
  return f;
}

inline GrassmannField f_dx(const Grid& g, const FftPlan& plan, const GrassmannField& f,
                           int order) {
  GrassmannField r = f;
  if (order == 0) return r;
  parallel_for(0, r.comp.size(), [&](std::size_t m) {
    if (!component_zero(r.comp[m])) r.comp[m] = spectral_dx(g, plan, std::move(r.comp[m]), order);
  });
  return r;
}

// pointwise Grassmann product; dealiases the result unless told otherwise
inline GrassmannField f_mul(const Grid& g, const FftPlan& plan, const GrassmannField& a,
                            const GrassmannField& b, bool do_dealias = true) {
  if (a.n_gen != b.n_gen) throw ValidationError("mixed generator counts in a field product");
  GrassmannField r(a.n_gen, a.npts());
  if (f_is_zero(a) || f_is_zero(b)) return r;
  parallel_for(0, r.comp.size(), [&](std::size_t mc) {
    for (std::size_t ma = 0; ma < a.comp.size(); ++ma) {
      if ((ma & mc) != ma) continue;
      std::size_t mb = mc ^ ma;
      double s = static_cast<double>(
          reorder_sign(static_cast<unsigned>(ma), static_cast<unsigned>(mb)));
      const auto& ca = a.comp[ma];
      const auto& cb = b.comp[mb];
      auto& cr = r.comp[mc];
      for (int j = 0; j < r.npts(); ++j) cr[j] += s * ca[j] * cb[j];
    }
  });
  if (do_dealias) r = f_dealias(g, plan, r);
  return r;
}

// pointwise power via the Grassmann principal branch; singular points report
// their grid index
inline GrassmannField f_pow(const Grid& g, const FftPlan& plan, const GrassmannField& a,
                            Complex exponent, bool do_dealias = true) {
  GrassmannField r(a.n_gen, a.npts());
  for (int j = 0; j < a.npts(); ++j) r.set(j, g_pow(a.at(j), exponent, j));
  if (do_dealias && !f_is_zero(r)) r = f_dealias(g, plan, r);
  return r;
}

}  // namespace ptskdv::num
