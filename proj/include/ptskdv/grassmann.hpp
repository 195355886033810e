// Finite Grassmann algebra over C with up to 8 generators, stored densely:
// component c[mask] multiplies the ordered product of the generators whose
// bits are set in mask.
#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace ptskdv::num {

using Complex = std::complex<double>;

constexpr int kMaxGenerators = 8;

// Sign of merging two ordered generator products: (-1)^{#(i in a, j in b, i > j)}.
inline int reorder_sign(unsigned a, unsigned b) {
  int swaps = 0;
  while (b) {
    int j = std::countr_zero(b);
    b &= b - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

struct GrassmannElement {
  int n = 0;
  std::vector<Complex> c;

  GrassmannElement() : c(1, Complex(0.0)) {}
  explicit GrassmannElement(int n_gen) : n(n_gen), c(std::size_t{1} << n_gen, Complex(0.0)) {
    if (n_gen < 0 || n_gen > kMaxGenerators)
      throw std::invalid_argument("generator count out of range");
  }

  static GrassmannElement scalar(int n_gen, Complex v) {
    GrassmannElement r(n_gen);
    r.c[0] = v;
    return r;
  }
  static GrassmannElement generator(int n_gen, int i) {
    if (i < 0 || i >= n_gen) throw std::invalid_argument("generator index out of range");
    GrassmannElement r(n_gen);
    r.c[std::size_t{1} << i] = Complex(1.0);
    return r;
  }

  Complex body() const { return c[0]; }
  GrassmannElement soul() const {
    GrassmannElement r = *this;
    r.c[0] = Complex(0.0);
    return r;
  }
  bool is_zero(double tol = 0.0) const {
    for (auto& v : c)
      if (std::abs(v) > tol) return false;
    return true;
  }
  // 0 for even, 1 for odd, nullopt when components of both parities are present
  std::optional<int> parity(double tol = 0.0) const {
    bool even = false, odd = false;
    for (std::size_t m = 0; m < c.size(); ++m)
      if (std::abs(c[m]) > tol) (std::popcount(m) % 2 ? odd : even) = true;
    if (even && odd) return std::nullopt;
    return odd ? 1 : 0;
  }
  double norm_inf() const {
    double r = 0.0;
    for (auto& v : c) r = std::max(r, std::abs(v));
    return r;
  }
};

inline void check_same(const GrassmannElement& a, const GrassmannElement& b) {
  if (a.n != b.n) throw std::invalid_argument("mixed generator counts");
}

inline GrassmannElement g_add(const GrassmannElement& a, const GrassmannElement& b) {
  check_same(a, b);
  GrassmannElement r = a;
  for (std::size_t m = 0; m < r.c.size(); ++m) r.c[m] += b.c[m];
  return r;
}

inline GrassmannElement g_sub(const GrassmannElement& a, const GrassmannElement& b) {
  check_same(a, b);
  GrassmannElement r = a;
  for (std::size_t m = 0; m < r.c.size(); ++m) r.c[m] -= b.c[m];
  return r;
}

inline GrassmannElement g_scale(const GrassmannElement& a, Complex s) {
  GrassmannElement r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

inline GrassmannElement g_mul(const GrassmannElement& a, const GrassmannElement& b) {
  check_same(a, b);
  GrassmannElement r(a.n);
  for (std::size_t ma = 0; ma < a.c.size(); ++ma) {
    if (a.c[ma] == Complex(0.0)) continue;
    for (std::size_t mb = 0; mb < b.c.size(); ++mb) {
      if (ma & mb) continue;  // repeated generator
      if (b.c[mb] == Complex(0.0)) continue;
      double s = static_cast<double>(reorder_sign(static_cast<unsigned>(ma), static_cast<unsigned>(mb)));
      r.c[ma | mb] += s * a.c[ma] * b.c[mb];
    }
  }
  return r;
}

// x^g.  Nonnegative integer g works for any x; otherwise the principal branch
// x^g = body^g (1 + soul/body)^g needs an invertible body.
inline GrassmannElement g_pow(const GrassmannElement& x, Complex g, long long where = -1) {
  double gr = g.real();
  if (g.imag() == 0.0 && gr == std::round(gr) && gr >= 0.0 && gr <= 64.0) {
    GrassmannElement r = GrassmannElement::scalar(x.n, Complex(1.0));
    for (int k = 0; k < static_cast<int>(gr); ++k) r = g_mul(r, x);
    return r;
  }
  Complex b = x.body();
  if (std::abs(b) <= 1e-12)
    throw SingularConfiguration("non-integer power of an element with vanishing body", where);
  GrassmannElement y = g_scale(x.soul(), Complex(1.0) / b);
  GrassmannElement acc = GrassmannElement::scalar(x.n, Complex(1.0));
  GrassmannElement ypow = acc;
  Complex binom(1.0);
  for (int k = 1; k <= x.n; ++k) {
    binom *= (g - Complex(static_cast<double>(k - 1))) / Complex(static_cast<double>(k));
    ypow = g_mul(ypow, y);
    if (ypow.is_zero()) break;
    acc = g_add(acc, g_scale(ypow, binom));
  }
  return g_scale(acc, std::pow(b, g));
}

}  // namespace ptskdv::num
