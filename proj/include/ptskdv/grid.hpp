// Periodic grid, spectral derivatives, and the 2/3-rule dealias filter.
#pragma once

#include "fft.hpp"

namespace ptskdv::num {

struct Grid {
  int n = 0;
  double L = 0.0;
  std::vector<double> x;   // x_j = j L / n - L / 2
  std::vector<double> k;   // angular wavenumbers in FFT layout
  std::vector<char> keep;  // 2/3 rule: |signed index| <= n/3

  Grid() = default;
  Grid(int size, double length) : n(size), L(length) {
    if (length <= 0.0) throw ValidationError("domain length must be positive");
    x.resize(n);
    k.resize(n);
    keep.resize(n);
    int cut = n / 3;
    for (int j = 0; j < n; ++j) {
      x[j] = length * static_cast<double>(j) / static_cast<double>(n) - length / 2.0;
      int s = j <= n / 2 ? j : j - n;
      k[j] = 2.0 * std::numbers::pi * static_cast<double>(s) / length;
      keep[j] = std::abs(s) <= cut ? 1 : 0;
    }
  }
  double dx() const { return L / static_cast<double>(n); }
};

inline void dealias(const Grid& g, const FftPlan& plan, std::vector<Complex>& f) {
  plan.forward(f);
  for (int j = 0; j < g.n; ++j)
    if (!g.keep[j]) f[j] = Complex(0.0);
  plan.inverse(f);
}

// order-th spectral x-derivative; the Nyquist mode is dropped for odd orders
// so real fields stay conjugate-symmetric.
inline std::vector<Complex> spectral_dx(const Grid& g, const FftPlan& plan,
                                        std::vector<Complex> f, int order) {
  if (order == 0) return f;
  plan.forward(f);
  for (int j = 0; j < g.n; ++j) {
    Complex ik(0.0, g.k[j]);
    Complex m(1.0);
    for (int q = 0; q < order; ++q) m *= ik;
    if (order % 2 == 1 && j == g.n / 2) m = Complex(0.0);
    f[j] *= m;
  }
  plan.inverse(f);
  return f;
}

}  // namespace ptskdv::num
