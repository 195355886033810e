// Iterative radix-2 FFT with precomputed twiddles.  Deterministic: no
// runtime tuning, identical results for identical inputs on every run.
#pragma once

#include <bit>
#include <numbers>

#include "grassmann.hpp"

namespace ptskdv::num {

struct FftPlan {
  int n = 0;
  std::vector<int> rev;
  std::vector<Complex> w;  // w[k] = exp(-2 pi i k / n), k < n/2

  FftPlan() = default;
  explicit FftPlan(int size) : n(size) {
    if (n < 4 || (n & (n - 1)) != 0)
      throw ValidationError("grid size must be a power of two, at least 4");
    int lg = std::countr_zero(static_cast<unsigned>(n));
    rev.resize(n);
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < lg; ++b)
        if (i & (1 << b)) r |= 1 << (lg - 1 - b);
      rev[i] = r;
    }
    w.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
      double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      w[k] = Complex(std::cos(a), std::sin(a));
    }
  }

  void transform(std::vector<Complex>& a, bool invert) const {
    for (int i = 0; i < n; ++i)
      if (i < rev[i]) std::swap(a[i], a[rev[i]]);
    for (int len = 2; len <= n; len <<= 1) {
      int half = len >> 1, step = n / len;
      for (int i = 0; i < n; i += len)
        for (int j = 0; j < half; ++j) {
          Complex tw = invert ? std::conj(w[j * step]) : w[j * step];
          Complex u = a[i + j], v = a[i + j + half] * tw;
          a[i + j] = u + v;
          a[i + j + half] = u - v;
        }
    }
    if (invert) {
      double s = 1.0 / static_cast<double>(n);
      for (auto& v : a) v *= s;
    }
  }
  void forward(std::vector<Complex>& a) const { transform(a, false); }
  void inverse(std::vector<Complex>& a) const { transform(a, true); }
};

}  // namespace ptskdv::num
