// Exact rational scalars: arbitrary-precision rationals and Gaussian rationals.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ptskdv::sym {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigRat rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return BigRat(BigInt(num), BigInt(den));
}

inline double to_double(const BigRat& r) { return r.convert_to<double>(); }

inline bool is_integer(const BigRat& r) { return denominator(r) == 1; }

// Value of an integer rational as long long; caller must check is_integer.
inline long long to_ll(const BigRat& r) {
  if (!is_integer(r)) throw std::logic_error("to_ll on non-integer rational");
  return numerator(r).convert_to<long long>();
}

inline std::string to_string(const BigRat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// a + b*i with exact rational a, b.
struct RationalComplex {
  BigRat re{0};
  BigRat im{0};

  RationalComplex() = default;
  RationalComplex(BigRat r) : re(std::move(r)) {}
  RationalComplex(BigRat r, BigRat i) : re(std::move(r)), im(std::move(i)) {}
  RationalComplex(long long r) : re(rat(r)) {}

  static RationalComplex i_unit() { return {rat(0), rat(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }

  RationalComplex conj() const { return {re, -im}; }

  RationalComplex operator-() const { return {-re, -im}; }
  RationalComplex operator+(const RationalComplex& o) const { return {re + o.re, im + o.im}; }
  RationalComplex operator-(const RationalComplex& o) const { return {re - o.re, im - o.im}; }
  RationalComplex operator*(const RationalComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  RationalComplex inv() const {
    BigRat n = re * re + im * im;
    if (n == 0) throw std::domain_error("inverse of zero");
    return {re / n, -im / n};
  }
  RationalComplex operator/(const RationalComplex& o) const { return *this * o.inv(); }

  bool operator==(const RationalComplex& o) const { return re == o.re && im == o.im; }
  bool operator!=(const RationalComplex& o) const { return !(*this == o); }
  bool operator<(const RationalComplex& o) const {
    if (re != o.re) return re < o.re;
    return im < o.im;
  }

  // i^k for any integer k.
  static RationalComplex i_pow(long long k) {
    switch (((k % 4) + 4) % 4) {
      case 0: return {rat(1), rat(0)};
      case 1: return {rat(0), rat(1)};
      case 2: return {rat(-1), rat(0)};
      default: return {rat(0), rat(-1)};
    }
  }

  RationalComplex pow(long long k) const {
    if (k < 0) return inv().pow(-k);
    RationalComplex acc{rat(1)}, base = *this;
    while (k > 0) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    return acc;
  }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

inline std::string to_string(const RationalComplex& c) {
  if (c.im == 0) return to_string(c.re);
  std::ostringstream os;
  if (c.re == 0) {
    if (c.im == 1) return "i";
    if (c.im == -1) return "-i";
    os << "(" << c.im << ")*i";
    return os.str();
  }
  os << "(" << c.re;
  if (c.im > 0) os << "+" << c.im << "i)";
  else os << "-" << (-c.im) << "i)";
  return os.str();
}

}  // namespace ptskdv::sym
