#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>
#include <string>

namespace nilspec {

/// Arbitrary-precision rational used for all exact algebra.
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

/// Minimal complex number over an arbitrary field. std::complex is only
/// specified for floating types, so exact symbols use this instead.
template <class R>
struct Cplx {
  R re{};
  R im{};

  Cplx() = default;
  Cplx(R r) : re(std::move(r)) {}  // NOLINT: implicit real embedding
  Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}
  Cplx(int r) : re(r) {}  // NOLINT

  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator/(const Cplx& a, int d) { return {a.re / d, a.im / d}; }
  Cplx& operator+=(const Cplx& b) { return *this = *this + b; }
  Cplx& operator-=(const Cplx& b) { return *this = *this - b; }
  Cplx& operator*=(const Cplx& b) { return *this = *this * b; }
  friend bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }

  friend std::ostream& operator<<(std::ostream& os, const Cplx& c) {
    if (c.im == R(0)) return os << c.re;
    if (c.re == R(0)) return os << c.im << "i";
    return os << "(" << c.re << (c.im < R(0) ? "" : "+") << c.im << "i)";
  }
};

using GaussianRational = Cplx<Rational>;

template <class R>
Cplx<R> imag_unit() {
  return {R(0), R(1)};
}

}  // namespace nilspec
