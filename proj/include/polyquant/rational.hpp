#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace polyquant {

using Rational = mpq_class;
using Integer = mpz_class;
using QVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q" into a canonicalized rational. Throws kParseError.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& value);

Rational floor_div(const Rational& value);  // floor as a rational with denominator 1
Integer floor_integer(const Rational& value);
Rational pow(const Rational& base, long exponent);

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational rationalize(double value, long max_den);

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }
inline Rational conj(const Rational& value) { return value; }
inline double to_double(const Rational& value) { return value.get_d(); }

/// Element of Q(i). std::complex is unspecified for non-floating types, hence the struct.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(const Rational& real) : re(real), im(0) {}
  GaussianRational(long real) : re(real), im(0) {}
  GaussianRational(const Rational& real, const Rational& imag) : re(real), im(imag) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational m = re * o.im + im * o.re;
    re = r;
    im = m;
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) {
    return {Rational(-a.re), Rational(-a.im)};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline bool is_zero(const GaussianRational& z) { return sgn(z.re) == 0 && sgn(z.im) == 0; }
inline GaussianRational conj(const GaussianRational& z) { return {z.re, Rational(-z.im)}; }
inline std::complex<double> to_complex(const GaussianRational& z) {
  return {z.re.get_d(), z.im.get_d()};
}
std::string format_gaussian(const GaussianRational& z);
std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }

std::string format_vector(const QVector& v);

}  // namespace polyquant
