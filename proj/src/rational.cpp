#include "polyquant/rational.hpp"

#include <cmath>
#include <sstream>

#include "polyquant/error.hpp"

namespace polyquant {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotSkew: return "NotSkew";
    case ErrorCode::kJacobiViolation: return "JacobiViolation";
    case ErrorCode::kNotHamiltonian: return "NotHamiltonian";
    case ErrorCode::kNotCompatible: return "NotCompatible";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotCommuting: return "NotCommuting";
    case ErrorCode::kNotSkewHermitian: return "NotSkewHermitian";
    case ErrorCode::kNotFaithful: return "NotFaithful";
    case ErrorCode::kDegreeOverflow: return "DegreeOverflow";
    case ErrorCode::kNotFull: return "NotFull";
    case ErrorCode::kNotABasis: return "NotABasis";
    case ErrorCode::kInconsistentDegrees: return "InconsistentDegrees";
    case ErrorCode::kNotPositive: return "NotPositive";
    case ErrorCode::kWeightsNotPermuted: return "WeightsNotPermuted";
    case ErrorCode::kConventionMismatch: return "ConventionMismatch";
    case ErrorCode::kNotTransverse: return "NotTransverse";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorCode::kParseError, "not a rational literal: '" + std::string(text) + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw Error(ErrorCode::kParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& value) { return value.get_str(); }

Integer floor_integer(const Rational& value) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

Rational floor_div(const Rational& value) { return Rational(floor_integer(value)); }

Rational pow(const Rational& base, long exponent) {
  Rational result(1);
  Rational b = exponent < 0 ? Rational(1 / base) : base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : exponent;
  while (e > 0) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

Rational rationalize(double value, long max_den) {
  // Continued-fraction convergents; stop before the denominator bound is exceeded.
  long sign = value < 0 ? -1 : 1;
  double x = std::fabs(value);
  Integer h_prev(1), h(static_cast<long>(std::floor(x)));
  Integer k_prev(0), k(1);
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    double inv = 1.0 / frac;
    long a = static_cast<long>(std::floor(inv));
    Integer h_next = a * h + h_prev;
    Integer k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - static_cast<double>(a);
  }
  Rational q(h * sign, k);
  q.canonicalize();
  return q;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  Rational norm = o.re * o.re + o.im * o.im;
  if (sgn(norm) == 0) throw Error(ErrorCode::kInvalidArgument, "division by zero in Q(i)");
  Rational r = (re * o.re + im * o.im) / norm;
  Rational m = (im * o.re - re * o.im) / norm;
  re = r;
  im = m;
  return *this;
}

std::string format_gaussian(const GaussianRational& z) {
  if (sgn(z.im) == 0) return z.re.get_str();
  std::ostringstream os;
  if (sgn(z.re) != 0) {
    os << z.re.get_str() << (sgn(z.im) > 0 ? "+" : "-");
    Rational a = abs(z.im);
    os << (a == 1 ? std::string() : a.get_str()) << "i";
  } else {
    if (z.im == 1) return "i";
    if (z.im == -1) return "-i";
    os << z.im.get_str() << "i";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
  return os << format_gaussian(z);
}

std::string format_vector(const QVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].get_str();
  }
  return out + ")";
}

}  // namespace polyquant
