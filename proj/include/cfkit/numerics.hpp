// SPDX-License-Identifier: Apache-2.0
//
// Scalar backends for continued-fraction work.
//
//   ExactComplex  - Gaussian rationals over GMP; no rounding ever.
//   FloatComplex  - pairs of MPFR floats sharing one precision, rounded to
//                   nearest-even after every elementary operation.
//   Extended<S>   - a point of the Riemann sphere over either backend.
//
// The two backends never mix: every generic routine is a template over one
// scalar type, and float operands of different precision are rejected.
#pragma once

#include <cfkit/errors.hpp>

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>
#include <utility>

namespace cfkit {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr mpfr_prec_t kDefaultPrecision = 256;

/// RAII owner of one MPFR value. Arithmetic rounds to nearest-even at the
/// shared precision of the operands.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = kDefaultPrecision);
  BigFloat(long value, mpfr_prec_t precision);
  BigFloat(const Integer& value, mpfr_prec_t precision);
  BigFloat(const Rational& value, mpfr_prec_t precision);

  /// Decimal (or integer) literal, correctly rounded. Throws ParseError.
  static BigFloat parse(std::string_view text, mpfr_prec_t precision);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1; meaningless for zero.
  long exponent() const noexcept { return mpfr_get_exp(value_); }
  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Shortest decimal string that reads back to the same value at this precision.
  std::string to_string() const;

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);

  friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
  friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
  friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
  friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }
  friend BigFloat operator-(BigFloat x) {
    mpfr_neg(x.value_, x.value_, MPFR_RNDN);
    return x;
  }

  friend BigFloat operator*(BigFloat lhs, long rhs);
  friend BigFloat operator+(BigFloat lhs, long rhs);

  friend bool operator==(const BigFloat& lhs, const BigFloat& rhs);
  friend std::partial_ordering operator<=>(const BigFloat& lhs, const BigFloat& rhs);
  friend bool operator<(const BigFloat& lhs, long rhs) { return mpfr_cmp_si(lhs.value_, rhs) < 0; }
  friend bool operator>(const BigFloat& lhs, long rhs) { return mpfr_cmp_si(lhs.value_, rhs) > 0; }

 private:
  mpfr_t value_;
};

BigFloat sqrt(const BigFloat& x);
BigFloat abs(const BigFloat& x);
BigFloat log10(const BigFloat& x);
BigFloat pow(const BigFloat& base, const BigFloat& exponent);
BigFloat pow(const BigFloat& base, long exponent);
/// Nearest value at another precision (exact when widening).
BigFloat with_precision(const BigFloat& x, mpfr_prec_t precision);
BigFloat from_double(double v, mpfr_prec_t precision);
/// x * 2^e, exact.
BigFloat ldexp(const BigFloat& x, long e);
const BigFloat& max(const BigFloat& a, const BigFloat& b);
const BigFloat& min(const BigFloat& a, const BigFloat& b);

/// Gaussian rational. Both parts are canonical mpq values.
struct ExactComplex {
  Rational re;
  Rational im;

  ExactComplex() = default;
  ExactComplex(Rational real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
  ExactComplex(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
  ExactComplex(long real) : re(real) {}  // NOLINT(google-explicit-constructor)
  ExactComplex(int real) : re(real) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  /// |z|^2; |z| itself is generally irrational and is not offered.
  Rational norm() const { return Rational(re * re + im * im); }
  ExactComplex conj() const { return {re, Rational(-im)}; }

  ExactComplex& operator+=(const ExactComplex& rhs);
  ExactComplex& operator-=(const ExactComplex& rhs);
  ExactComplex& operator*=(const ExactComplex& rhs);
  /// Throws DegenerateFraction on division by zero.
  ExactComplex& operator/=(const ExactComplex& rhs);

  friend ExactComplex operator+(ExactComplex lhs, const ExactComplex& rhs) { return lhs += rhs; }
  friend ExactComplex operator-(ExactComplex lhs, const ExactComplex& rhs) { return lhs -= rhs; }
  friend ExactComplex operator*(ExactComplex lhs, const ExactComplex& rhs) { return lhs *= rhs; }
  friend ExactComplex operator/(ExactComplex lhs, const ExactComplex& rhs) { return lhs /= rhs; }
  friend ExactComplex operator-(const ExactComplex& x) { return {Rational(-x.re), Rational(-x.im)}; }
  friend bool operator==(const ExactComplex& lhs, const ExactComplex& rhs) {
    return lhs.re == rhs.re && lhs.im == rhs.im;
  }
};

/// Complex number over two MPFR reals of one precision.
class FloatComplex {
 public:
  explicit FloatComplex(mpfr_prec_t precision = kDefaultPrecision);
  FloatComplex(BigFloat re, BigFloat im);
  explicit FloatComplex(BigFloat re);
  FloatComplex(const ExactComplex& value, mpfr_prec_t precision);

  const BigFloat& re() const noexcept { return re_; }
  const BigFloat& im() const noexcept { return im_; }
  mpfr_prec_t precision() const noexcept { return re_.precision(); }

  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const noexcept { return im_.is_zero(); }
  BigFloat norm() const;
  BigFloat abs() const;
  /// Largest binary exponent among the nonzero parts; LONG_MIN for zero.
  long max_exponent() const noexcept;
  FloatComplex scaled(long e) const;  // *2^e, exact
  FloatComplex with_precision(mpfr_prec_t precision) const;

  FloatComplex& operator+=(const FloatComplex& rhs);
  FloatComplex& operator-=(const FloatComplex& rhs);
  FloatComplex& operator*=(const FloatComplex& rhs);
  FloatComplex& operator/=(const FloatComplex& rhs);

  friend FloatComplex operator+(FloatComplex lhs, const FloatComplex& rhs) { return lhs += rhs; }
  friend FloatComplex operator-(FloatComplex lhs, const FloatComplex& rhs) { return lhs -= rhs; }
  friend FloatComplex operator*(FloatComplex lhs, const FloatComplex& rhs) { return lhs *= rhs; }
  friend FloatComplex operator/(FloatComplex lhs, const FloatComplex& rhs) { return lhs /= rhs; }
  friend FloatComplex operator-(const FloatComplex& x) { return {-x.re_, -x.im_}; }
  friend bool operator==(const FloatComplex& lhs, const FloatComplex& rhs) {
    return lhs.re_ == rhs.re_ && lhs.im_ == rhs.im_;
  }

 private:
  BigFloat re_;
  BigFloat im_;
};

// Scalar-generic helpers. `like` supplies the backend context (precision).

inline ExactComplex scalar_like(const ExactComplex&, const ExactComplex& v) { return v; }
inline FloatComplex scalar_like(const FloatComplex& like, const ExactComplex& v) {
  return {v, like.precision()};
}
inline ExactComplex scalar_like(const ExactComplex&, const Integer& v) { return Rational(v); }
inline FloatComplex scalar_like(const FloatComplex& like, const Integer& v) {
  return FloatComplex(BigFloat(v, like.precision()));
}

template <class S>
S zero_like(const S& like) {
  return scalar_like(like, ExactComplex(0));
}
template <class S>
S one_like(const S& like) {
  return scalar_like(like, ExactComplex(1));
}

inline FloatComplex to_float(const ExactComplex& v, mpfr_prec_t precision) { return {v, precision}; }

/// base^e by repeated squaring; negative e inverts (base must be nonzero).
template <class S>
S power(const S& base, long e) {
  if (e < 0) return one_like(base) / power(base, -e);
  S result = one_like(base);
  S b = base;
  auto k = static_cast<unsigned long>(e);
  while (k != 0) {
    if (k & 1UL) result *= b;
    k >>= 1U;
    if (k != 0) b *= b;
  }
  return result;
}

struct Infinity {};
inline constexpr Infinity infinity{};

/// A point of the extended complex plane. Infinity is one unsigned point; it
/// still remembers a scalar of the right backend so precision is never lost.
template <class S>
class Extended {
 public:
  Extended(S finite) : value_(std::move(finite)) {}  // NOLINT(google-explicit-constructor)
  Extended(Infinity, const S& like) : infinite_(true), value_(zero_like(like)) {}

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// The finite value; throws PreconditionError at infinity.
  const S& value() const {
    if (infinite_) throw PreconditionError("value() of the point at infinity");
    return value_;
  }
  const S& context() const noexcept { return value_; }

  friend bool operator==(const Extended& lhs, const Extended& rhs) {
    if (lhs.infinite_ || rhs.infinite_) return lhs.infinite_ == rhs.infinite_;
    return lhs.value_ == rhs.value_;
  }

 private:
  bool infinite_ = false;
  S value_;
};

/// num/den on the sphere: Infinity when den = 0 != num; 0/0 throws DegenerateFraction.
template <class S>
Extended<S> ext_div(const S& num, const S& den) {
  if (den.is_zero()) {
    if (num.is_zero()) throw DegenerateFraction("indeterminate 0/0");
    return {infinity, num};
  }
  return num / den;
}

inline Extended<FloatComplex> with_precision(const Extended<FloatComplex>& x, mpfr_prec_t precision) {
  const FloatComplex v = x.context().with_precision(precision);
  return x.is_infinite() ? Extended<FloatComplex>(infinity, v) : Extended<FloatComplex>(v);
}

/// Chordal metric on the Riemann sphere (float backend).
BigFloat chordal_distance(const Extended<FloatComplex>& w, const Extended<FloatComplex>& z);
/// Square of the chordal metric, exact.
Rational chordal_distance_sq(const Extended<ExactComplex>& w, const Extended<ExactComplex>& z);

std::string to_string(const Rational& v);
std::string to_string(const ExactComplex& v);
std::string to_string(const BigFloat& v);
std::string to_string(const FloatComplex& v);
template <class S>
std::string to_string(const Extended<S>& v) {
  return v.is_infinite() ? std::string("inf") : to_string(v.value());
}

/// A complex number as typed by a user: "3/2", "-1/2+0i", "1.25-2i", "2i", "inf".
/// Rational parts stay exact; any decimal part makes the literal inexact and it
/// is then rounded to binary at whatever precision it is requested.
class ComplexLiteral {
 public:
  static ComplexLiteral parse(std::string_view text);

  bool is_exact() const noexcept { return exact_; }
  bool is_infinite() const noexcept { return infinite_; }
  /// Throws PreconditionError for inexact literals.
  const ExactComplex& exact() const;
  FloatComplex at_precision(mpfr_prec_t precision) const;
  Extended<FloatComplex> extended_at_precision(mpfr_prec_t precision) const;
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  std::string re_text_ = "0";
  std::string im_text_ = "0";
  bool exact_ = true;
  bool infinite_ = false;
  ExactComplex exact_value_;
};

/// Number of decimal digits carried by a binary precision.
int decimal_digits(mpfr_prec_t precision);

}  // namespace cfkit
