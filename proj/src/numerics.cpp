// SPDX-License-Identifier: Apache-2.0
#include <cfkit/numerics.hpp>

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <memory>

namespace cfkit {

namespace {

void require_same_precision(const BigFloat& a, const BigFloat& b) {
  if (a.precision() != b.precision()) throw PrecisionMismatch();
}

struct MpfrStringDeleter {
  void operator()(char* s) const { mpfr_free_str(s); }
};

// Renders 0.DIGITS x 10^exp10 the way a person would write it.
std::string format_decimal(bool negative, std::string digits, mpfr_exp_t exp10) {
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  const auto len = static_cast<mpfr_exp_t>(digits.size());
  std::string out = negative ? "-" : "";
  if (exp10 > -5 && exp10 <= 21) {
    if (exp10 <= 0) {
      out += "0.";
      out.append(static_cast<std::size_t>(-exp10), '0');
      out += digits;
    } else if (exp10 >= len) {
      out += digits;
      out.append(static_cast<std::size_t>(exp10 - len), '0');
    } else {
      out += digits.substr(0, static_cast<std::size_t>(exp10));
      out += '.';
      out += digits.substr(static_cast<std::size_t>(exp10));
    }
    return out;
  }
  out += digits[0];
  if (digits.size() > 1) {
    out += '.';
    out += digits.substr(1);
  }
  out += 'e';
  out += std::to_string(exp10 - 1);
  return out;
}

bool is_rational_text(std::string_view t) {
  std::size_t i = 0;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
  const std::size_t start = i;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == start) return false;
  if (i == t.size()) return true;
  if (t[i] != '/') return false;
  const std::size_t den_start = ++i;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  return i == t.size() && i > den_start;
}

Rational parse_rational(std::string text, std::size_t position) {
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  Rational v;
  if (v.set_str(text, 10) != 0) throw ParseError("malformed rational '" + text + "'", position);
  if (sgn(v.get_den()) == 0) throw ParseError("zero denominator in '" + text + "'", position);
  v.canonicalize();
  return v;
}

}  // namespace

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(long value, mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const Integer& value, mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& value, mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat BigFloat::parse(std::string_view text, mpfr_prec_t precision) {
  BigFloat x(precision);
  const std::string s(text);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(x.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (s.empty() || end == s.c_str()) throw ParseError("malformed number '" + s + "'", 0);
  if (end != s.c_str() + s.size()) {
    throw ParseError("trailing characters in number '" + s + "'", static_cast<std::size_t>(end - s.c_str()));
  }
  if (mpfr_nan_p(x.value_) || mpfr_inf_p(x.value_)) throw ParseError("non-finite number '" + s + "'", 0);
  return x;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string() const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";
  const std::size_t max_digits = mpfr_get_str_ndigits(10, precision());
  BigFloat back(precision());
  for (std::size_t digits = 1; digits <= max_digits; ++digits) {
    mpfr_exp_t exp10 = 0;
    std::unique_ptr<char, MpfrStringDeleter> raw(mpfr_get_str(nullptr, &exp10, 10, digits, value_, MPFR_RNDN));
    std::string mantissa(raw.get());
    const bool negative = mantissa[0] == '-';
    if (negative) mantissa.erase(0, 1);
    const std::string probe = std::string(negative ? "-" : "") + "0." + mantissa + "e" + std::to_string(exp10);
    mpfr_set_str(back.value_, probe.c_str(), 10, MPFR_RNDN);
    if (mpfr_equal_p(back.value_, value_) || digits == max_digits) {
      return format_decimal(negative, mantissa, exp10);
    }
  }
  return "0";  // unreachable
}

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
  require_same_precision(*this, rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
  require_same_precision(*this, rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
  require_same_precision(*this, rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
  require_same_precision(*this, rhs);
  if (rhs.is_zero()) throw DegenerateFraction("float division by zero");
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat operator*(BigFloat lhs, long rhs) {
  mpfr_mul_si(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

BigFloat operator+(BigFloat lhs, long rhs) {
  mpfr_add_si(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

bool operator==(const BigFloat& lhs, const BigFloat& rhs) {
  require_same_precision(lhs, rhs);
  return mpfr_equal_p(lhs.value_, rhs.value_) != 0;
}

std::partial_ordering operator<=>(const BigFloat& lhs, const BigFloat& rhs) {
  require_same_precision(lhs, rhs);
  if (mpfr_unordered_p(lhs.value_, rhs.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(lhs.value_, rhs.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigFloat sqrt(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat log10(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_log10(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& base, const BigFloat& exponent) {
  require_same_precision(base, exponent);
  BigFloat r(base.precision());
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& base, long exponent) {
  BigFloat r(base.precision());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

BigFloat with_precision(const BigFloat& x, mpfr_prec_t precision) {
  BigFloat r(precision);
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat from_double(double v, mpfr_prec_t precision) {
  BigFloat r(precision);
  mpfr_set_d(r.get(), v, MPFR_RNDN);
  return r;
}

BigFloat ldexp(const BigFloat& x, long e) {
  BigFloat r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

const BigFloat& max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
const BigFloat& min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }

// ------------------------------------------------------------ ExactComplex

ExactComplex& ExactComplex::operator+=(const ExactComplex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& rhs) {
  if (sgn(im) == 0 && sgn(rhs.im) == 0) {
    re *= rhs.re;
    return *this;
  }
  Rational r = re * rhs.re - im * rhs.im;
  Rational i = re * rhs.im + im * rhs.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& rhs) {
  if (rhs.is_zero()) throw DegenerateFraction("exact division by zero");
  if (sgn(rhs.im) == 0) {
    re /= rhs.re;
    im /= rhs.re;
    return *this;
  }
  const Rational n = rhs.norm();
  Rational r = (re * rhs.re + im * rhs.im) / n;
  Rational i = (im * rhs.re - re * rhs.im) / n;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

// ------------------------------------------------------------ FloatComplex

FloatComplex::FloatComplex(mpfr_prec_t precision) : re_(precision), im_(precision) {}

FloatComplex::FloatComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {
  require_same_precision(re_, im_);
}

FloatComplex::FloatComplex(BigFloat re) : re_(std::move(re)), im_(re_.precision()) {}

FloatComplex::FloatComplex(const ExactComplex& value, mpfr_prec_t precision)
    : re_(value.re, precision), im_(value.im, precision) {}

BigFloat FloatComplex::norm() const { return re_ * re_ + im_ * im_; }

BigFloat FloatComplex::abs() const {
  BigFloat r(precision());
  mpfr_hypot(r.get(), re_.get(), im_.get(), MPFR_RNDN);
  return r;
}

long FloatComplex::max_exponent() const noexcept {
  long e = LONG_MIN;
  if (!re_.is_zero()) e = std::max(e, re_.exponent());
  if (!im_.is_zero()) e = std::max(e, im_.exponent());
  return e;
}

FloatComplex FloatComplex::scaled(long e) const { return {ldexp(re_, e), ldexp(im_, e)}; }

FloatComplex FloatComplex::with_precision(mpfr_prec_t precision) const {
  return {cfkit::with_precision(re_, precision), cfkit::with_precision(im_, precision)};
}

FloatComplex& FloatComplex::operator+=(const FloatComplex& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

FloatComplex& FloatComplex::operator-=(const FloatComplex& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

FloatComplex& FloatComplex::operator*=(const FloatComplex& rhs) {
  require_same_precision(re_, rhs.re_);
  if (im_.is_zero() && rhs.im_.is_zero()) {
    re_ *= rhs.re_;
    return *this;
  }
  BigFloat r = re_ * rhs.re_ - im_ * rhs.im_;
  BigFloat i = re_ * rhs.im_ + im_ * rhs.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

FloatComplex& FloatComplex::operator/=(const FloatComplex& rhs) {
  require_same_precision(re_, rhs.re_);
  if (rhs.is_zero()) throw DegenerateFraction("float division by zero");
  if (rhs.im_.is_zero()) {
    re_ /= rhs.re_;
    im_ /= rhs.re_;
    return *this;
  }
  const BigFloat n = rhs.norm();
  BigFloat r = (re_ * rhs.re_ + im_ * rhs.im_) / n;
  BigFloat i = (im_ * rhs.re_ - re_ * rhs.im_) / n;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

// ---------------------------------------------------------- chordal metric

BigFloat chordal_distance(const Extended<FloatComplex>& w, const Extended<FloatComplex>& z) {
  const mpfr_prec_t p = w.context().precision();
  if (z.context().precision() != p) throw PrecisionMismatch();
  if (w.is_infinite() && z.is_infinite()) return BigFloat(p);
  if (w.is_infinite() || z.is_infinite()) {
    const FloatComplex& f = w.is_infinite() ? z.value() : w.value();
    return sqrt(BigFloat(1L, p) / (f.norm() + 1));
  }
  const BigFloat num = (z.value() - w.value()).norm();
  const BigFloat den = (w.value().norm() + 1) * (z.value().norm() + 1);
  return sqrt(num / den);
}

Rational chordal_distance_sq(const Extended<ExactComplex>& w, const Extended<ExactComplex>& z) {
  if (w.is_infinite() && z.is_infinite()) return 0;
  if (w.is_infinite() || z.is_infinite()) {
    const ExactComplex& f = w.is_infinite() ? z.value() : w.value();
    return Rational(1) / (f.norm() + 1);
  }
  const Rational num = (z.value() - w.value()).norm();
  const Rational den = (w.value().norm() + 1) * (z.value().norm() + 1);
  return num / den;
}

// ----------------------------------------------------------- serialization

std::string to_string(const Rational& v) { return v.get_str(10); }

namespace {

template <class Part>
std::string join_complex(const Part& re, const Part& im, bool re_zero, int im_sign) {
  if (im_sign == 0) return to_string(re);
  std::string imag = to_string(im);
  if (re_zero) return imag + "i";
  if (im_sign < 0) return to_string(re) + "-" + imag.substr(1) + "i";
  return to_string(re) + "+" + imag + "i";
}

}  // namespace

std::string to_string(const ExactComplex& v) { return join_complex(v.re, v.im, sgn(v.re) == 0, sgn(v.im)); }

std::string to_string(const BigFloat& v) { return v.to_string(); }

std::string to_string(const FloatComplex& v) {
  return join_complex(v.re(), v.im(), v.re().is_zero(), v.im().sign());
}

int decimal_digits(mpfr_prec_t precision) {
  return static_cast<int>(std::floor(static_cast<double>(precision) * std::log10(2.0)));
}

// ---------------------------------------------------------- ComplexLiteral

ComplexLiteral ComplexLiteral::parse(std::string_view text) {
  ComplexLiteral lit;
  lit.text_ = std::string(text);
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("empty complex literal", 0);
  if (s == "inf" || s == "infinity" || s == "Infinity") {
    lit.infinite_ = true;
    return lit;
  }

  if (s.back() == 'i') {
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) {
      lit.re_text_ = "0";
      lit.im_text_ = body;
    } else {
      lit.re_text_ = body.substr(0, split);
      lit.im_text_ = body.substr(split);
    }
    if (lit.im_text_.empty() || lit.im_text_ == "+") lit.im_text_ = "1";
    if (lit.im_text_ == "-") lit.im_text_ = "-1";
  } else {
    lit.re_text_ = s;
    lit.im_text_ = "0";
  }

  const bool re_exact = is_rational_text(lit.re_text_);
  const bool im_exact = is_rational_text(lit.im_text_);
  lit.exact_ = re_exact && im_exact;
  // Validate the inexact parts now so errors surface at parse time.
  if (re_exact) {
    lit.exact_value_.re = parse_rational(lit.re_text_, 0);
  } else {
    BigFloat::parse(lit.re_text_, 64);
  }
  if (im_exact) {
    lit.exact_value_.im = parse_rational(lit.im_text_, lit.re_text_.size());
  } else {
    BigFloat::parse(lit.im_text_, 64);
  }
  return lit;
}

const ExactComplex& ComplexLiteral::exact() const {
  if (infinite_) throw PreconditionError("literal '" + text_ + "' is the point at infinity");
  if (!exact_) throw PreconditionError("literal '" + text_ + "' is not an exact rational");
  return exact_value_;
}

FloatComplex ComplexLiteral::at_precision(mpfr_prec_t precision) const {
  if (infinite_) throw PreconditionError("literal '" + text_ + "' is the point at infinity");
  auto part = [&](const std::string& t, const Rational& exact_part) {
    return is_rational_text(t) ? BigFloat(exact_part, precision) : BigFloat::parse(t, precision);
  };
  return {part(re_text_, exact_value_.re), part(im_text_, exact_value_.im)};
}

Extended<FloatComplex> ComplexLiteral::extended_at_precision(mpfr_prec_t precision) const {
  if (infinite_) return {infinity, FloatComplex(precision)};
  return at_precision(precision);
}

}  // namespace cfkit
