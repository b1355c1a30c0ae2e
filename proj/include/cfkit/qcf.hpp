// SPDX-License-Identifier: Apache-2.0
//
// Polynomial q-continued-fraction families.
//
// A family is given by polynomials f_1..f_k (and g_0..g_{k-1}) in Z[q][x];
// for n >= 0 and 1 <= s <= k
//   a_{nk+s}(q)   = f_s(q^n)
//   b_{nk+s-1}(q) = g_{s-1}(q^n)      (general form; otherwise b_n = 1)
#pragma once

#include <cfkit/cf_core.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfkit {

struct Monomial {
  std::uint32_t q_degree = 0;
  std::uint32_t x_degree = 0;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Element of Z[q][x]; zero coefficients are never stored.
class QPolynomial {
 public:
  QPolynomial() = default;
  QPolynomial(Integer constant);  // NOLINT(google-explicit-constructor)
  QPolynomial(long constant) : QPolynomial(Integer(constant)) {}  // NOLINT(google-explicit-constructor)
  static QPolynomial monomial(Integer coeff, std::uint32_t q_degree, std::uint32_t x_degree);
  static QPolynomial q();
  static QPolynomial x();

  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<Monomial, Integer>& terms() const noexcept { return terms_; }
  bool depends_on_x() const;
  std::uint32_t x_degree() const;

  /// Univariate polynomial in q after substituting x = q^n: degree -> coefficient.
  std::map<std::uint64_t, Integer> substitute(std::uint64_t n) const;
  /// Term with the lexicographically largest (x_degree, q_degree); the one
  /// that dominates f(q^n) for large n. Requires a nonzero polynomial.
  std::pair<Monomial, Integer> dominant_term() const;

  template <class S>
  S evaluate(const S& q_value, std::uint64_t n) const {
    S sum = zero_like(q_value);
    for (const auto& [m, c] : terms_) {
      const auto e = static_cast<long>(m.q_degree + n * m.x_degree);
      sum += scalar_like(q_value, c) * power(q_value, e);
    }
    return sum;
  }

  QPolynomial& operator+=(const QPolynomial& rhs);
  QPolynomial& operator-=(const QPolynomial& rhs);
  QPolynomial& operator*=(const QPolynomial& rhs);
  friend QPolynomial operator+(QPolynomial lhs, const QPolynomial& rhs) { return lhs += rhs; }
  friend QPolynomial operator-(QPolynomial lhs, const QPolynomial& rhs) { return lhs -= rhs; }
  friend QPolynomial operator*(QPolynomial lhs, const QPolynomial& rhs) { return lhs *= rhs; }
  friend QPolynomial operator-(const QPolynomial& p) { return QPolynomial() - p; }
  friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

  /// Canonical text, terms by (x_degree, q_degree) descending: "q^4*x^4 + 7*q^3*x^3 + 2*x".
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Integer& c);

  std::map<Monomial, Integer> terms_;
};

/// Parses the polynomial grammar
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := INT | VAR ('^' INT)? | '(' expr ')'
///   VAR    := 'q' | 'x'
/// Throws ParseError carrying the 0-based character offset.
QPolynomial parse_polynomial(std::string_view text);

enum class FamilyForm { UnitDenominator, General };

struct QFamily {
  std::string name;
  FamilyForm form = FamilyForm::UnitDenominator;
  std::size_t k = 1;
  std::vector<QPolynomial> f;  // f_1..f_k
  std::vector<QPolynomial> g;  // g_0..g_{k-1}, general form only
  QPolynomial b0 = QPolynomial(1);

  /// Throws PreconditionError when the shape is inconsistent.
  void validate() const;

  /// Polynomials in q of a_n and b_n (b_n = 1 in unit-denominator form).
  std::map<std::uint64_t, Integer> numerator_polynomial(std::size_t n) const;
  std::map<std::uint64_t, Integer> denominator_polynomial(std::size_t n) const;
};

struct DegreeProfile {
  FamilyForm form = FamilyForm::UnitDenominator;
  // deg a_{i+1} - deg a_i  (C3 in unit-denominator form, a in general form)
  std::int64_t numerator_step = 0;
  std::int64_t r1 = 0;  // deg a_1
  // deg b_{i} - deg b_{i-1}, general form only
  std::int64_t denominator_step = 0;
  std::int64_t r2 = 0;  // deg b_0
  Integer leading_a;
  Integer leading_b;
};

struct ProfileViolation {
  std::string what;
  char sequence = 'a';  // 'a' or 'b'
  std::size_t first_index = 0;
  std::size_t second_index = 0;
};

/// Checks the arithmetic-progression degree law and the common leading
/// coefficient for every index (not just a prefix).
std::variant<DegreeProfile, ProfileViolation> degree_profile(const QFamily& family);

/// The fraction of `family` at a given q. Coefficients are produced lazily;
/// a vanishing partial numerator raises ZeroPartialNumerator(index).
template <class S>
CoefficientSource<S> instantiate(const QFamily& family, const S& q) {
  family.validate();
  if (q.is_zero()) throw PreconditionError("q must be nonzero");
  const S b0 = family.b0.evaluate(q, 0);
  return CoefficientSource<S>(b0, [family, q](std::size_t i) {
    const std::size_t k = family.k;
    const std::size_t n = (i - 1) / k;
    const std::size_t s = (i - 1) % k;
    S a = family.f[s].evaluate(q, n);
    if (a.is_zero()) throw ZeroPartialNumerator(i);
    S b = one_like(q);
    if (family.form == FamilyForm::General) b = family.g[i % k].evaluate(q, i / k);
    return PartialQuotient<S>(std::move(a), std::move(b));
  });
}

/// Exact-rational rule source that is not a q-polynomial family.
struct RuleFamily {
  std::string name;
  std::function<CoefficientSource<ExactComplex>()> make;
};

using RegistryEntry = std::variant<QFamily, RuleFamily>;

/// Built-in fractions: rogers-ramanujan, ramanujan-selberg-1/2/3,
/// goellnitz-gordon, g1, g2, example2-G. Throws UnknownFamily.
RegistryEntry registry_lookup(std::string_view name);
std::vector<std::string> registry_names();

/// The rational-coefficient fraction with closed-form convergents
/// A_{2n-1} = n+1, A_{2n} = n + 3n^2, B_{2n-1} = n, B_{2n} = n^2.
CoefficientSource<ExactComplex> example2_source();

/// Family documents: {"name", "form": "unit-denominator"|"general", "k", "b0", "f": [...], "g": [...]}.
QFamily family_from_json(std::string_view json_text);
std::string family_to_json(const QFamily& family);

}  // namespace cfkit
