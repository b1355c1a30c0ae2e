// SPDX-License-Identifier: Apache-2.0
#include <cfkit/cf_core.hpp>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace cfkit;

namespace {

CoefficientSource<ExactComplex> to_source(const oracle::Fraction& f) {
  std::vector<PartialQuotient<ExactComplex>> pqs;
  for (const auto& [a, b] : f.ab) pqs.emplace_back(a, b);
  return CoefficientSource<ExactComplex>::finite(f.b0, pqs);
}

}  // namespace

TEST_CASE("approximants match backward evaluation on random fractions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = oracle::random_fraction(rng, 1 + trial % 25);
    const auto values = evaluate(to_source(f), f.ab.size());
    for (const auto& [n, value] : values) {
      const auto expected = oracle::backward_value(f, n);
      REQUIRE(expected.has_value() == value.is_finite());
      if (expected) CHECK(value.value() == *expected);
    }
  }
}

TEST_CASE("recurrence matches matrix products and keeps the determinant") {
  std::mt19937_64 rng(12);
  const auto f = oracle::random_fraction(rng, 30);
  const auto states = convergents(to_source(f), 30);
  const auto reference = oracle::matrix_convergents(f);
  ExactComplex product(1);
  for (std::size_t n = 1; n <= 30; ++n) {
    CHECK(states[n].A == reference[n].first);
    CHECK(states[n].B == reference[n].second);
    product *= f.ab[n - 1].first;
    const ExactComplex sign = n % 2 == 1 ? ExactComplex(1) : ExactComplex(-1);
    CHECK(states[n].A * states[n].B_prev - states[n].A_prev * states[n].B == sign * product);
    CHECK(states[n].det == sign * product);
  }
}

TEST_CASE("finite sources terminate and unbounded ones do not") {
  const auto cf = CoefficientSource<ExactComplex>::finite(1, {{2, 3}, {4, 5}});
  CHECK(cf.length() == 2u);
  CHECK(cf.has(2));
  CHECK_FALSE(cf.has(3));
  CHECK_THROWS_AS(cf.at(3), PreconditionError);
  CHECK_THROWS_AS(evaluate(cf, 3), PreconditionError);
  const auto states = convergents(cf, 4);
  CHECK(states[4].A == states[2].A);
  // 1 + 2/(3 + 4/5) = 1 + 10/19
  CHECK(approximant(states[2]).value() == ExactComplex(Rational(29, 19)));
}

TEST_CASE("zero partial numerators are rejected with their index") {
  CHECK_THROWS_AS(PartialQuotient<ExactComplex>(0, 1), ZeroPartialNumerator);
  const CoefficientSource<ExactComplex> cf(1, [](std::size_t n) {
    return PartialQuotient<ExactComplex>(n == 3 ? ExactComplex(0) : ExactComplex(1), 1);
  });
  try {
    (void)cf.at(3);
    FAIL("expected ZeroPartialNumerator");
  } catch (const ZeroPartialNumerator& e) {
    CHECK(e.index() == 3u);
  }
}

TEST_CASE("modified approximants") {
  // 1 + 1/(1 + 1/1): A = (1, 2, 3, 5), B = (1, 1, 2, 3)
  const auto cf = CoefficientSource<ExactComplex>::finite(1, {{1, 1}, {1, 1}, {1, 1}});
  const auto s = convergents(cf, 3);
  const Extended<ExactComplex> inf(infinity, ExactComplex(0));
  CHECK(modified_approximant(s[3], inf).value() == ExactComplex(Rational(3, 2)));
  CHECK(modified_approximant(s[3], Extended<ExactComplex>(ExactComplex(0))).value() == ExactComplex(Rational(5, 3)));
  CHECK(modified_approximant(s[3], Extended<ExactComplex>(ExactComplex(1))).value() == ExactComplex(Rational(8, 5)));
  CHECK(denominator_ratio(s[3]).value() == ExactComplex(Rational(3, 2)));
}

TEST_CASE("vanishing denominators give the point at infinity") {
  // 0 + 1/(0 + 1/0): A = (1, 0), B = (0, 1)
  const auto cf = CoefficientSource<ExactComplex>::finite(0, {{1, 0}, {1, 0}});
  const auto s = convergents(cf, 2);
  CHECK(approximant(s[1]).is_infinite());
  CHECK(approximant(s[2]).value() == ExactComplex(0));
  CHECK(denominator_ratio(s[2]).is_infinite());
}

TEST_CASE("float recurrence with rescaling tracks the exact values") {
  // a_n = 2^n, b_n = 1: A_n grows quickly enough to force renormalization at 128 bits.
  const CoefficientSource<ExactComplex> exact(1, [](std::size_t n) {
    return PartialQuotient<ExactComplex>(power(ExactComplex(2), static_cast<long>(n)), 1);
  });
  const mpfr_prec_t p = 128;
  const auto fl = to_float(exact, p);
  const auto es = convergents(exact, 60);
  const auto fs = convergents(fl, 60);
  CHECK(fs.back().scale_exponent > 0);
  for (std::size_t n = 1; n <= 60; ++n) {
    const FloatComplex ref_a(es[n].A, p);
    const FloatComplex ref_b(es[n].B, p);
    const BigFloat rel_a = (raw_numerator(fs[n]) - ref_a).abs() / ref_a.abs();
    const BigFloat rel_b = (raw_denominator(fs[n]) - ref_b).abs() / ref_b.abs();
    CHECK(rel_a < BigFloat::parse("1e-30", p));
    CHECK(rel_b < BigFloat::parse("1e-30", p));
    const FloatComplex lhs = fs[n].A * fs[n].B_prev - fs[n].A_prev * fs[n].B;
    CHECK(((lhs - fs[n].det).abs() / fs[n].det.abs()) < BigFloat::parse("1e-30", p));
  }
}
