// SPDX-License-Identifier: Apache-2.0
#include <cfkit/qcf.hpp>
#include <cfkit/transforms.hpp>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace cfkit;

namespace {

using E = ExactComplex;

CoefficientSource<E> to_source(const oracle::Fraction& f) {
  std::vector<PartialQuotient<E>> pqs;
  for (const auto& [a, b] : f.ab) pqs.emplace_back(a, b);
  return CoefficientSource<E>::finite(f.b0, pqs);
}

E ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::vector<Extended<E>> approximants(const CoefficientSource<E>& cf, std::size_t depth) {
  std::vector<Extended<E>> out{Extended<E>(cf.b0())};
  for (auto& [n, v] : evaluate(cf, depth)) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("unit-numerator form of Example 2") {
  const auto t = to_unit_numerator(example2_source());
  CHECK(t.b0() == E(0));
  const std::vector<E> expected{Rational(1, 2), -4, Rational(1, 10), Rational(-5, 8)};
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(t.at(n).a() == E(1));
    CHECK(t.at(n).b() == expected[n - 1]);
  }
}

TEST_CASE("unit-denominator form of Example 2") {
  const auto t = to_unit_denominator(example2_source());
  CHECK(t.at(1).a() == E(2));
  CHECK(t.at(2).a() == E(Rational(-1, 2)));
  CHECK(t.at(3).a() == E(Rational(-5, 2)));
  for (std::size_t n = 1; n <= 4; ++n) CHECK(t.at(n).b() == E(1));
  const auto a = approximants(example2_source(), 12);
  const auto b = approximants(t, 12);
  CHECK(a == b);
}

TEST_CASE("unit-numerator form of K(2) matches the pattern q^-n, q^-n") {
  const auto k2 = instantiate<E>(std::get<QFamily>(registry_lookup("rogers-ramanujan")), E(2));
  const auto t = to_unit_numerator(k2);
  for (std::size_t n = 1; n <= 20; ++n) {
    const long e = static_cast<long>((n + 1) / 2);
    CHECK(t.at(n).b() == power(E(2), -e));
  }
}

TEST_CASE("Bernoulli's construction") {
  const auto cf = bernoulli_cf(std::vector<E>{0, 2, 4, Rational(3, 2)});
  CHECK(cf.b0() == E(0));
  CHECK(cf.at(1).a() == E(2));
  CHECK(cf.at(1).b() == E(1));
  CHECK(cf.at(2).a() == E(-2));
  CHECK(cf.at(2).b() == E(4));
  CHECK(cf.at(3).a() == E(5));
  CHECK(cf.at(3).b() == E(Rational(-1, 2)));
  const auto values = approximant_values(cf, 3);
  CHECK(values == std::vector<E>{0, 2, 4, Rational(3, 2)});

  CHECK_THROWS_AS(bernoulli_cf(std::vector<E>{1, 2, 2}), RepeatedApproximant);
  CHECK_THROWS_AS(bernoulli_cf(std::vector<E>{}), PreconditionError);
  const auto lazy = bernoulli_cf<E>([](std::size_t i) { return i == 5 ? E(4) : E(static_cast<long>(i)); }, std::nullopt);
  try {
    (void)lazy.at(6);
    FAIL("expected RepeatedApproximant");
  } catch (const RepeatedApproximant& e) {
    CHECK(e.index() == 5u);
  }
}

TEST_CASE("random fractions: transforms keep approximants exactly") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t depth = 2 + static_cast<std::size_t>(trial) % 20;
    const auto f = oracle::random_fraction(rng, depth);
    const auto cf = to_source(f);
    const auto base = approximants(cf, depth);

    std::vector<E> r;
    for (std::size_t n = 0; n < depth; ++n) r.push_back(oracle::random_gaussian(rng));
    CHECK(approximants(apply_equivalence(cf, EquivalenceFactors<E>::from_vector(r)), depth) == base);
    CHECK(approximants(to_unit_numerator(cf), depth) == base);
    CHECK(approximants(to_unit_denominator(cf), depth) == base);

    bool finite = true;
    for (const auto& v : base) finite = finite && v.is_finite();
    if (!finite) continue;
    const auto even = even_part(cf);
    const auto odd = odd_part(cf);
    const auto ev = approximants(even, *even.length());
    const auto ov = approximants(odd, *odd.length());
    for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == base[2 * i]);
    for (std::size_t i = 0; i < ov.size(); ++i) CHECK(ov[i] == base[2 * i + 1]);
  }
}

TEST_CASE("zero multipliers and zero denominators are rejected") {
  const auto cf = CoefficientSource<E>::finite(1, {{1, 1}, {1, 0}, {1, 1}});
  const auto eq = apply_equivalence(cf, EquivalenceFactors<E>::from_vector({1, 0, 1}));
  CHECK_THROWS_AS(eq.at(2), ZeroFactor);
  const auto ud = to_unit_denominator(cf);
  CHECK_THROWS_AS(ud.at(2), ZeroPartialDenominator);
  CHECK_THROWS_AS(ud.at(3), ZeroPartialDenominator);
  CHECK_THROWS_AS(apply_equivalence(cf, EquivalenceFactors<E>::from_vector({1, 2})), PreconditionError);
}

TEST_CASE("even and odd parts of Example 2 follow the closed forms") {
  const auto even = even_part(example2_source());
  const auto odd = odd_part(example2_source());
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto [a_even, b_even] = oracle::example2_AB(2 * n);
    const auto [a_odd, b_odd] = oracle::example2_AB(2 * n + 1);
    CHECK(approximant(convergents(even, n).back()).value() == ratio(a_even, b_even));
    CHECK(approximant(convergents(odd, n).back()).value() == ratio(a_odd, b_odd));
  }
  CHECK(odd.b0() == E(2));
}

TEST_CASE("unit_denominator_equal compares normal forms") {
  const auto a = CoefficientSource<E>::finite(1, {{2, 1}, {3, 1}});
  const auto b = CoefficientSource<E>::finite(1, {{2, 1}, {3, 1}});
  const auto c = CoefficientSource<E>::finite(1, {{2, 1}, {4, 1}});
  CHECK(unit_denominator_equal(a, b, 2));
  CHECK_FALSE(unit_denominator_equal(a, c, 2));
  CHECK_THROWS_AS(unit_denominator_equal(a, CoefficientSource<E>::finite(1, {{2, 2}, {3, 1}}), 2), PreconditionError);
}
