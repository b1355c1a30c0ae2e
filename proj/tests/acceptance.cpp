// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cfkit/classify.hpp>
#include <cfkit/transforms.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "oracles.hpp"

using namespace cfkit;

namespace {

using E = ExactComplex;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

QFamily family(const std::string& name) { return std::get<QFamily>(registry_lookup(name)); }

CoefficientSource<E> to_source(const oracle::Fraction& f) {
  std::vector<PartialQuotient<E>> pqs;
  for (const auto& [a, b] : f.ab) pqs.emplace_back(a, b);
  return CoefficientSource<E>::finite(f.b0, pqs);
}

std::vector<Extended<E>> approximants(const CoefficientSource<E>& cf, std::size_t depth) {
  std::vector<Extended<E>> out{Extended<E>(cf.b0())};
  for (auto& [n, v] : evaluate(cf, depth)) out.push_back(v);
  return out;
}

// Number of matching decimal digits of x against the reference y.
double digits_against(const FloatComplex& x, const BigFloat& y) {
  const BigFloat err = (x - FloatComplex(y)).abs();
  if (err.is_zero()) return decimal_digits(x.precision());
  return -std::stod(log10(err / abs(y)).to_string());
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Closed-form numerators and denominators of Example 2.
Outcome example2_closed_forms() {
  Outcome o;
  const std::size_t N = 10000;
  const auto states = convergents(example2_source(), 2 * N);
  for (std::size_t i = 1; i <= 2 * N && o.ok; ++i) {
    const auto [a, b] = oracle::example2_AB(i);
    o.require(states[i].A == E(Rational(a)) && states[i].B == E(Rational(b)),
              "closed form mismatch at index " + std::to_string(i));
  }
  if (o.ok) o.detail = "A_n, B_n match for n <= 20000";
  return o;
}

// 2. General convergence of Example 2 to 3 with v = 1, w = 2.
Outcome example2_general_convergence() {
  Outcome o;
  const std::size_t depth = 1000;

  // Exact mode: S_n(w) equals the displayed expressions in n, whose limit is
  // the ratio of the n^2 coefficients.
  using Poly = std::array<Rational, 3>;  // c0 + c1 n + c2 n^2
  auto at = [](const Poly& p, long n) { return E(p[0] + p[1] * n + p[2] * n * n); };
  auto limit = [](const Poly& num, const Poly& den) {
    int d = 2;
    while (d > 0 && den[d] == 0) --d;
    for (int j = d + 1; j < 3; ++j) {
      if (num[j] != 0) throw PreconditionError("expression is unbounded");
    }
    return E(num[d] / den[d]);
  };
  const auto states = convergents(example2_source(), depth);
  for (long w : {1L, 2L}) {
    const Extended<E> wv{E(w)};
    // S_{2n}(w) = (n + 3n^2 + (1 + n) w) / (n^2 + n w)
    const Poly even_num{Rational(w), Rational(1 + w), Rational(3)};
    const Poly even_den{Rational(0), Rational(w), Rational(1)};
    // S_{2n+1}(w) = (2 + n + (n + 3n^2) w) / (1 + n + n^2 w)
    const Poly odd_num{Rational(2), Rational(1 + w), Rational(3 * w)};
    const Poly odd_den{Rational(1), Rational(1), Rational(w)};
    for (std::size_t i = 2; i <= depth && o.ok; ++i) {
      const auto s = modified_approximant(states[i], wv);
      const long n = static_cast<long>(i / 2);
      const E expected = i % 2 == 0 ? at(even_num, n) / at(even_den, n) : at(odd_num, n) / at(odd_den, n);
      o.require(s.is_finite() && s.value() == expected, "S_n(" + std::to_string(w) + ") differs at n = " + std::to_string(i));
    }
    o.require(limit(even_num, even_den) == E(3) && limit(odd_num, odd_den) == E(3),
              "limit of the closed form is not 3 for w = " + std::to_string(w));
  }

  // Float mode.
  EstimationParams params;
  params.precision = 256;
  params.tol = 1e-30;
  const auto rep = general_convergence_probe(exact_factory(example2_source()), constant_rule(ComplexLiteral::parse("1")),
                                             constant_rule(ComplexLiteral::parse("2")), depth, params);
  const BigFloat three(3L, 256);
  o.require(rep.v.limit.converged && rep.w.limit.converged, "probe limits not converged");
  double dv = 0, dw = 0;
  if (o.ok) {
    dv = digits_against(rep.v.limit.value.value(), three);
    dw = digits_against(rep.w.limit.value.value(), three);
    o.require(dv >= 12 && dw >= 12, "probe limits differ from 3 by more than 1e-12");
  }
  const BigFloat sep = BigFloat(1L, 256) / sqrt(BigFloat(10L, 256));
  o.require(rep.min_separation > 0L, "separation is not positive");
  o.require(abs(rep.min_separation - sep) < BigFloat::parse("1e-70", 256), "separation differs from 1/sqrt(10)");
  o.require(rep.evidence, "probe reports no evidence");
  if (o.ok) {
    o.detail = "exact S_n(1), S_n(2) match closed forms to n = 1000; float limits 3 to " + fmt("%.0f", std::min(dv, dw)) +
               " digits; separation " + rep.min_separation.to_string().substr(0, 12);
  }
  return o;
}

// 3. Odd and even limits of K(q) against deep truncations of K(-1/q) and K(1/q^4).
Outcome rogers_ramanujan_limits() {
  Outcome o;
  double worst = 1e9;
  for (long q : {2L, 3L}) {
    EstimationParams params;
    params.precision = 256;
    params.tol = 1e-50;
    const auto lim = estimate_subsequence_limits(
        family_factory(family("rogers-ramanujan"), ComplexLiteral::parse(std::to_string(q))), params);
    o.require(lim.odd.converged && lim.even.converged, "limits not converged at q = " + std::to_string(q));
    if (!o.ok) break;

    const mpfr_prec_t op = 400;
    const BigFloat k_neg = BigFloat::parse(oracle::rogers_ramanujan_tail_value(Rational(-1, q), 2000, op, 110), 256);
    const BigFloat k_q4 = BigFloat::parse(oracle::rogers_ramanujan_tail_value(Rational(1, q * q * q * q), 400, op, 110), 256);
    const BigFloat inv_neg = BigFloat(1L, 256) / k_neg;
    const BigFloat q_k_q4 = BigFloat(q, 256) * k_q4;

    const double odd_d = digits_against(lim.odd.value.value(), q_k_q4);
    const double even_d = digits_against(lim.even.value.value(), inv_neg);
    const double swapped = std::max(digits_against(lim.odd.value.value(), inv_neg),
                                    digits_against(lim.even.value.value(), q_k_q4));
    o.require(odd_d >= 40 && even_d >= 40,
              "q = " + std::to_string(q) + ": " + fmt("%.1f", odd_d) + "/" + fmt("%.1f", even_d) + " digits");
    o.require(swapped < 5, "limits agree with both oracle values");
    worst = std::min({worst, odd_d, even_d});
  }
  if (o.ok) o.detail = "odd -> q K(1/q^4), even -> 1/K(-1/q) at q = 2, 3; >= " + fmt("%.0f", worst) + " digits";
  return o;
}

// 4. Stern-Stolz on K(q) with the unit-numerator pattern and the P/Q determinant.
Outcome stern_stolz_rr() {
  Outcome o;
  std::string detail;
  for (const char* qs : {"2", "3", "-2", "3/2i"}) {
    const auto lit = ComplexLiteral::parse(qs);
    const auto t = to_unit_numerator(instantiate<E>(family("rogers-ramanujan"), lit.exact()));
    for (std::size_t n = 1; n <= 200 && o.ok; ++n) {
      const E expected = power(lit.exact(), -static_cast<long>(n));
      o.require(t.at(2 * n - 1).a() == E(1) && t.at(2 * n - 1).b() == expected && t.at(2 * n).b() == expected,
                std::string("unit-numerator pattern broken at q = ") + qs);
    }
    SternStolzParams params;
    params.estimation.precision = 256;
    params.estimation.tol = 1e-30;
    const auto v = stern_stolz(family_factory(family("rogers-ramanujan"), lit), params);
    o.require(v.is<SternStolzDivergent>(), std::string("no certificate at q = ") + qs + " (" + v.kind() + ")");
    if (!o.ok) break;
    const auto& ss = v.as<SternStolzDivergent>();
    const BigFloat residual = (ss.P1 * ss.Q0 - ss.P0 * ss.Q1 - FloatComplex(BigFloat(1L, 256))).abs();
    o.require(residual < BigFloat::parse("1e-30", 256), std::string("determinant residual too large at q = ") + qs);
    o.require(ss.rate < 1L, "ratio certificate above 1");
    if (detail.empty()) detail = "q = 2: residual " + fmt("%.2e", std::stod(residual.to_string())) + ", lag " + std::to_string(ss.lag);
  }
  if (o.ok) o.detail = "pattern exact to n = 200 at q = 2, 3, -2, 3/2i; " + detail;
  return o;
}

// 5. Theorem 2 certifier.
Outcome theorem2() {
  Outcome o;
  Theorem2Params params;
  params.estimation.precision = 256;
  params.estimation.tol = 1e-30;
  const auto v = theorem2_certify(family("rogers-ramanujan"), ComplexLiteral::parse("2"), params);
  o.require(v.is<GenerallyDivergent>(), "K(2): " + v.kind());
  if (o.ok) {
    const auto& c = v.as<GenerallyDivergent>().certificate;
    o.require(c.mode == BoundMode::Symbolic, "K(2) certificate is not symbolic");
    o.require(c.c1 == BigFloat(1L, c.c1.precision()) && c.c2 == BigFloat(1L, c.c2.precision()), "c1, c2 != 1");
    o.require(c.c3 == BigFloat(2L, c.c3.precision()), "c3 != 2");
  }
  const auto g = theorem2_certify(exact_factory(example2_source()), params);
  o.require(g.is<Inconclusive>(), "Example 2: " + g.kind());
  if (o.ok) o.detail = "K(2) symbolic c1=c2=1 c3=2; Example 2 Inconclusive (" + g.as<Inconclusive>().failed_hypothesis + ")";
  return o;
}

// 6. 2b vs a trichotomy.
Outcome trichotomy() {
  Outcome o;
  Theorem2Params params;
  const auto two = ComplexLiteral::parse("2");
  const auto gg = classify_tp2(family("goellnitz-gordon"), two, params).as<TrichotomyCase>();
  o.require(gg.relation == Trichotomy::TwoBGreater, "GG is not 2b>a");
  const auto g2 = classify_tp2(family("g2"), two, params).as<TrichotomyCase>();
  o.require(g2.relation == Trichotomy::TwoBLess, "G2 is not 2b<a");

  QFamily syn;
  syn.name = "balanced";
  syn.form = FamilyForm::General;
  syn.k = 1;
  syn.f = {parse_polynomial("x^2")};
  syn.g = {parse_polynomial("x")};
  syn.b0 = QPolynomial(1);
  const auto neg = classify_tp2(syn, ComplexLiteral::parse("-2"), params).as<TrichotomyCase>();
  const auto pos = classify_tp2(syn, two, params).as<TrichotomyCase>();
  o.require(neg.relation == Trichotomy::TwoBEqual && pos.relation == Trichotomy::TwoBEqual, "synthetic family is not 2b=a");
  o.require(neg.exceptional, "q = -2 not exceptional");
  o.require(!pos.exceptional, "q = 2 exceptional");
  if (o.ok) o.detail = "GG 2b>a, G2 2b<a, synthetic 2b=a: q=-2 exceptional, q=2 not";
  return o;
}

struct Corpus {
  std::vector<oracle::Fraction> fractions;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    std::mt19937_64 rng(20240521);
    std::uniform_int_distribution<std::size_t> depth(1, 100);
    while (out.fractions.size() < 200) out.fractions.push_back(oracle::random_fraction(rng, depth(rng)));
    return out;
  }();
  return c;
}

// 7. Transform and contraction oracle on random fractions.
Outcome transform_oracle() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::size_t parts = 0;
  for (std::size_t t = 0; t < corpus().fractions.size() && o.ok; ++t) {
    const auto& f = corpus().fractions[t];
    const std::size_t m = f.ab.size();
    const auto cf = to_source(f);
    const std::string where = " (fraction " + std::to_string(t) + ")";

    std::vector<Extended<E>> base{Extended<E>(f.b0)};
    for (std::size_t n = 1; n <= m; ++n) {
      const auto v = oracle::backward_value(f, n);
      base.push_back(v ? Extended<E>(*v) : Extended<E>(infinity, E(0)));
    }
    o.require(approximants(cf, m) == base, "approximants differ from backward evaluation" + where);

    std::vector<E> r;
    for (std::size_t n = 0; n < m; ++n) r.push_back(oracle::random_gaussian(rng));
    const auto eq = apply_equivalence(cf, EquivalenceFactors<E>::from_vector(r));
    o.require(approximants(eq, m) == base, "equivalence transform changed approximants" + where);
    o.require(approximants(to_unit_numerator(cf), m) == base, "unit-numerator form changed approximants" + where);
    const auto ud = to_unit_denominator(cf);
    o.require(approximants(ud, m) == base, "unit-denominator form changed approximants" + where);

    bool finite = true;
    for (const auto& v : base) finite = finite && v.is_finite();
    if (!finite) continue;
    std::vector<E> values;
    for (const auto& v : base) values.push_back(v.value());

    const auto even = even_part(cf);
    const auto odd = odd_part(cf);
    const auto ev = approximants(even, *even.length());
    const auto ov = approximants(odd, *odd.length());
    o.require(ev.size() == (m + 2) / 2 && ov.size() == (m + 1) / 2, "part lengths" + where);
    for (std::size_t i = 0; i < ev.size(); ++i) o.require(ev[i] == base[2 * i], "even part" + where);
    for (std::size_t i = 0; i < ov.size(); ++i) o.require(ov[i] == base[2 * i + 1], "odd part" + where);
    ++parts;

    const auto bern = bernoulli_cf(values);
    o.require(approximant_values(bern, m) == values, "Bernoulli round trip" + where);
    // Same approximants, so the unit-denominator forms coincide.
    o.require(unit_denominator_equal(ud, to_unit_denominator(bern), m), "unit-denominator forms differ (Bernoulli)" + where);
    o.require(unit_denominator_equal(ud, to_unit_denominator(eq), m), "unit-denominator forms differ (equivalence)" + where);
  }
  if (o.ok) o.detail = "200 fractions; parts and Bernoulli checked on " + std::to_string(parts) + " with finite approximants";
  return o;
}

// 8. Determinant formula on the same corpus.
Outcome determinant_invariant() {
  Outcome o;
  std::size_t checked = 0;
  for (std::size_t t = 0; t < corpus().fractions.size() && o.ok; ++t) {
    const auto& f = corpus().fractions[t];
    const auto states = convergents(to_source(f), f.ab.size());
    const auto matrix = oracle::matrix_convergents(f);
    E product(1);
    for (std::size_t n = 1; n <= f.ab.size(); ++n) {
      product *= f.ab[n - 1].first;
      const E expected = n % 2 == 1 ? product : -product;
      const auto& s = states[n];
      o.require(s.A == matrix[n].first && s.B == matrix[n].second, "recurrence differs from matrix product");
      o.require(s.A * s.B_prev - s.A_prev * s.B == expected, "determinant fails at n = " + std::to_string(n));
      ++checked;
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " indices exact";
  return o;
}

// 9. Theorem 5 on the unit-denominator form of Example 2.
Outcome theorem5() {
  Outcome o;
  const auto ud = to_unit_denominator(example2_source());
  std::size_t first_large = 0;
  for (std::size_t n = 1; n <= 4096 && first_large == 0; ++n) {
    if (ud.at(n).a().norm() > Rational(1000000)) first_large = n;
  }
  o.require(first_large != 0, "|c_n| stays below 1e3");

  Theorem5Params params;
  params.estimation.precision = 256;
  params.estimation.tol = 1e-30;
  const auto lim = estimate_subsequence_limits(exact_factory(example2_source()), params.estimation);
  o.require(lim.odd.converged && lim.even.converged, "limits not converged");
  if (o.ok) {
    o.require(digits_against(lim.odd.value.value(), BigFloat(1L, 256)) >= 12, "odd limit is not 1");
    o.require(digits_against(lim.even.value.value(), BigFloat(3L, 256)) >= 12, "even limit is not 3");
  }
  const auto v = theorem5_monitor(exact_factory(example2_source()), 1024, params);
  o.require(v.is<Theorem5Consistent>(), "monitor: " + v.kind());
  if (o.ok) o.detail = "|c_n| > 1e3 from n = " + std::to_string(first_large) + "; limits 1 and 3; Theorem5Consistent";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "example2-closed-forms", 10, example2_closed_forms},
      {2, "example2-general-convergence", 5, example2_general_convergence},
      {3, "rogers-ramanujan-limits", 30, rogers_ramanujan_limits},
      {4, "stern-stolz", 10, stern_stolz_rr},
      {5, "theorem2-certifier", 10, theorem2},
      {6, "trichotomy", 1, trichotomy},
      {7, "transform-oracle", 60, transform_oracle},
      {8, "determinant-invariant", 60, determinant_invariant},
      {9, "theorem5-consistency", 5, theorem5},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (out.ok && secs > c.budget_s) {
      out.ok = false;
      out.detail = "over time budget of " + fmt("%.0f", c.budget_s) + " s";
    }
    failures += out.ok ? 0 : 1;
    std::printf("%s  %d  %-30s %7.2fs  %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
