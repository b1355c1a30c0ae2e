// SPDX-License-Identifier: Apache-2.0
#include <cfkit/classify.hpp>
#include <cfkit/transforms.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cfkit {

namespace {

using Point = Extended<FloatComplex>;

FloatComplex scale(const FloatComplex& z, const BigFloat& s) { return {z.re() * s, z.im() * s}; }

BigFloat window_radius(const std::vector<Point>& ys) {
  const mpfr_prec_t p = ys.back().context().precision();
  BigFloat r(p);
  for (const auto& y : ys) r = max(r, chordal_distance(y, ys.back()));
  return r;
}

// Neville's scheme evaluated at h = 0.
FloatComplex extrapolate_to_zero(const std::vector<BigFloat>& h, std::vector<FloatComplex> y) {
  const std::size_t n = y.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const BigFloat denom = h[i] - h[i + m];
      y[i] = scale(scale(y[i + 1], h[i]) - scale(y[i], h[i + m]), BigFloat(1L, denom.precision()) / denom);
    }
  }
  return y[0];
}

int digits_from_distance(const BigFloat& d, mpfr_prec_t precision) {
  const int cap = decimal_digits(precision);
  if (d.is_zero()) return cap;
  const double v = -log10(d).to_double();
  if (!std::isfinite(v) || v <= 0) return 0;
  return std::min(cap, static_cast<int>(std::floor(v)));
}

// Merges the runs at p and p + boost. The reported value is the one at p.
LimitEstimate combine(const LimitEstimate& lo, const LimitEstimate& hi, double tol) {
  LimitEstimate out = lo;
  const mpfr_prec_t ph = hi.value.context().precision();
  const BigFloat d = chordal_distance(with_precision(lo.value, ph), hi.value);
  out.agreed_digits = digits_from_distance(d, lo.value.context().precision());
  out.converged = lo.converged && hi.converged && d < from_double(tol, ph);
  out.depth_used = std::max(lo.depth_used, hi.depth_used);
  return out;
}

BigFloat gap_between(const LimitEstimate& x, const LimitEstimate& y) { return chordal_distance(x.value, y.value); }

bool distinct(const BigFloat& gap, double tol) { return gap > from_double(10 * tol, gap.precision()); }

std::vector<Point> parity(const std::vector<Point>& seq, std::size_t first) {
  std::vector<Point> out;
  for (std::size_t i = first; i < seq.size(); i += 2) out.push_back(seq[i]);
  return out;
}

// Limits of the even- and odd-indexed entries of seq[0..], seq[n] belonging to index n.
SubsequenceLimits parity_limits(const std::vector<Point>& seq, double tol) {
  SubsequenceLimits out;
  out.even = estimate_sequence_limit(parity(seq, 0), tol, [](std::size_t i) { return 2 * i; });
  out.odd = estimate_sequence_limit(parity(seq, 1), tol, [](std::size_t i) { return 2 * i + 1; });
  out.even.depth_used = out.odd.depth_used = seq.empty() ? 0 : seq.size() - 1;
  return out;
}

SubsequenceLimits limits_at(const FloatSourceFactory& factory, mpfr_prec_t precision, const EstimationParams& params) {
  const auto cf = factory(precision);
  std::vector<Point> approx{Point(cf.b0())};
  auto state = seed(cf.b0());
  std::size_t depth = std::min(params.min_depth, params.max_depth);
  for (;;) {
    while (state.n < depth && cf.has(state.n + 1)) {
      state = advance(state, cf.at(state.n + 1));
      approx.push_back(approximant(state));
    }
    auto limits = parity_limits(approx, params.tol);
    if ((limits.odd.converged && limits.even.converged) || depth >= params.max_depth || !cf.has(state.n + 1)) {
      return limits;
    }
    depth = std::min(2 * depth, params.max_depth);
  }
}

// Dyadic windows [2^j, 2^{j+1}) over x[0] = value at index 1.
std::vector<std::pair<BigFloat, BigFloat>> dyadic_extremes(const std::vector<BigFloat>& x) {
  std::vector<std::pair<BigFloat, BigFloat>> out;
  for (std::size_t lo = 1; 2 * lo - 1 <= x.size(); lo *= 2) {
    BigFloat mn = x[lo - 1];
    BigFloat mx = x[lo - 1];
    for (std::size_t n = lo; n < 2 * lo; ++n) {
      mn = min(mn, x[n - 1]);
      mx = max(mx, x[n - 1]);
    }
    out.emplace_back(mn, mx);
  }
  return out;
}

bool grows_without_bound(const std::vector<BigFloat>& x) {
  const auto w = dyadic_extremes(x);
  if (w.size() < 4) return false;
  const mpfr_prec_t p = x.front().precision();
  const BigFloat factor = from_double(1.25, p);
  const std::size_t j = w.size() - 1;
  return w[j].second > w[j - 1].second * factor && w[j - 1].second > w[j - 2].second * factor;
}

bool tends_to_zero(const std::vector<BigFloat>& x) {
  const auto w = dyadic_extremes(x);
  if (w.size() < 4) return false;
  const mpfr_prec_t p = x.front().precision();
  const BigFloat factor = from_double(0.8, p);
  const std::size_t j = w.size() - 1;
  return w[j].first < w[j - 1].first * factor && w[j - 1].first < w[j - 2].first * factor;
}

Inconclusive limits_failure(const SubsequenceLimits& limits) {
  if (!limits.odd.converged || !limits.even.converged) {
    return {"odd/even limits not established within the depth budget", "limits"};
  }
  return {"odd and even limits coincide within 10*tol", "distinct-limits"};
}

Verdict numeric_certificate(const FloatSourceFactory& factory, const Theorem2Params& params,
                            const SubsequenceLimits& limits) {
  const double tol = params.estimation.tol;
  if (!limits.odd.converged || !limits.even.converged) return {limits_failure(limits)};
  const BigFloat gap = gap_between(limits.odd, limits.even);
  if (!distinct(gap, tol)) return {limits_failure(limits)};

  const mpfr_prec_t p = params.estimation.precision;
  const std::size_t depth = std::max(limits.odd.depth_used, limits.even.depth_used);
  auto cf = factory(p);
  const std::size_t last = cf.length() ? std::min(depth, *cf.length()) : depth;
  if (last < 3) return {Inconclusive{"fraction too short for a bound window", "con1"}};

  auto magnitudes = [last](const CoefficientSource<FloatComplex>& src) {
    std::vector<BigFloat> a;
    std::vector<BigFloat> b;
    for (std::size_t n = 1; n <= last; ++n) {
      const auto pq = src.at(n);
      a.push_back(pq.a().abs());
      b.push_back(pq.b().abs());
    }
    return std::pair(a, b);
  };
  auto [a, b] = magnitudes(cf);
  bool unit = false;
  if (grows_without_bound(b)) {
    cf = to_unit_denominator(cf);
    std::tie(a, b) = magnitudes(cf);
    unit = true;
  }
  const BigFloat c1 = *std::min_element(b.begin(), b.end());
  if (c1.is_zero() || tends_to_zero(b)) {
    return {Inconclusive{"partial denominators approach 0; no positive lower bound c1", "con1"}};
  }
  if (grows_without_bound(b)) {
    return {Inconclusive{"partial denominators unbounded; no upper bound c2", "con1"}};
  }
  std::vector<BigFloat> ratios;
  for (std::size_t i = 1; 2 * i + 1 <= last; ++i) ratios.push_back(a[2 * i] / a[2 * i - 1]);
  if (ratios.empty() || grows_without_bound(ratios)) {
    return {Inconclusive{"|a_{2i+1}/a_{2i}| unbounded", "con2a"}};
  }
  BoundCertificate cert{c1,
                        *std::max_element(b.begin(), b.end()),
                        *std::max_element(ratios.begin(), ratios.end()),
                        1,
                        last,
                        BoundMode::Numeric,
                        unit,
                        std::nullopt};
  return {GenerallyDivergent{std::move(cert), limits.odd, limits.even, gap, "numeric evidence only"}};
}

// Sum over the non-dominant terms of |c/L| |q|^{(dq - E) + n (dx - D)}.
BigFloat relative_remainder(const QPolynomial& poly, const BigFloat& abs_q, std::uint64_t n) {
  const auto [dom, lead] = poly.dominant_term();
  const mpfr_prec_t p = abs_q.precision();
  const BigFloat abs_lead = abs(BigFloat(lead, p));
  BigFloat sum(p);
  for (const auto& [m, c] : poly.terms()) {
    if (m == dom) continue;
    const auto e = static_cast<long>(m.q_degree) - static_cast<long>(dom.q_degree) +
                   static_cast<long>(n) * (static_cast<long>(m.x_degree) - static_cast<long>(dom.x_degree));
    sum += abs(BigFloat(c, p)) / abs_lead * pow(abs_q, e);
  }
  return sum;
}

BigFloat max_remainder(const std::vector<QPolynomial>& polys, const BigFloat& abs_q, std::uint64_t n) {
  BigFloat out(abs_q.precision());
  for (const auto& poly : polys) out = max(out, relative_remainder(poly, abs_q, n));
  return out;
}

// Smallest block n with remainder <= 1/2 for every polynomial, if any.
std::optional<std::uint64_t> dominance_block(const std::vector<QPolynomial>& polys, const BigFloat& abs_q) {
  const BigFloat half = from_double(0.5, abs_q.precision());
  auto ok = [&](std::uint64_t n) { return max_remainder(polys, abs_q, n) <= half; };
  if (ok(0)) return 0;
  std::uint64_t hi = 1;
  while (!ok(hi)) {
    if (hi >= (1U << 20)) return std::nullopt;
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // !ok(lo)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

BigFloat distortion(const BigFloat& eps) {
  const BigFloat one(1L, eps.precision());
  return (one + eps) / (one - eps);
}

Verdict certify_family(const QFamily& family, const ComplexLiteral& q, const Theorem2Params& params,
                       const SubsequenceLimits& limits) {
  const auto factory = family_factory(family, q);
  const mpfr_prec_t p = params.estimation.precision;
  const BigFloat abs_q = q.at_precision(p).abs();
  const auto profile = degree_profile(family);
  const auto* prof = std::get_if<DegreeProfile>(&profile);
  const bool symbolic_ok = prof != nullptr && abs_q >= from_double(1.0 + params.margin, p);
  if (!symbolic_ok) return numeric_certificate(factory, params, limits);

  const bool general = family.form == FamilyForm::General;
  std::vector<QPolynomial> polys = family.f;
  if (general) polys.insert(polys.end(), family.g.begin(), family.g.end());
  const auto block = dominance_block(polys, abs_q);
  if (!block) return numeric_certificate(factory, params, limits);

  const double tol = params.estimation.tol;
  if (!limits.odd.converged || !limits.even.converged) return {limits_failure(limits)};
  const BigFloat gap = gap_between(limits.odd, limits.even);
  if (!distinct(gap, tol)) return {limits_failure(limits)};

  BigFloat tail(p);
  if (general) {
    const BigFloat ea = max_remainder(family.f, abs_q, *block);
    const BigFloat eb = max_remainder(family.g, abs_q, *block);
    tail = pow(abs_q, static_cast<long>(prof->numerator_step - 2 * prof->denominator_step)) * distortion(ea) *
           distortion(eb);
  } else {
    tail = pow(abs_q, static_cast<long>(prof->numerator_step)) * distortion(max_remainder(family.f, abs_q, *block));
  }

  const std::size_t tail_index = static_cast<std::size_t>(*block) * family.k + 1;
  auto cf = factory(p);
  if (general) cf = to_unit_denominator(cf);
  BigFloat c3 = tail;
  const std::size_t explicit_pairs = std::max<std::size_t>(1, (tail_index - 1) / 2);
  for (std::size_t i = 1; i <= explicit_pairs; ++i) {
    c3 = max(c3, cf.at(2 * i + 1).a().abs() / cf.at(2 * i).a().abs());
  }
  BoundCertificate cert{BigFloat(1L, p), BigFloat(1L, p), c3, 1, 0, BoundMode::Symbolic, general, tail_index};
  return {GenerallyDivergent{std::move(cert), limits.odd, limits.even, gap,
                             "certified (symbolic bounds + numeric limit distinctness)"}};
}

struct SternStolzRun {
  std::optional<Inconclusive> failure;
  SternStolzDivergent result;
};

SternStolzRun stern_stolz_at(const FloatSourceFactory& factory, mpfr_prec_t p, const SternStolzParams& params) {
  const auto& est = params.estimation;
  const auto cf = to_unit_numerator(factory(p));
  const BigFloat tol = from_double(est.tol, p);
  const BigFloat one(1L, p);

  std::vector<BigFloat> mags;  // |b'_n|, n = 1..
  std::vector<ConvergentState<FloatComplex>> states{seed(cf.b0())};
  std::size_t depth = std::max<std::size_t>(std::min(est.min_depth, est.max_depth), 8);
  bool stable = false;
  for (;;) {
    while (states.size() <= depth && cf.has(states.size())) {
      const auto pq = cf.at(states.size());
      mags.push_back(pq.b().abs());
      states.push_back(advance(states.back(), pq));
    }
    const std::size_t n = states.size() - 1;
    if (n >= 4) {
      stable = true;
      for (std::size_t idx : {n, n - 1}) {
        for (auto get : {&raw_numerator<FloatComplex>, &raw_denominator<FloatComplex>}) {
          const FloatComplex cur = get(states[idx]);
          const FloatComplex old = get(states[idx - 2]);
          if ((cur - old).abs() > tol * max(one, cur.abs())) stable = false;
        }
      }
    }
    if (stable || depth >= est.max_depth || !cf.has(states.size())) break;
    depth = std::min(2 * depth, est.max_depth);
  }
  const std::size_t n = states.size() - 1;

  SternStolzRun run;
  auto& r = run.result;
  r.depth = n;
  r.series_partial_sum = BigFloat(p);
  for (const auto& m : mags) r.series_partial_sum += m;

  // Lag-l ratio rate over [lo, hi]; nullopt when some |b'| vanishes.
  auto rate = [&](std::size_t lag, std::size_t lo, std::size_t hi) -> std::optional<BigFloat> {
    BigFloat worst(p);
    for (std::size_t i = std::max<std::size_t>(lo, 1); i + lag <= hi; ++i) {
      if (mags[i - 1].is_zero()) return std::nullopt;
      worst = max(worst, mags[i + lag - 1] / mags[i - 1]);
    }
    return worst;
  };
  const BigFloat max_rate = from_double(params.max_rate, p);
  const BigFloat drift = from_double(1e-3, p);
  std::optional<std::size_t> lag_found;
  BigFloat ratio(p);
  for (std::size_t lag = 1; lag <= params.max_lag && 2 * lag < n / 4; ++lag) {
    const auto late = rate(lag, n / 2, n);
    const auto early = rate(lag, n / 4, n / 2);
    if (!late || !early) continue;
    const BigFloat inv = BigFloat(1L, p) / BigFloat(static_cast<long>(lag), p);
    const BigFloat late_rate = pow(*late, inv);
    const BigFloat early_rate = pow(*early, inv);
    if (late_rate <= max_rate && late_rate <= early_rate + drift) {
      lag_found = lag;
      ratio = *late;
      r.rate = late_rate;
      break;
    }
  }
  if (!lag_found) {
    run.failure = Inconclusive{"no geometric ratio certificate for sum |b'_n|", "ratio-test"};
    return run;
  }
  r.lag = *lag_found;
  BigFloat last_block(p);
  for (std::size_t i = n - r.lag + 1; i <= n; ++i) last_block += mags[i - 1];
  r.series_tail_bound = last_block * ratio / (one - ratio);
  if (!stable) {
    run.failure = Inconclusive{"A_n, B_n parity limits not stable within the depth budget", "limit-stability"};
    return run;
  }
  const std::size_t even = n % 2 == 0 ? n : n - 1;
  const std::size_t odd = n % 2 == 0 ? n - 1 : n;
  r.P0 = raw_numerator(states[even]);
  r.Q0 = raw_denominator(states[even]);
  r.P1 = raw_numerator(states[odd]);
  r.Q1 = raw_denominator(states[odd]);
  r.determinant_residual = (r.P1 * r.Q0 - r.P0 * r.Q1 - one_like(r.P0)).abs();
  return run;
}

BigFloat relative_gap(const FloatComplex& lo, const FloatComplex& hi) {
  const mpfr_prec_t p = hi.precision();
  return (lo.with_precision(p) - hi).abs() / (hi.abs() + BigFloat(1L, p));
}

}  // namespace

std::string Verdict::kind() const {
  static constexpr std::array<const char*, 8> names{
      "ConvergesEvidence",  "OddEvenDistinct",    "GenerallyDivergent", "SternStolzDivergent",
      "TrichotomyCase",     "Theorem5Consistent", "Theorem5Violation",  "Inconclusive"};
  return names[payload.index()];
}

FloatSourceFactory exact_factory(CoefficientSource<ExactComplex> cf) {
  return [cf = std::move(cf)](mpfr_prec_t p) { return to_float(cf, p); };
}

FloatSourceFactory family_factory(QFamily family, ComplexLiteral q) {
  family.validate();
  if (q.is_infinite()) throw PreconditionError("q must be finite");
  return [family = std::move(family), q = std::move(q)](mpfr_prec_t p) {
    return instantiate<FloatComplex>(family, q.at_precision(p));
  };
}

LimitEstimate estimate_sequence_limit(const std::vector<Extended<FloatComplex>>& values, double tol,
                                      const std::function<std::size_t(std::size_t)>& index_of) {
  LimitEstimate out;
  const std::size_t m = values.size();
  if (m == 0) return out;
  out.value = values.back();
  const std::size_t w = std::max<std::size_t>(16, m / 8);
  if (m < w + 1) return out;
  const mpfr_prec_t p = values.back().context().precision();
  const BigFloat tolb = from_double(tol, p);

  std::vector<Point> window(values.end() - static_cast<std::ptrdiff_t>(w), values.end());
  BigFloat best = window_radius(window) * 2L;
  out.method = "direct";
  if (best < tolb) {
    out.converged = true;
    return out;
  }

  // Extrapolation only applies to sequences whose steps are still shrinking.
  BigFloat early_step(p);
  BigFloat late_step(p);
  for (std::size_t i = m - w + 1; i < m; ++i) {
    BigFloat& slot = i < m - w / 2 ? early_step : late_step;
    slot = max(slot, chordal_distance(values[i], values[i - 1]));
  }
  if (!(late_step < early_step)) return out;

  for (std::size_t order : {2U, 3U, 4U, 6U, 8U, 12U, 16U}) {
    if (m < w + order) break;
    const std::size_t first = m - w - order + 1;
    bool usable = true;
    std::vector<BigFloat> h;
    for (std::size_t i = first; i < m && usable; ++i) {
      const std::size_t index = index_of(i);
      usable = values[i].is_finite() && index > 0;
      if (usable) h.push_back(BigFloat(1L, p) / BigFloat(static_cast<long>(index), p));
    }
    if (!usable) break;
    std::vector<Point> extrapolated;
    for (std::size_t i = m - w; i < m; ++i) {
      const std::size_t lo = i + 1 - order;
      std::vector<BigFloat> hs(h.begin() + static_cast<std::ptrdiff_t>(lo - first),
                               h.begin() + static_cast<std::ptrdiff_t>(i + 1 - first));
      std::vector<FloatComplex> ys;
      for (std::size_t k = lo; k <= i; ++k) ys.push_back(values[k].value());
      extrapolated.emplace_back(extrapolate_to_zero(hs, std::move(ys)));
    }
    const BigFloat diameter = window_radius(extrapolated) * 2L;
    if (diameter < best) {
      best = diameter;
      out.value = extrapolated.back();
      out.method = "richardson-" + std::to_string(order);
    }
  }
  out.converged = best < tolb;
  return out;
}

SubsequenceLimits estimate_subsequence_limits(const FloatSourceFactory& cf, const EstimationParams& params) {
  const auto lo = limits_at(cf, params.precision, params);
  const auto hi = limits_at(cf, params.precision + params.precision_boost, params);
  return {combine(lo.odd, hi.odd, params.tol), combine(lo.even, hi.even, params.tol)};
}

Verdict stern_stolz(const FloatSourceFactory& cf, const SternStolzParams& params) {
  const auto& est = params.estimation;
  const auto lo = stern_stolz_at(cf, est.precision, params);
  if (lo.failure) return {*lo.failure};
  const auto hi = stern_stolz_at(cf, est.precision + est.precision_boost, params);
  if (hi.failure) return {*hi.failure};

  SternStolzDivergent out = lo.result;
  const mpfr_prec_t p = est.precision;
  BigFloat worst(p + est.precision_boost);
  for (auto member : {&SternStolzDivergent::P0, &SternStolzDivergent::P1, &SternStolzDivergent::Q0,
                      &SternStolzDivergent::Q1}) {
    worst = max(worst, relative_gap(lo.result.*member, hi.result.*member));
  }
  out.agreed_digits = digits_from_distance(worst, p);
  if (worst > from_double(est.tol, worst.precision())) {
    return {Inconclusive{"P_0, P_1, Q_0, Q_1 disagree across precisions", "limit-stability"}};
  }
  if (out.determinant_residual >= from_double(10 * est.tol, p)) {
    return {Inconclusive{"P_1 Q_0 - P_0 Q_1 differs from 1", "determinant"}};
  }
  return {std::move(out)};
}

Verdict theorem2_certify(const FloatSourceFactory& cf, const Theorem2Params& params) {
  return numeric_certificate(cf, params, estimate_subsequence_limits(cf, params.estimation));
}

Verdict theorem2_certify(const QFamily& family, const ComplexLiteral& q, const Theorem2Params& params) {
  const auto factory = family_factory(family, q);
  return certify_family(family, q, params, estimate_subsequence_limits(factory, params.estimation));
}

Verdict classify_tp2(const QFamily& family, const ComplexLiteral& q, const Theorem2Params& params) {
  family.validate();
  if (family.form != FamilyForm::General) throw PreconditionError("trichotomy needs a general-form family");
  if (q.is_infinite()) throw PreconditionError("q must be finite");
  const auto profile = degree_profile(family);
  if (const auto* v = std::get_if<ProfileViolation>(&profile)) {
    throw PreconditionError("degree profile violation: " + v->what);
  }
  const auto& prof = std::get<DegreeProfile>(profile);
  const mpfr_prec_t p = params.estimation.precision;
  if (q.is_exact() ? q.exact().norm() <= 1 : q.at_precision(p).abs() <= BigFloat(1L, p)) {
    throw PreconditionError("trichotomy needs |q| > 1");
  }

  TrichotomyCase out;
  out.profile = prof;
  const std::int64_t a = prof.numerator_step;
  const std::int64_t b = prof.denominator_step;
  out.relation = 2 * b > a ? Trichotomy::TwoBGreater : (2 * b == a ? Trichotomy::TwoBEqual : Trichotomy::TwoBLess);

  if (out.relation == Trichotomy::TwoBEqual) {
    const long e = static_cast<long>(b - prof.r1 + 2 * prof.r2);
    const Rational bound = Rational(-4 * prof.leading_a) / Rational(prof.leading_b * prof.leading_b);
    const int sign_a = sgn(prof.leading_a);
    if (q.is_exact()) {
      const ExactComplex z = power(q.exact(), e);
      out.exceptional = z.is_real() && (sign_a > 0 ? (bound <= z.re && z.re < 0) : (0 < z.re && z.re <= bound));
    } else {
      const FloatComplex z = power(q.at_precision(p), e);
      const BigFloat slack = ldexp(z.abs() + BigFloat(1L, p), -static_cast<long>(p / 2));
      const BigFloat fb(bound, p);
      const bool real = abs(z.im()) <= slack;
      out.exceptional = real && (sign_a > 0 ? (fb <= z.re() && z.re().sign() < 0)
                                            : (z.re().sign() > 0 && z.re() <= fb));
    }
  } else if (out.relation == Trichotomy::TwoBLess) {
    const auto factory = family_factory(family, q);
    const auto limits = estimate_subsequence_limits(factory, params.estimation);
    if (limits.odd.converged && limits.even.converged) {
      const BigFloat gap = gap_between(limits.odd, limits.even);
      if (distinct(gap, params.estimation.tol)) {
        out.follow_up.push_back({OddEvenDistinct{limits.odd, limits.even, gap}});
      } else {
        out.follow_up.push_back({ConvergesEvidence{limits.odd, "odd and even parts share one limit"}});
      }
    }
    out.follow_up.push_back(certify_family(family, q, params, limits));
  }
  return {std::move(out)};
}

Verdict theorem5_monitor(const FloatSourceFactory& cf, std::size_t depth, const Theorem5Params& params) {
  if (depth < 2) throw PreconditionError("monitor depth must be at least 2");
  const double tol = params.estimation.tol;
  const auto limits = estimate_subsequence_limits(cf, params.estimation);
  if (!limits.odd.converged || !limits.even.converged) {
    throw PreconditionError("odd/even limits not established");
  }
  if (!distinct(gap_between(limits.odd, limits.even), tol)) {
    throw PreconditionError("odd and even limits coincide");
  }
  const mpfr_prec_t p = params.estimation.precision;
  auto src = cf(p);
  if (src.length() && *src.length() < depth) throw PreconditionError("fraction shorter than the monitor depth");
  const FloatComplex one = one_like(src.b0());
  bool unit = false;
  for (std::size_t n = 1; n <= depth && !unit; ++n) unit = !(src.at(n).b() == one);
  if (unit) src = to_unit_denominator(src);

  std::vector<BigFloat> mags;
  for (std::size_t n = 1; n <= depth; ++n) mags.push_back(src.at(n).a().abs());

  Theorem5Consistent out;
  out.depth = depth;
  out.unit_denominator_applied = unit;
  out.growth_bound = from_double(params.growth_bound, p);
  std::size_t start = 1;
  for (std::size_t lo = 1; lo <= depth; lo *= 2) {
    out.window_minima.emplace_back(lo, *std::min_element(mags.begin() + static_cast<std::ptrdiff_t>(lo - 1), mags.end()));
    start = lo;
  }
  if (out.window_minima.back().second > out.growth_bound) return {std::move(out)};
  const auto it = std::min_element(mags.begin() + static_cast<std::ptrdiff_t>(start - 1), mags.end());
  return {Theorem5Violation{static_cast<std::size_t>(it - mags.begin()) + 1, *it}};
}

PointRule constant_rule(ComplexLiteral value) {
  return [value = std::move(value)](std::size_t, mpfr_prec_t p) { return value.extended_at_precision(p); };
}

namespace {

struct ProbeRun {
  SubsequenceLimits v;
  SubsequenceLimits w;
  BigFloat min_separation;
};

ProbeRun probe_at(const FloatSourceFactory& factory, const PointRule& v, const PointRule& w, std::size_t depth,
                  mpfr_prec_t p, double tol) {
  const auto cf = factory(p);
  if (cf.length() && *cf.length() < depth) throw PreconditionError("fraction shorter than the probe depth");
  auto state = seed(cf.b0());
  std::vector<Point> sv{modified_approximant(state, v(0, p))};
  std::vector<Point> sw{modified_approximant(state, w(0, p))};
  BigFloat sep(1L, p);
  for (std::size_t n = 1; n <= depth; ++n) {
    state = advance(state, cf.at(n));
    const Point vn = v(n, p);
    const Point wn = w(n, p);
    sv.push_back(modified_approximant(state, vn));
    sw.push_back(modified_approximant(state, wn));
    if (2 * n >= depth) sep = min(sep, chordal_distance(vn, wn));
  }
  return {parity_limits(sv, tol), parity_limits(sw, tol), sep};
}

ProbeSide probe_side(const SubsequenceLimits& lo, const SubsequenceLimits& hi, double tol) {
  ProbeSide side;
  side.even = combine(lo.even, hi.even, tol);
  side.odd = combine(lo.odd, hi.odd, tol);
  side.limit = side.even;
  const BigFloat gap = gap_between(side.even, side.odd);
  side.limit.converged = side.even.converged && side.odd.converged && !distinct(gap, tol);
  side.limit.agreed_digits = std::min({side.even.agreed_digits, side.odd.agreed_digits,
                                       digits_from_distance(gap, side.even.value.context().precision())});
  return side;
}

}  // namespace

ProbeReport general_convergence_probe(const FloatSourceFactory& cf, const PointRule& v, const PointRule& w,
                                      std::size_t depth, const EstimationParams& params) {
  if (depth < 2) throw PreconditionError("probe depth must be at least 2");
  const auto lo = probe_at(cf, v, w, depth, params.precision, params.tol);
  const auto hi = probe_at(cf, v, w, depth, params.precision + params.precision_boost, params.tol);
  ProbeReport out;
  out.v = probe_side(lo.v, hi.v, params.tol);
  out.w = probe_side(lo.w, hi.w, params.tol);
  out.min_separation = lo.min_separation;
  out.limit_gap = gap_between(out.v.limit, out.w.limit);
  out.depth = depth;
  out.evidence = out.v.limit.converged && out.w.limit.converged && !distinct(out.limit_gap, params.tol) &&
                 out.min_separation > from_double(params.tol, params.precision);
  return out;
}

}  // namespace cfkit
