// SPDX-License-Identifier: Apache-2.0
//
// Rewrites that keep every classical approximant: equivalence transforms,
// unit-numerator / unit-denominator normal forms, Bernoulli's construction of
// a fraction from its approximant sequence, and odd/even parts built on top of
// it. All outputs are lazy sources; coefficient n of an output reads only the
// input coefficients it needs (at most 2n + 2 of them for the parts).
#pragma once

#include <cfkit/cf_core.hpp>

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace cfkit {

/// Multipliers r_1, r_2, ... (r_0 = 1 implicitly) of an equivalence transform.
template <class S>
class EquivalenceFactors {
 public:
  using Rule = std::function<S(std::size_t)>;

  explicit EquivalenceFactors(Rule rule, std::optional<std::size_t> length = std::nullopt)
      : rule_(std::make_shared<const Rule>(std::move(rule))), length_(length) {}

  /// factors[0] is r_1.
  static EquivalenceFactors from_vector(std::vector<S> factors) {
    const std::size_t len = factors.size();
    auto data = std::make_shared<const std::vector<S>>(std::move(factors));
    return EquivalenceFactors([data](std::size_t n) { return (*data)[n - 1]; }, len);
  }

  std::optional<std::size_t> length() const noexcept { return length_; }

  /// r_n for n >= 1; throws ZeroFactor on a vanishing multiplier.
  S at(std::size_t n) const {
    if (n == 0 || (length_ && n > *length_)) {
      throw PreconditionError("equivalence factor index " + std::to_string(n) + " out of range");
    }
    S r = (*rule_)(n);
    if (r.is_zero()) throw ZeroFactor(n);
    return r;
  }

 private:
  std::shared_ptr<const Rule> rule_;
  std::optional<std::size_t> length_;
};

/// a'_n = r_n r_{n-1} a_n, b'_n = r_n b_n, b'_0 = b_0.
template <class S>
CoefficientSource<S> apply_equivalence(const CoefficientSource<S>& cf, const EquivalenceFactors<S>& r) {
  if (cf.length() && r.length() && *r.length() < *cf.length()) {
    throw PreconditionError("equivalence factors shorter than the fraction");
  }
  return CoefficientSource<S>(
      cf.b0(),
      [cf, r](std::size_t n) {
        const auto pq = cf.at(n);
        const S rn = r.at(n);
        const S rprev = n == 1 ? one_like(rn) : r.at(n - 1);
        return PartialQuotient<S>(rn * rprev * pq.a(), rn * pq.b());
      },
      cf.length());
}

/// The equivalent fraction b0 + K 1/b'_n, via r_n = 1/(a_n r_{n-1}).
template <class S>
CoefficientSource<S> to_unit_numerator(const CoefficientSource<S>& cf) {
  auto factors = std::make_shared<detail::PrefixMemo<S>>(
      std::vector<S>{one_like(cf.b0())},
      [cf](const std::vector<S>& r, std::size_t n) { return one_like(cf.b0()) / (cf.at(n).a() * r[n - 1]); });
  return CoefficientSource<S>(
      cf.b0(),
      [cf, factors](std::size_t n) {
        const auto pq = cf.at(n);
        return PartialQuotient<S>(one_like(cf.b0()), factors->get(n) * pq.b());
      },
      cf.length());
}

/// The equivalent fraction b0 + K c_n/1 with c_1 = a_1/b_1, c_n = a_n/(b_n b_{n-1}).
template <class S>
CoefficientSource<S> to_unit_denominator(const CoefficientSource<S>& cf) {
  return CoefficientSource<S>(
      cf.b0(),
      [cf](std::size_t n) {
        const auto pq = cf.at(n);
        if (pq.b().is_zero()) throw ZeroPartialDenominator(n);
        S den = pq.b();
        if (n > 1) {
          const auto prev = cf.at(n - 1);
          if (prev.b().is_zero()) throw ZeroPartialDenominator(n - 1);
          den *= prev.b();
        }
        return PartialQuotient<S>(pq.a() / den, one_like(cf.b0()));
      },
      cf.length());
}

/// Bernoulli's fraction whose approximant sequence is exactly K_0, K_1, ...:
///   b_0 = K_0, a_1 = K_1 - K_0, b_1 = 1, a_2 = K_1 - K_2, b_2 = K_2 - K_0,
///   a_n = (K_{n-2} - K_{n-3})(K_{n-1} - K_n), b_n = K_n - K_{n-2}  (n >= 3).
/// Consecutive K must differ; a violation raises RepeatedApproximant(n) for K_n = K_{n-1}.
template <class S>
CoefficientSource<S> bernoulli_cf(std::function<S(std::size_t)> values, std::optional<std::size_t> length) {
  auto K = std::make_shared<const std::function<S(std::size_t)>>(std::move(values));
  return CoefficientSource<S>(
      (*K)(0),
      [K](std::size_t n) {
        std::vector<S> k;  // K_{lo}..K_n
        const std::size_t lo = n >= 3 ? n - 3 : 0;
        for (std::size_t i = lo; i <= n; ++i) k.push_back((*K)(i));
        auto at = [&](std::size_t i) -> const S& { return k[i - lo]; };
        for (std::size_t i = std::max<std::size_t>(lo, 1); i <= n; ++i) {
          if (at(i) == at(i - 1)) throw RepeatedApproximant(i);
        }
        if (n == 1) return PartialQuotient<S>(at(1) - at(0), one_like(at(0)));
        if (n == 2) return PartialQuotient<S>(at(1) - at(2), at(2) - at(0));
        return PartialQuotient<S>((at(n - 2) - at(n - 3)) * (at(n - 1) - at(n)), at(n) - at(n - 2));
      },
      length);
}

/// Bernoulli's fraction for a finite sequence K_0..K_m (length m).
template <class S>
CoefficientSource<S> bernoulli_cf(std::vector<S> values) {
  if (values.empty()) throw PreconditionError("Bernoulli construction needs at least K_0");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] == values[i - 1]) throw RepeatedApproximant(i);
  }
  const std::size_t m = values.size() - 1;
  auto data = std::make_shared<const std::vector<S>>(std::move(values));
  return bernoulli_cf<S>([data](std::size_t i) { return (*data)[i]; }, m);
}

/// K_0 = b_0, K_1..K_depth: the classical approximants as finite scalars.
template <class S>
std::vector<S> approximant_values(const CoefficientSource<S>& cf, std::size_t depth) {
  std::vector<S> out{cf.b0()};
  for (auto& [n, value] : evaluate(cf, depth)) {
    if (value.is_infinite()) throw DegenerateFraction("infinite approximant", n);
    out.push_back(value.value());
  }
  return out;
}

namespace detail {

template <class S>
CoefficientSource<S> subsequence_part(const CoefficientSource<S>& cf, std::size_t offset,
                                      std::optional<std::size_t> length) {
  auto states = std::make_shared<PrefixMemo<ConvergentState<S>>>(
      std::vector<ConvergentState<S>>{seed(cf.b0())},
      [cf](const std::vector<ConvergentState<S>>& prefix, std::size_t n) { return advance_projective(prefix[n - 1], cf.at(n)); });
  return bernoulli_cf<S>(
      [states, offset](std::size_t i) {
        const std::size_t n = 2 * i + offset;
        const auto value = approximant(states->get(n));
        if (value.is_infinite()) throw DegenerateFraction("infinite approximant in part", n);
        return value.value();
      },
      length);
}

}  // namespace detail

/// Fraction whose n-th approximant is A_{2n}/B_{2n} of cf (zeroth: b_0).
template <class S>
CoefficientSource<S> even_part(const CoefficientSource<S>& cf) {
  std::optional<std::size_t> len;
  if (cf.length()) len = *cf.length() / 2;
  return detail::subsequence_part(cf, 0, len);
}

/// Fraction whose n-th approximant is A_{2n+1}/B_{2n+1} of cf (zeroth: A_1/B_1).
template <class S>
CoefficientSource<S> odd_part(const CoefficientSource<S>& cf) {
  std::optional<std::size_t> len;
  if (cf.length()) {
    if (*cf.length() == 0) throw PreconditionError("odd part of a fraction without partial quotients");
    len = (*cf.length() - 1) / 2;
  }
  return detail::subsequence_part(cf, 1, len);
}

/// Coefficient-wise equality of two b0 + K a_n/1 fractions through depth.
/// Throws PreconditionError if either has a partial denominator other than 1.
template <class S>
bool unit_denominator_equal(const CoefficientSource<S>& lhs, const CoefficientSource<S>& rhs, std::size_t depth) {
  auto check_form = [depth](const CoefficientSource<S>& cf) {
    for (std::size_t n = 1; n <= depth; ++n) {
      if (!cf.has(n)) throw PreconditionError("fraction shorter than the requested depth");
      if (!(cf.at(n).b() == one_like(cf.b0()))) {
        throw PreconditionError("not in unit-denominator form at index " + std::to_string(n));
      }
    }
  };
  check_form(lhs);
  check_form(rhs);
  if (!(lhs.b0() == rhs.b0())) return false;
  for (std::size_t n = 1; n <= depth; ++n) {
    if (!(lhs.at(n).a() == rhs.at(n).a())) return false;
  }
  return true;
}

}  // namespace cfkit
