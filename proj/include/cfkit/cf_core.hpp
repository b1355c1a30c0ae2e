// SPDX-License-Identifier: Apache-2.0
//
// Continued fractions b0 + a1/(b1 + a2/(b2 + ...)) and their convergents.
//
// Partial quotients are 1-based. The recurrence is seeded with
// A_{-1} = 1, A_0 = b0, B_{-1} = 0, B_0 = 1 and advanced by
//   X_n = b_n X_{n-1} + a_n X_{n-2}.
#pragma once

#include <cfkit/numerics.hpp>

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace cfkit {

template <class S>
class PartialQuotient {
 public:
  /// Throws ZeroPartialNumerator when a = 0 (that would terminate the fraction).
  PartialQuotient(S a, S b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.is_zero()) throw ZeroPartialNumerator();
  }

  const S& a() const noexcept { return a_; }
  const S& b() const noexcept { return b_; }

  friend bool operator==(const PartialQuotient&, const PartialQuotient&) = default;

 private:
  S a_;
  S b_;
};

/// b0 plus a deterministic rule n -> (a_n, b_n), finite or unbounded.
/// Copies share the rule; the rule must be safe to call concurrently.
template <class S>
class CoefficientSource {
 public:
  using Rule = std::function<PartialQuotient<S>(std::size_t)>;

  CoefficientSource(S b0, Rule rule, std::optional<std::size_t> length = std::nullopt)
      : b0_(std::move(b0)), rule_(std::make_shared<const Rule>(std::move(rule))), length_(length) {}

  static CoefficientSource finite(S b0, std::vector<PartialQuotient<S>> quotients) {
    const std::size_t len = quotients.size();
    auto data = std::make_shared<const std::vector<PartialQuotient<S>>>(std::move(quotients));
    return CoefficientSource(
        std::move(b0), [data](std::size_t n) { return (*data)[n - 1]; }, len);
  }

  const S& b0() const noexcept { return b0_; }
  std::optional<std::size_t> length() const noexcept { return length_; }
  bool has(std::size_t n) const noexcept { return n >= 1 && (!length_ || n <= *length_); }

  /// Partial quotient n (1-based). Index-less errors from the rule get n attached.
  PartialQuotient<S> at(std::size_t n) const {
    if (!has(n)) throw PreconditionError("partial quotient index " + std::to_string(n) + " out of range");
    try {
      return (*rule_)(n);
    } catch (const ZeroPartialNumerator& e) {
      if (e.index()) throw;
      throw ZeroPartialNumerator(n);
    } catch (const ZeroPartialDenominator& e) {
      if (e.index()) throw;
      throw ZeroPartialDenominator(n);
    } catch (const DegenerateFraction& e) {
      if (e.index()) throw;
      throw DegenerateFraction(e.message(), n);
    }
  }

 private:
  S b0_;
  std::shared_ptr<const Rule> rule_;
  std::optional<std::size_t> length_;
};

/// Rolling window of the three-term recurrence.
///
/// Invariant: A * B_prev - A_prev * B == det. In float mode the 4-tuple may be
/// rescaled by a power of two; `scale_exponent` records the total exponent
/// removed (raw A = A * 2^scale_exponent) and det is kept consistent with the
/// stored tuple.
template <class S>
struct ConvergentState {
  std::size_t n = 0;
  S A;
  S A_prev;
  S B;
  S B_prev;
  S det;
  long scale_exponent = 0;
};

template <class S>
ConvergentState<S> seed(const S& b0) {
  return {0, b0, one_like(b0), one_like(b0), zero_like(b0), -one_like(b0), 0};
}

namespace detail {

// Float tuples are renormalized once their magnitude passes 2^{p/2}.
inline void rescale(ConvergentState<ExactComplex>&) {}

inline void rescale(ConvergentState<FloatComplex>& s) {
  const long limit = static_cast<long>(s.A.precision() / 2);
  long e = s.A.max_exponent();
  for (const FloatComplex* x : {&s.A_prev, &s.B, &s.B_prev}) e = std::max(e, x->max_exponent());
  if (e <= limit) return;
  s.A = s.A.scaled(-e);
  s.A_prev = s.A_prev.scaled(-e);
  s.B = s.B.scaled(-e);
  s.B_prev = s.B_prev.scaled(-e);
  s.det = s.det.scaled(-2 * e);
  s.scale_exponent += e;
}

}  // namespace detail

template <class S>
ConvergentState<S> advance(const ConvergentState<S>& state, const PartialQuotient<S>& pq) {
  ConvergentState<S> next{state.n + 1,
                          pq.b() * state.A + pq.a() * state.A_prev,
                          state.A,
                          pq.b() * state.B + pq.a() * state.B_prev,
                          state.B,
                          -(state.det * pq.a()),
                          state.scale_exponent};
  detail::rescale(next);
  return next;
}

/// advance() followed, for exact states, by division of the tuple by B_n
/// (or A_n when B_n = 0). Ratios are unchanged; the raw A_n, B_n are not kept.
template <class S>
ConvergentState<S> advance_projective(const ConvergentState<S>& state, const PartialQuotient<S>& pq) {
  auto next = advance(state, pq);
  if constexpr (std::is_same_v<S, ExactComplex>) {
    const S c = next.B.is_zero() ? next.A : next.B;
    next.A /= c;
    next.A_prev /= c;
    next.B /= c;
    next.B_prev /= c;
    next.det /= c * c;
  }
  return next;
}

template <class S>
Extended<S> approximant(const ConvergentState<S>& state) {
  try {
    return ext_div(state.A, state.B);
  } catch (const DegenerateFraction&) {
    throw DegenerateFraction("approximant is 0/0", state.n);
  }
}

/// S_n(w) = (A_n + w A_{n-1}) / (B_n + w B_{n-1}); S_n(inf) = A_{n-1}/B_{n-1}.
template <class S>
Extended<S> modified_approximant(const ConvergentState<S>& state, const Extended<S>& w) {
  try {
    if (w.is_infinite()) return ext_div(state.A_prev, state.B_prev);
    return ext_div(state.A + w.value() * state.A_prev, state.B + w.value() * state.B_prev);
  } catch (const DegenerateFraction&) {
    throw DegenerateFraction("modified approximant is 0/0", state.n);
  }
}

/// r_n = B_n / B_{n-1}.
template <class S>
Extended<S> denominator_ratio(const ConvergentState<S>& state) {
  try {
    return ext_div(state.B, state.B_prev);
  } catch (const DegenerateFraction&) {
    throw DegenerateFraction("denominator ratio with B_n = B_{n-1} = 0", state.n);
  }
}

/// Unscaled A_n, B_n (float states may have been renormalized).
template <class S>
S raw_numerator(const ConvergentState<S>& state) {
  if constexpr (std::is_same_v<S, FloatComplex>) {
    return state.A.scaled(state.scale_exponent);
  } else {
    return state.A;
  }
}

template <class S>
S raw_denominator(const ConvergentState<S>& state) {
  if constexpr (std::is_same_v<S, FloatComplex>) {
    return state.B.scaled(state.scale_exponent);
  } else {
    return state.B;
  }
}

/// States 0..depth in order. Past the end of a finite source the fraction has
/// terminated, so the last state is repeated (same approximant, same index).
template <class S>
std::vector<ConvergentState<S>> convergents(const CoefficientSource<S>& cf, std::size_t depth) {
  std::vector<ConvergentState<S>> out;
  out.reserve(depth + 1);
  out.push_back(seed(cf.b0()));
  for (std::size_t n = 1; n <= depth; ++n) {
    if (cf.has(n)) {
      out.push_back(advance(out.back(), cf.at(n)));
    } else {
      out.push_back(out.back());
    }
  }
  return out;
}

/// Approximants 1..depth. depth must not exceed a finite source's length.
template <class S>
std::vector<std::pair<std::size_t, Extended<S>>> evaluate(const CoefficientSource<S>& cf, std::size_t depth) {
  if (cf.length() && depth > *cf.length()) {
    throw PreconditionError("depth " + std::to_string(depth) + " exceeds source length " +
                            std::to_string(*cf.length()));
  }
  std::vector<std::pair<std::size_t, Extended<S>>> out;
  out.reserve(depth);
  auto state = seed(cf.b0());
  for (std::size_t n = 1; n <= depth; ++n) {
    state = advance_projective(state, cf.at(n));
    out.emplace_back(n, approximant(state));
  }
  return out;
}

/// Converts an exact source to floats of the given precision, coefficient by coefficient.
inline CoefficientSource<FloatComplex> to_float(const CoefficientSource<ExactComplex>& cf, mpfr_prec_t precision) {
  return CoefficientSource<FloatComplex>(
      to_float(cf.b0(), precision),
      [cf, precision](std::size_t n) {
        const auto pq = cf.at(n);
        return PartialQuotient<FloatComplex>(to_float(pq.a(), precision), to_float(pq.b(), precision));
      },
      cf.length());
}

namespace detail {

/// Append-only cache of a prefix-dependent sequence, extended on demand.
/// Shared between copies of a lazy source; guarded for concurrent readers.
template <class T>
class PrefixMemo {
 public:
  using Step = std::function<T(const std::vector<T>& prefix, std::size_t next_index)>;

  PrefixMemo(std::vector<T> initial, Step step) : values_(std::move(initial)), step_(std::move(step)) {}

  T get(std::size_t i) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (values_.size() <= i) values_.push_back(step_(values_, values_.size()));
    return values_[i];
  }

 private:
  std::mutex mutex_;
  std::vector<T> values_;
  Step step_;
};

}  // namespace detail

}  // namespace cfkit
