// SPDX-License-Identifier: Apache-2.0
//
// Convergence and divergence analysis on the float backend.
//
// Every limit is estimated twice, at precision p and p + 64 bits, and only
// accepted when both runs are window-stable and agree. Verdicts carry the
// evidence they were derived from.
#pragma once

#include <cfkit/cf_core.hpp>
#include <cfkit/qcf.hpp>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cfkit {

/// Builds the fraction at a requested working precision.
using FloatSourceFactory = std::function<CoefficientSource<FloatComplex>(mpfr_prec_t)>;

FloatSourceFactory exact_factory(CoefficientSource<ExactComplex> cf);
FloatSourceFactory family_factory(QFamily family, ComplexLiteral q);

struct EstimationParams {
  mpfr_prec_t precision = kDefaultPrecision;
  double tol = 1e-30;
  std::size_t min_depth = 64;
  std::size_t max_depth = 4096;
  mpfr_prec_t precision_boost = 64;
};

struct LimitEstimate {
  Extended<FloatComplex> value{FloatComplex()};
  int agreed_digits = 0;
  std::size_t depth_used = 0;
  bool converged = false;
  std::string method = "none";  // "direct" or "richardson-<order>"
};

/// Window-stability estimate for one sequence at one precision. The window is
/// the last max(16, size/8) terms; `index_of(i)` gives the expansion variable
/// used by Richardson extrapolation for element i.
LimitEstimate estimate_sequence_limit(const std::vector<Extended<FloatComplex>>& values, double tol,
                                      const std::function<std::size_t(std::size_t)>& index_of);

struct SubsequenceLimits {
  LimitEstimate odd;   // A_{2n+1} / B_{2n+1}
  LimitEstimate even;  // A_{2n} / B_{2n}
};

SubsequenceLimits estimate_subsequence_limits(const FloatSourceFactory& cf, const EstimationParams& params);

enum class BoundMode { Symbolic, Numeric };

/// Constants for c1 <= |b_i| <= c2 and |a_{2i+1} / a_{2i}| <= c3.
struct BoundCertificate {
  BigFloat c1;
  BigFloat c2;
  BigFloat c3;
  std::size_t window_begin = 1;
  std::size_t window_end = 0;  // 0: unbounded (symbolic tail)
  BoundMode mode = BoundMode::Numeric;
  bool unit_denominator_applied = false;
  std::optional<std::size_t> tail_index;  // symbolic mode: dominance holds from here on
};

struct Verdict;

struct ConvergesEvidence {
  LimitEstimate limit;
  std::string note;
};

struct OddEvenDistinct {
  LimitEstimate odd;
  LimitEstimate even;
  BigFloat gap;
};

struct GenerallyDivergent {
  BoundCertificate certificate;
  LimitEstimate odd;
  LimitEstimate even;
  BigFloat gap;
  std::string certification;
};

struct SternStolzDivergent {
  BigFloat series_partial_sum;
  BigFloat series_tail_bound;
  std::size_t lag = 1;
  BigFloat rate;  // (max |b'_{n+lag}| / |b'_n|)^(1/lag) over the tail window
  std::size_t depth = 0;
  FloatComplex P0;
  FloatComplex P1;
  FloatComplex Q0;
  FloatComplex Q1;
  BigFloat determinant_residual;  // |P1 Q0 - P0 Q1 - 1|
  int agreed_digits = 0;
};

enum class Trichotomy { TwoBGreater, TwoBEqual, TwoBLess };

struct TrichotomyCase {
  Trichotomy relation = Trichotomy::TwoBGreater;
  bool exceptional = false;
  DegreeProfile profile;
  std::vector<Verdict> follow_up;
};

struct Theorem5Consistent {
  std::vector<std::pair<std::size_t, BigFloat>> window_minima;  // (window start, min |a_n| in window)
  BigFloat growth_bound;
  std::size_t depth = 0;
  bool unit_denominator_applied = false;
};

struct Theorem5Violation {
  std::size_t index = 0;
  BigFloat value;
};

struct Inconclusive {
  std::string reason;
  std::string failed_hypothesis;
};

struct Verdict {
  std::variant<ConvergesEvidence, OddEvenDistinct, GenerallyDivergent, SternStolzDivergent, TrichotomyCase,
               Theorem5Consistent, Theorem5Violation, Inconclusive>
      payload;

  std::string kind() const;
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(payload);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(payload);
  }
};

struct SternStolzParams {
  EstimationParams estimation;
  std::size_t max_lag = 8;
  double max_rate = 0.99;  // geometric rate that still counts as a certificate
};

/// Stern-Stolz: rewrite as b0 + K 1/b'_n and look for a geometric ratio
/// certificate for sum |b'_n|. Anything short of that is Inconclusive.
Verdict stern_stolz(const FloatSourceFactory& cf, const SternStolzParams& params);

struct Theorem2Params {
  EstimationParams estimation;
  double margin = 0.1;  // symbolic mode needs |q| >= 1 + margin
};

/// Theorem-2 certificate from numeric bounds over the estimation window.
Verdict theorem2_certify(const FloatSourceFactory& cf, const Theorem2Params& params);
/// Theorem-2 certificate for a family; bounds are symbolic (leading-term
/// dominance) when the degree profile is valid and |q| >= 1 + margin.
Verdict theorem2_certify(const QFamily& family, const ComplexLiteral& q, const Theorem2Params& params);

/// 2b vs a trichotomy for general-form families at |q| > 1.
Verdict classify_tp2(const QFamily& family, const ComplexLiteral& q, const Theorem2Params& params);

struct Theorem5Params {
  EstimationParams estimation;
  double growth_bound = 1e3;
};

/// Watches |a_n| of the unit-denominator form when the odd and even limits
/// differ. Throws PreconditionError when they are not established and distinct.
Verdict theorem5_monitor(const FloatSourceFactory& cf, std::size_t depth, const Theorem5Params& params);

/// n -> point of the sphere, built at the requested precision.
using PointRule = std::function<Extended<FloatComplex>(std::size_t, mpfr_prec_t)>;
PointRule constant_rule(ComplexLiteral value);

struct ProbeSide {
  LimitEstimate limit;  // of S_n(v_n) over all n (both parities agree)
  LimitEstimate even;
  LimitEstimate odd;
};

struct ProbeReport {
  ProbeSide v;
  ProbeSide w;
  BigFloat min_separation;  // min d(v_n, w_n) over the second half of the run
  BigFloat limit_gap;
  std::size_t depth = 0;
  bool evidence = false;
};

/// Numerical evidence for general convergence from a pair of test sequences.
ProbeReport general_convergence_probe(const FloatSourceFactory& cf, const PointRule& v, const PointRule& w,
                                      std::size_t depth, const EstimationParams& params);

}  // namespace cfkit
