#pragma once

// Elements of L^inf(mu) over atomic measure spaces. Every atom has positive
// measure, so "essential" statements reduce to statements about the values
// that are actually represented.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tdz/certificate.hpp"
#include "tdz/harness.hpp"
#include "tdz/tolerances.hpp"

namespace tdz::linf {

using cd = std::complex<double>;

/// Atoms 1..m with the given positive weights.
struct FiniteAtoms {
  std::vector<double> weights;
};

/// Counting measure on {1, 2, ...}.
struct CountingN {};

using AtomicSpace = std::variant<FiniteAtoms, CountingN>;

struct FiniteVector {
  std::vector<cd> values;
};

/// f(n) = prefix[n-1] for n <= N, cycle[(n - N - 1) mod p] afterwards.
struct EventuallyPeriodic {
  std::vector<cd> prefix;
  std::vector<cd> cycle;
};

/// f(n) = prefix[n-1] for n <= N, c / n afterwards (c != 0).
struct DecayingTail {
  std::vector<cd> prefix;
  cd c;
};

using Representation = std::variant<FiniteVector, EventuallyPeriodic, DecayingTail>;

class MeasurableFn {
 public:
  /// Throws Error(input) when the representation does not match the space,
  /// a weight is not positive, a value is not finite, a cycle is empty or the
  /// tail constant is zero.
  MeasurableFn(AtomicSpace space, Representation values);

  static MeasurableFn finite(std::vector<double> weights, std::vector<cd> values);
  static MeasurableFn periodic(std::vector<cd> prefix, std::vector<cd> cycle);
  static MeasurableFn decaying(std::vector<cd> prefix, cd c);

  const AtomicSpace& space() const noexcept { return space_; }
  const Representation& representation() const noexcept { return values_; }
  bool on_counting_measure() const noexcept { return std::holds_alternative<CountingN>(space_); }

  /// Value at atom / index n (1-based). Throws Error(input) past the last atom
  /// of a finite space or for n = 0.
  cd operator()(std::size_t n) const;

  /// Number of explicitly listed leading values (atom count, or prefix length).
  std::size_t prefix_length() const noexcept;

 private:
  AtomicSpace space_;
  Representation values_;
};

struct MinModulus {
  double value = 0.0;
  bool is_limit = false;  // infimum approached but not attained
};

struct EssentialStats {
  double ess_sup = 0.0;
  bool attains_zero = false;
  bool zero_in_ess_range = false;
  MinModulus min_modulus;
};

EssentialStats essential_stats(const MeasurableFn& f, const Tolerances& tol = {});

/// Zero set {x : |f(x)| <= eps_zero} as an indicator in the same representation
/// family as f.
MeasurableFn zero_set_indicator(const MeasurableFn& f, const Tolerances& tol = {});

/// Indicator of E_n = {x : |f(x)| < 1/n}, decided atom by atom.
MeasurableFn sublevel_indicator(const MeasurableFn& f, std::size_t n);

/// Zero divisor (two-sided; the algebra is commutative) iff f attains 0.
/// Throws Error(degenerate_input) for identically zero f.
Verdict<MeasurableFn> decide_zero_divisor_linf(const MeasurableFn& f, const Tolerances& tol = {});

/// TDZ iff 0 is in the essential range. Otherwise regular with
/// lambda0 = min |f| and inverse 1/f.
Verdict<MeasurableFn> decide_tdz_linf(const MeasurableFn& f, const Tolerances& tol = {});

enum class ZeroClass { not_in_spectrum, point_spectrum, continuous_spectrum };

std::string_view to_string(ZeroClass zc);

struct SpectrumReport {
  std::vector<cd> values;             // distinct explicitly attained values
  std::optional<std::string> tail;    // description of an infinite attained family
  bool zero_is_limit = false;         // 0 in the closure, not attained
  std::vector<cd> point_values;       // attained on positive measure
  std::optional<std::string> point_tail;
  ZeroClass zero_class = ZeroClass::not_in_spectrum;
};

/// Spectrum of M_h, which equals the essential range of h.
SpectrumReport spectrum_mult(const MeasurableFn& h, const Tolerances& tol = {});

/// Exact pointwise product. Supported: vector x vector, periodic x periodic
/// (lcm of cycle lengths), decaying tail x eventually constant periodic.
/// Anything else throws Error(unsupported_product).
MeasurableFn pointwise_product(const MeasurableFn& f, const MeasurableFn& g);

/// Pointwise 1/f. Throws Error(input) when f attains 0 or has a decaying tail.
MeasurableFn reciprocal(const MeasurableFn& f);

/// sup |f - 1| over represented values (defect of an inverse check).
double distance_from_one(const MeasurableFn& f);

struct LinfAlgebra {
  using element_type = MeasurableFn;
  Tolerances tol;

  double norm(const MeasurableFn& f) const { return essential_stats(f, tol).ess_sup; }
  MeasurableFn multiply(const MeasurableFn& a, const MeasurableFn& b) const { return pointwise_product(a, b); }
};

struct LinfAnalysis {
  EssentialStats stats;
  SpectrumReport spectrum;
  /// Zero-divisor flags plus TDZ/regular; the certificate is the annihilator
  /// for zero divisors, the E_n witnesses for the remaining TDZ, and the
  /// regularity bound otherwise.
  Verdict<MeasurableFn> verdict;
};

LinfAnalysis analyze(const MeasurableFn& f, const Tolerances& tol = {});

CertificationReport certify(const MeasurableFn& f, const Verdict<MeasurableFn>& verdict, const Tolerances& tol = {});

}  // namespace tdz::linf
