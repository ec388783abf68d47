#pragma once

// Multiplication operators M_h f = h f on L^p(mu), mu atomic.

#include <cstddef>

#include "tdz/certificate.hpp"
#include "tdz/harness.hpp"
#include "tdz/linf.hpp"
#include "tdz/operator_matrix.hpp"
#include "tdz/tolerances.hpp"

namespace tdz::mult {

/// M_h on L^p(mu). p is in [1, inf]; use INFINITY for p = inf.
struct MultOperatorSpec {
  linf::MeasurableFn h;
  double p = 2.0;

  /// Throws Error(input) for p < 1 or NaN.
  void validate() const;
};

/// An element of B(L^p) of the form M_g. ||M_g|| = ||g||_inf for every p.
struct MultOperator {
  linf::MeasurableFn symbol;
};

struct MultAlgebra {
  using element_type = MultOperator;
  Tolerances tol;

  double norm(const MultOperator& m) const { return linf::essential_stats(m.symbol, tol).ess_sup; }
  MultOperator multiply(const MultOperator& a, const MultOperator& b) const {
    return {linf::pointwise_product(a.symbol, b.symbol)};
  }
};

/// TDZ iff h is a TDZ of L^inf. Witnesses M_{chi_{E_n}}; regular operators
/// carry M_{1/h} as inverse.
Verdict<MultOperator> decide_tdz_mult(const MultOperatorSpec& op, const Tolerances& tol = {});

/// Zero divisor iff 0 is an eigenvalue of M_h; annihilator M_{chi_{E^c}}.
Verdict<MultOperator> decide_zero_divisor_mult(const MultOperatorSpec& op, const Tolerances& tol = {});

struct MultAnalysis {
  linf::SpectrumReport spectrum;
  Verdict<MultOperator> verdict;
};

/// Combined verdict; the certificate is the annihilator when one exists.
MultAnalysis analyze_mult(const MultOperatorSpec& op, const Tolerances& tol = {});

/// diag(h(1), ..., h(N)) for p = 2. On a finite atom space N must equal the
/// atom count. Throws Error(input) otherwise.
OperatorMatrix finite_section_mult(const MultOperatorSpec& op, std::size_t n);

CertificationReport certify(const MultOperatorSpec& op, const Verdict<MultOperator>& verdict,
                            const Tolerances& tol = {});

}  // namespace tdz::mult
