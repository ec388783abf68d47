#pragma once

// Composition operators C_phi f = f o phi on the Hardy space H^2 of the disk,
// seen through degree-graded truncations: an element of order N keeps the
// Taylor coefficients a_0..a_{N-1}. Symbols are polynomials mapping the disk
// into the closed disk.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tdz/certificate.hpp"
#include "tdz/disk_algebra.hpp"
#include "tdz/harness.hpp"
#include "tdz/operator_matrix.hpp"
#include "tdz/tolerances.hpp"

namespace tdz::hardy {

using disk::CirclePolynomial;

/// First N Taylor coefficients of an H^2 function.
class TruncatedSeries {
 public:
  /// Throws Error(input) on an empty or non-finite coefficient list.
  explicit TruncatedSeries(std::vector<cd> coeffs);

  const std::vector<cd>& coeffs() const noexcept { return coeffs_; }
  std::size_t order() const noexcept { return coeffs_.size(); }
  double h2_norm() const;

 private:
  std::vector<cd> coeffs_;
};

class PolySymbol {
 public:
  /// Coefficients with modulus below eps_zero are set to zero, so that
  /// phi'(0) = 0 and constant symbols are recognized exactly. Throws
  /// Error(invalid_symbol) when the sup over the circle exceeds 1 + eps_norm.
  static PolySymbol make(const CirclePolynomial& poly, const Tolerances& tol = {});

  const CirclePolynomial& poly() const noexcept { return poly_; }
  double sup_on_circle() const noexcept { return sup_; }
  bool is_constant() const noexcept { return poly_.degree() == 0; }
  cd value_at_zero() const { return poly_.coeffs()[0]; }
  cd derivative_at_zero() const { return poly_.degree() >= 1 ? poly_.coeffs()[1] : cd{}; }

 private:
  PolySymbol(CirclePolynomial poly, double sup) : poly_(std::move(poly)), sup_(sup) {}
  CirclePolynomial poly_;
  double sup_;
};

/// Coefficients of f o phi up to order n, by Horner evaluation with every
/// product truncated at n.
TruncatedSeries compose_series(const TruncatedSeries& f, const PolySymbol& phi, std::size_t n);

/// Column j holds the coefficients of phi^j truncated at n. Appends a
/// conditioning warning when the symbol reaches within eps_norm of the circle.
OperatorMatrix composition_matrix(const PolySymbol& phi, std::size_t n, const Tolerances& tol = {},
                                  std::vector<std::string>* warnings = nullptr);

/// Exact polynomial composition outer(inner(z)).
CirclePolynomial compose_polynomials(const CirclePolynomial& outer, const CirclePolynomial& inner);

/// ||q^m||_{H^2}: trapezoid rule on more than m deg(q) roots of unity, which
/// is exact for polynomials up to rounding.
double power_h2_norm(const CirclePolynomial& q, std::size_t m);

/// Row-by-column product summed in index order with std::complex arithmetic.
/// Cancellations that hold term by term (such as -(x z0) + x z0) come out as
/// exact zeros, which the blocked Eigen kernel does not guarantee.
OperatorMatrix sequential_product(const OperatorMatrix& a, const OperatorMatrix& b);

struct Composition {
  PolySymbol symbol;
};

/// f -> f(0) q^m.
struct PowerRankOne {
  CirclePolynomial q;
  std::size_t m = 0;
};

/// An operator given only by its N x N section.
struct Matrix {
  OperatorMatrix m;
};

struct HardyOperator {
  std::variant<Composition, PowerRankOne, Matrix> op;

  /// N x N section in the monomial basis. A Matrix operator only has its own
  /// size (Error(input) otherwise).
  OperatorMatrix section(std::size_t n) const;
};

/// Products stay symbolic where possible (C_a C_b = C_{b o a}, C_phi T = f(0)
/// (q o phi)^m); otherwise both factors are cut to the Matrix size. Norms are
/// exact for PowerRankOne and section operator norms otherwise.
struct HardyAlgebra {
  using element_type = HardyOperator;
  std::size_t order = 32;
  Tolerances tol;

  double norm(const HardyOperator& a) const;
  HardyOperator multiply(const HardyOperator& a, const HardyOperator& b) const;
};

struct ConstantCertificates {
  Annihilator<HardyOperator> left;   // C_phi T_L = 0
  Annihilator<HardyOperator> right;  // T_R C_phi = 0
};

/// Symbol phi = z0. T_L multiplies by (z - z0) on inputs of degree < n - 1
/// (last column zero); T_R drops a_0 and shifts the rest down. Throws
/// Error(invalid_symbol) for |z0| >= 1 and Error(input) for n < 2.
ConstantCertificates constant_symbol_certificates(cd z0, std::size_t n);

/// Keeps the coefficients with index = 1 mod k: T C_{z^k} = 0 and T z = z.
/// Throws Error(input) unless k >= 2 and n > k.
Annihilator<HardyOperator> monomial_right_annihilator(std::size_t k, std::size_t n);

/// Finite-dimensional range test: if sigma_min(T) <= eps_norm sigma_max(T),
/// returns S = e_1 f* with f a unit left singular vector for sigma_min, so
/// S T has norm sigma_min and ||S|| = 1. Returns none at full rank. Throws
/// Error(input) for a non-square or empty matrix.
std::optional<Annihilator<OperatorMatrix>> right_zero_divisor_finite(const OperatorMatrix& t,
                                                                     const Tolerances& tol = {});

struct RankProbe {
  std::size_t order = 0;
  double smallest_singular_value = 0.0;
  bool full_rank = false;  // sigma_min > eps_norm
};

struct HardyAnalysis {
  std::string symbol_class;  // constant | critical_at_zero | rotation | strict_interior | undetermined
  double sup_on_circle = 0.0;
  RankProbe rank;
  Verdict<HardyOperator> verdict;
  std::optional<Annihilator<HardyOperator>> left;
  std::optional<Annihilator<HardyOperator>> right;
};

/// Classification at section order n (n >= 3):
///   constant phi = z0: left and right zero divisor;
///   phi'(0) = 0: right zero divisor (coefficient-1 selector, or the
///     index = 1 mod k selector for phi = z^k), never a left one;
///   phi = lambda z, |lambda| = 1: invertible, inverse C_{conj(lambda) z};
///   sup < 1 - eps_norm: compact, hence TDZ with witnesses f -> f(0) z^{s n};
///   otherwise the TDZ question is left undetermined with a warning.
HardyAnalysis analyze_symbol(const PolySymbol& phi, std::size_t n, const Tolerances& tol = {});

CertificationReport certify(const PolySymbol& phi, const HardyAnalysis& analysis, const Tolerances& tol = {});

}  // namespace tdz::hardy
