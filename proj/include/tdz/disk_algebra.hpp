#pragma once

// Polynomial elements of the disk algebra A(D): continuous on the closed
// unit disk, analytic inside, normed by the sup over the unit circle T.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tdz/certificate.hpp"
#include "tdz/harness.hpp"
#include "tdz/tolerances.hpp"

namespace tdz::disk {

using cd = std::complex<double>;

/// Complex polynomial a_0 + a_1 z + ... + a_d z^d, constant term first.
class CirclePolynomial {
 public:
  /// Drops exactly-zero trailing coefficients (keeps one coefficient for the
  /// zero polynomial). Throws Error(input) on an empty or non-finite list.
  explicit CirclePolynomial(std::vector<cd> coeffs);

  /// Input normalization: trailing coefficients with modulus below eps_zero
  /// are trimmed as well.
  static CirclePolynomial normalized(std::vector<cd> coeffs, double eps_zero);
  static CirclePolynomial from_roots(std::span<const cd> roots, cd leading = 1.0);

  std::span<const cd> coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cd{}; }

  cd operator()(cd z) const;
  CirclePolynomial derivative() const;

  friend CirclePolynomial operator*(const CirclePolynomial& a, const CirclePolynomial& b);
  friend CirclePolynomial operator+(const CirclePolynomial& a, const CirclePolynomial& b);
  friend CirclePolynomial operator-(const CirclePolynomial& a, const CirclePolynomial& b);
  friend CirclePolynomial operator*(cd s, const CirclePolynomial& a);

 private:
  std::vector<cd> coeffs_;
};

struct CircleExtremum {
  double value = 0.0;  // |p| at the extremum
  double angle = 0.0;  // theta in [0, 2 pi)
};

/// Number of equispaced samples used by the circle scans. |p|^2 is a
/// trigonometric polynomial of degree d, so Bernstein's inequality bounds the
/// loss of a grid with spacing h at the maximum by d^2 h^2 / 8 (relative, on
/// |p|^2); the count keeps that below eps_norm.
std::size_t circle_grid_size(std::size_t degree, double eps_norm);

/// max over theta of |p(e^{i theta})|: grid scan plus golden-section
/// refinement around the best sample.
double sup_norm_on_circle(const CirclePolynomial& p, const Tolerances& tol = {});
CircleExtremum max_on_circle(const CirclePolynomial& p, const Tolerances& tol = {});

/// min over theta of |p(e^{i theta})|: grid scan plus golden-section
/// refinement at the lowest grid-local minima. grid_factor scales the sample
/// count (used for independent re-estimates).
CircleExtremum min_on_circle(const CirclePolynomial& p, const Tolerances& tol = {}, std::size_t grid_factor = 1);

/// All complex roots: eigenvalues of the companion matrix, then Newton
/// polishing against p. Throws Error(numeric) if the eigensolver fails.
std::vector<cd> polynomial_roots(const CirclePolynomial& p);

struct CircleZeroSet {
  std::vector<cd> zeros;     // unimodular, sorted by angle in [0, 2 pi)
  double residual_min = 0.0;  // grid estimate of min over T of |p|
  double residual_angle = 0.0;
  double sup_norm = 0.0;
  std::vector<cd> roots;  // every root found, for interior/exterior tests
  std::vector<std::string> warnings;
};

/// Roots within eps_circle of T. The grid minimum is the arbiter: the zero set
/// is nonempty iff residual_min <= eps_norm * ||p||; when the root finder
/// disagrees, the grid argmin is used (or the roots dropped) and a warning is
/// recorded.
CircleZeroSet circle_zeros(const CirclePolynomial& p, const Tolerances& tol = {});

/// TDZ iff p vanishes somewhere on T. Throws Error(degenerate_input) for the
/// zero polynomial.
Verdict<CirclePolynomial> decide_tdz_disk(const CirclePolynomial& p, const Tolerances& tol = {});

/// ((1 + conj(z0) z) / 2)^n. Sup norm 1, attained at z0.
CirclePolynomial peak_witness(cd z0, std::size_t n, const Tolerances& tol = {});

/// Synthetic division by (z - z0). Throws Error(not_a_root) when the discarded
/// remainder exceeds 10 eps_norm ||p||.
CirclePolynomial factor_out_root(const CirclePolynomial& p, cd z0, const Tolerances& tol = {});

struct DiskAlgebra {
  using element_type = CirclePolynomial;
  Tolerances tol;

  double norm(const CirclePolynomial& p) const { return sup_norm_on_circle(p, tol); }
  CirclePolynomial multiply(const CirclePolynomial& a, const CirclePolynomial& b) const { return a * b; }
};

/// Runs the harness appropriate to the verdict's certificate.
CertificationReport certify(const CirclePolynomial& p, const Verdict<CirclePolynomial>& verdict,
                            const Tolerances& tol = {});

}  // namespace tdz::disk
