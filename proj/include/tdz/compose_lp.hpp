#pragma once

// Composition operators C_phi f = f o phi on l^p(N) for self-maps of N given
// by a finite prefix and a shift or divide tail.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tdz/certificate.hpp"
#include "tdz/harness.hpp"
#include "tdz/linf.hpp"
#include "tdz/operator_matrix.hpp"
#include "tdz/tolerances.hpp"

namespace tdz::lp {

using index_t = long long;

/// phi(n) = n + c beyond the prefix.
struct Shift {
  index_t c = 0;
};

/// phi(n) = ceil(n / k) beyond the prefix.
struct Divide {
  index_t k = 1;
};

using Tail = std::variant<Shift, Divide>;

class SelfMapN {
 public:
  /// prefix[i] = phi(i + 1). Throws Error(input) on a prefix value < 1, a
  /// divisor < 1 or a shift that would leave N.
  SelfMapN(std::vector<index_t> prefix, Tail tail);

  static SelfMapN identity() { return SelfMapN({}, Shift{0}); }
  static SelfMapN shift(index_t c, std::vector<index_t> prefix = {}) { return SelfMapN(std::move(prefix), Shift{c}); }
  static SelfMapN divide(index_t k, std::vector<index_t> prefix = {}) { return SelfMapN(std::move(prefix), Divide{k}); }

  const std::vector<index_t>& prefix() const noexcept { return prefix_; }
  const Tail& tail() const noexcept { return tail_; }
  index_t prefix_length() const noexcept { return static_cast<index_t>(prefix_.size()); }

  index_t operator()(index_t n) const;

  /// |phi^{-1}(m)|, exact.
  index_t preimage_count(index_t m) const;

  /// K: |c| for a shift, k for a divide tail.
  index_t tail_spread() const;

  /// Smallest value taken by the tail; every m >= this value is a tail image.
  index_t tail_image_start() const;

  bool is_identity() const;

 private:
  std::vector<index_t> prefix_;
  Tail tail_;
};

/// C_phi on l^p, p in [1, inf] (INFINITY allowed).
struct CompositionOperatorSpec {
  SelfMapN phi;
  double p = 2.0;

  void validate() const;
};

/// n -> |phi^{-1}(n)| as an eventually periodic sequence (cycle of length 1).
linf::MeasurableFn rn_derivative(const SelfMapN& phi);

/// sup_n |phi^{-1}(n)|.
index_t max_preimage_count(const SelfMapN& phi);

/// (sup_n |phi^{-1}(n)|)^{1/p}.
double composition_norm(const CompositionOperatorSpec& spec);

struct MapProperties {
  bool injective = false;
  bool surjective = false;
  bool invertible = false;
  std::optional<std::pair<index_t, index_t>> collision;  // a < b, phi(a) = phi(b)
  std::optional<index_t> missed_value;                   // smallest m without preimage
};

MapProperties map_properties(const SelfMapN& phi);

/// A bounded operator on l^p known through its finite sections. min_order is
/// the smallest section size on which products with C_phi are exact.
struct LpOperator {
  std::string description;
  std::function<OperatorMatrix(std::size_t)> section;
  std::size_t min_order = 1;
};

/// Elements compared through their N x N sections (Hilbert-space norm).
struct SectionAlgebra {
  using element_type = LpOperator;
  std::size_t order = 32;
  Tolerances tol;

  double norm(const LpOperator& a) const;
  LpOperator multiply(const LpOperator& a, const LpOperator& b) const;
};

LpOperator composition_operator(const SelfMapN& phi);

/// T(f) = f(1) chi_m for a missed value m: C_phi T = 0.
Annihilator<LpOperator> left_annihilator(const SelfMapN& phi, index_t missed);

/// T(g) = (g(a) - g(b)) chi_1 for a collision (a, b): T C_phi = 0.
Annihilator<LpOperator> right_annihilator(const SelfMapN& phi, index_t a, index_t b);

struct DivisorStatus {
  MapProperties properties;
  Verdict<LpOperator> verdict;  // certificate: left annihilator, else right, else regularity
  std::optional<Annihilator<LpOperator>> left;
  std::optional<Annihilator<LpOperator>> right;
  std::optional<SelfMapN> inverse;  // phi^{-1} when phi is a bijection
};

DivisorStatus divisor_status(const CompositionOperatorSpec& spec, const Tolerances& tol = {});

/// 0/1 matrix with E[n, phi(n)] = 1 whenever phi(n) <= N (1-based). p must be 2.
OperatorMatrix finite_section_composition(const CompositionOperatorSpec& spec, std::size_t n);

/// Largest k such that every index i <= k has all of its preimages in 1..N.
/// On that block the section identity C*C = M_RN holds exactly.
std::size_t stabilized_block(const SelfMapN& phi, std::size_t n);

/// Smallest N accepted by adjoint_rn_check: prefix length + K + 1.
std::size_t minimal_check_order(const SelfMapN& phi);

struct AdjointRnReport {
  std::size_t n = 0;
  std::size_t block = 0;
  double max_abs_diff = 0.0;  // over the stabilized block of C*C - M_RN
  bool identity_holds = false;
  double formula_norm = 0.0;  // composition_norm at p = 2
  double section_norm = 0.0;  // operator_norm of the N x N section
  bool norm_agrees = false;
  bool rn_route_tdz = false;  // 0 in the essential range of the RN derivative
  bool collision = false;     // phi not injective
  bool route_tdz = false;     // rn_route_tdz || collision
  bool divisor_tdz = false;   // divisor_status verdict
  bool routes_agree = false;
};

/// Throws Error(input) when p != 2 or N is below minimal_check_order.
AdjointRnReport adjoint_rn_check(const CompositionOperatorSpec& spec, std::size_t n, const Tolerances& tol = {});

/// outer o inner, when it stays in the representation class: shift o shift,
/// divide o divide, and either tail against an identity tail. Otherwise
/// throws Error(composition_unrepresentable).
SelfMapN compose(const SelfMapN& outer, const SelfMapN& inner);

/// Runs the harness on the verdict's certificate using sections of size
/// max(order, certificate min_order).
CertificationReport certify(const CompositionOperatorSpec& spec, const DivisorStatus& status,
                            const Tolerances& tol = {}, std::size_t order = 32);

}  // namespace tdz::lp
