#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "tdz/certificate.hpp"
#include "tdz/errors.hpp"
#include "tdz/operator_matrix.hpp"
#include "tdz/tolerances.hpp"

namespace tdz {

/// A Banach algebra as seen by the certification harness: it can measure an
/// element and multiply two of them.
template <class A>
concept NormedAlgebra = requires(const A& algebra, const typename A::element_type& x) {
  { algebra.norm(x) } -> std::convertible_to<double>;
  { algebra.multiply(x, x) } -> std::same_as<typename A::element_type>;
};

struct WitnessSample {
  std::size_t n = 0;
  double witness_norm = 0.0;
  double product_norm = 0.0;
};

struct CertificationReport {
  bool passes = false;
  std::optional<Side> side;
  std::vector<WitnessSample> samples;
  std::string criterion;
};

nlohmann::json to_json(const CertificationReport& report);

/// Decision rule applied to witness samples 1..n_witness:
///   every witness norm lies in [1 - eps_norm, 1 + eps_norm],
///   the last product norm is below max(eps_norm, first product norm / 2),
///   and the 3-term moving average of product norms never increases by more
///   than eps_norm.
/// The decay requirement is a convention; nothing in the theory fixes a rate.
bool witness_decay_passes(std::span<const WitnessSample> samples, const Tolerances& tol);

std::string witness_decay_criterion();

/// Evaluates witnesses x_1..x_{n_witness} and the products x*x_n (side left)
/// or x_n*x (side right).
template <NormedAlgebra A>
CertificationReport verify_tdz_certificate(const A& algebra, const typename A::element_type& x,
                                           const WitnessSequence<typename A::element_type>& cert,
                                           const Tolerances& tol) {
  tol.validate();
  if (!cert.generator) {
    throw Error(ErrorKind::certificate_malformed, "witness sequence has no generator");
  }
  CertificationReport report;
  report.side = cert.side;
  report.criterion = witness_decay_criterion() + "; rule: " + cert.rule;
  report.samples.reserve(tol.n_witness);
  for (std::size_t n = 1; n <= tol.n_witness; ++n) {
    std::optional<typename A::element_type> witness;
    try {
      witness.emplace(cert.generator(n));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::certificate_malformed,
                  "witness generator failed at n=" + std::to_string(n) + ": " + e.what());
    }
    WitnessSample sample{n, algebra.norm(*witness), 0.0};
    const auto product = cert.side == Side::left ? algebra.multiply(x, *witness)
                                                 : algebra.multiply(*witness, x);
    sample.product_norm = algebra.norm(product);
    if (!std::isfinite(sample.witness_norm) || !std::isfinite(sample.product_norm)) {
      throw Error(ErrorKind::numeric, "norm oracle returned a non-finite value at n=" + std::to_string(n));
    }
    report.samples.push_back(sample);
  }
  report.passes = witness_decay_passes(report.samples, tol);
  return report;
}

/// Checks that y is nonzero (norm above eps_zero) and the product vanishes
/// (norm at most eps_zero).
template <NormedAlgebra A>
CertificationReport verify_annihilator(const A& algebra, const typename A::element_type& x,
                                       const Annihilator<typename A::element_type>& cert,
                                       const Tolerances& tol) {
  tol.validate();
  const double y_norm = algebra.norm(cert.element);
  const auto product = cert.side == Side::left ? algebra.multiply(x, cert.element)
                                               : algebra.multiply(cert.element, x);
  const double p_norm = algebra.norm(product);
  if (!std::isfinite(y_norm) || !std::isfinite(p_norm)) {
    throw Error(ErrorKind::numeric, "norm oracle returned a non-finite value for the annihilator");
  }
  CertificationReport report;
  report.side = cert.side;
  report.samples.push_back({1, y_norm, p_norm});
  report.passes = y_norm > tol.eps_zero && p_norm <= tol.eps_zero;
  report.criterion = "annihilator: ||y|| > eps_zero and ||product|| <= eps_zero; " + cert.description;
  return report;
}

/// lambda0 > 0 and an independent min-modulus estimate >= lambda0 - eps_norm.
/// inverse_defect, when given, is ||x*inverse - 1|| and must be <= eps_norm.
CertificationReport verify_regularity_bound(double lambda0, double min_modulus_estimate,
                                            std::optional<double> inverse_defect, const Tolerances& tol);

/// Report for verdicts that carry no certificate (nothing to check).
CertificationReport vacuous_report(const std::string& reason);

struct StarInequalityEntry {
  double product_norm = 0.0;          // ||T T_n||
  double star_product_norm = 0.0;     // ||T* T T_n||
  double witness_norm = 0.0;          // ||T_n||
  double adjoint_product_norm = 0.0;  // ||(T T_n)*||
  bool holds = false;
};

struct StarInequalityReport {
  bool holds = false;
  std::vector<StarInequalityEntry> entries;
};

/// For each witness T_n checks ||T T_n||^2 <= ||T* T T_n|| ||T_n|| + eps_norm
/// and ||(T T_n)*|| = ||T T_n|| within eps_norm.
StarInequalityReport star_tdz_inequality_check(const OperatorMatrix& t, std::span<const OperatorMatrix> witnesses,
                                               const Tolerances& tol);

}  // namespace tdz
