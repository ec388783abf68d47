#include "tdz/mult.hpp"

#include <cmath>

#include "tdz/errors.hpp"
#include "tdz/norms.hpp"

namespace tdz::mult {

namespace {

Verdict<MultOperator> lift(const Verdict<linf::MeasurableFn>& v) {
  Verdict<MultOperator> out;
  out.left_zero_divisor = v.left_zero_divisor;
  out.right_zero_divisor = v.right_zero_divisor;
  out.tdz = v.tdz;
  out.regular = v.regular;
  out.warnings = v.warnings;
  if (!v.certificate) return out;
  std::visit(
      [&](const auto& cert) {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, WitnessSequence<linf::MeasurableFn>>) {
          auto gen = cert.generator;
          out.certificate = WitnessSequence<MultOperator>{
              cert.side, "T_n = M_{chi_{E_n}}, E_n = {x : |h(x)| < 1/n}",
              [gen](std::size_t n) { return MultOperator{gen(n)}; }};
        } else if constexpr (std::is_same_v<T, Annihilator<linf::MeasurableFn>>) {
          out.certificate = Annihilator<MultOperator>{cert.side, "M_g with g = indicator of {x : h(x) = 0}",
                                                      MultOperator{cert.element}};
        } else {
          RegularityBound<MultOperator> bound{cert.lambda0, std::nullopt};
          if (cert.inverse) bound.inverse = MultOperator{*cert.inverse};
          out.certificate = bound;
        }
      },
      *v.certificate);
  return out;
}

// Atoms or prefix plus one cycle: enough indices to see every value.
std::size_t covering_length(const linf::MeasurableFn& h) {
  std::size_t n = h.prefix_length();
  if (const auto* ep = std::get_if<linf::EventuallyPeriodic>(&h.representation())) n += ep->cycle.size();
  return std::max<std::size_t>(n, 1);
}

OperatorMatrix diagonal_section(const linf::MeasurableFn& h, std::size_t n) {
  std::vector<cd> d(n);
  for (std::size_t i = 1; i <= n; ++i) d[i - 1] = h(i);
  return OperatorMatrix::diagonal(d);
}

}  // namespace

void MultOperatorSpec::validate() const {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::input, "exponent p must lie in [1, inf]");
}

Verdict<MultOperator> decide_tdz_mult(const MultOperatorSpec& op, const Tolerances& tol) {
  op.validate();
  return lift(linf::decide_tdz_linf(op.h, tol));
}

Verdict<MultOperator> decide_zero_divisor_mult(const MultOperatorSpec& op, const Tolerances& tol) {
  op.validate();
  Verdict<MultOperator> v = lift(linf::decide_zero_divisor_linf(op.h, tol));
  // The eigenvalue route must agree with the attained-zero route.
  const bool point = linf::spectrum_mult(op.h, tol).zero_class == linf::ZeroClass::point_spectrum;
  if (point != v.zero_divisor()) {
    throw Error(ErrorKind::numeric, "point-spectrum and attained-zero tests disagree");
  }
  return v;
}

MultAnalysis analyze_mult(const MultOperatorSpec& op, const Tolerances& tol) {
  op.validate();
  MultAnalysis a;
  a.spectrum = linf::spectrum_mult(op.h, tol);
  const Verdict<MultOperator> zd = decide_zero_divisor_mult(op, tol);
  a.verdict = decide_tdz_mult(op, tol);
  if (zd.certificate) a.verdict.certificate = zd.certificate;
  return a;
}

OperatorMatrix finite_section_mult(const MultOperatorSpec& op, std::size_t n) {
  op.validate();
  if (op.p != 2.0) throw Error(ErrorKind::input, "finite sections are only defined for p = 2");
  if (n == 0) throw Error(ErrorKind::input, "section size must be positive");
  if (!op.h.on_counting_measure() && n != op.h.prefix_length()) {
    throw Error(ErrorKind::input, "on a finite atom space the section size must equal the atom count (" +
                                      std::to_string(op.h.prefix_length()) + ")");
  }
  return diagonal_section(op.h, n);
}

CertificationReport certify(const MultOperatorSpec& op, const Verdict<MultOperator>& verdict, const Tolerances& tol) {
  op.validate();
  if (!verdict.certificate) return vacuous_report("verdict carries no certificate");
  const MultAlgebra algebra{tol};
  const MultOperator m{op.h};
  return std::visit(
      [&](const auto& cert) -> CertificationReport {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, WitnessSequence<MultOperator>>) {
          return verify_tdz_certificate(algebra, m, cert, tol);
        } else if constexpr (std::is_same_v<T, Annihilator<MultOperator>>) {
          return verify_annihilator(algebra, m, cert, tol);
        } else {
          // Independent route: singular values of the diagonal section.
          const std::size_t n = covering_length(op.h);
          const OperatorMatrix section = diagonal_section(op.h, n);
          std::optional<double> defect;
          if (cert.inverse) {
            const OperatorMatrix product = section * diagonal_section(cert.inverse->symbol, n);
            defect = operator_norm(product - OperatorMatrix::identity(n), tol);
          }
          return verify_regularity_bound(cert.lambda0, smallest_singular_value(section), defect, tol);
        }
      },
      *verdict.certificate);
}

}  // namespace tdz::mult
