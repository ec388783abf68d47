#include "tdz/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdz/errors.hpp"
#include "tdz/norms.hpp"

namespace tdz::hardy {

namespace {

using Coeffs = std::vector<cd>;

// Product of two coefficient lists truncated at n terms.
Coeffs truncated_mul(const Coeffs& a, const Coeffs& b, std::size_t n) {
  Coeffs out(std::min(n, a.size() + b.size() - 1), cd{});
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Coeffs truncated_power(const Coeffs& q, std::size_t m, std::size_t n) {
  Coeffs acc{1.0};
  for (std::size_t i = 0; i < m; ++i) acc = truncated_mul(acc, q, n);
  acc.resize(n, cd{});
  return acc;
}

Coeffs poly_coeffs(const CirclePolynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

Eigen::MatrixXcd zero_matrix(std::size_t n) {
  return Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

// Cap on quadrature points for the deepest witness product.
constexpr std::size_t kMaxQuadrature = std::size_t{1} << 20;

bool is_rotation(const PolySymbol& phi, const Tolerances& tol) {
  const auto c = phi.poly().coeffs();
  return c.size() == 2 && c[0] == cd{} && std::abs(std::abs(c[1]) - 1.0) <= tol.eps_norm;
}

// phi = c z^k with k >= 2.
std::optional<std::size_t> monomial_degree(const PolySymbol& phi) {
  const auto c = phi.poly().coeffs();
  if (c.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (c[i] != cd{}) return std::nullopt;
  }
  return c.size() - 1;
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<cd> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::input, "truncated series needs order N >= 1");
  for (const cd& a : coeffs_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw Error(ErrorKind::input, "series coefficients must be finite");
    }
  }
}

double TruncatedSeries::h2_norm() const {
  double s = 0.0;
  for (const cd& a : coeffs_) s += std::norm(a);
  return std::sqrt(s);
}

PolySymbol PolySymbol::make(const CirclePolynomial& poly, const Tolerances& tol) {
  tol.validate();
  std::vector<cd> c(poly.coeffs().begin(), poly.coeffs().end());
  for (cd& a : c) {
    if (std::abs(a) < tol.eps_zero) a = cd{};
  }
  CirclePolynomial cleaned(std::move(c));
  const double sup = disk::sup_norm_on_circle(cleaned, tol);
  if (sup > 1.0 + tol.eps_norm) {
    throw Error(ErrorKind::invalid_symbol,
                "symbol does not map the disk into itself: sup over the circle is " + std::to_string(sup));
  }
  if (cleaned.degree() == 0 && std::abs(cleaned.coeffs()[0]) >= 1.0) {
    throw Error(ErrorKind::invalid_symbol, "constant symbol must lie in the open disk");
  }
  return PolySymbol(std::move(cleaned), sup);
}

TruncatedSeries compose_series(const TruncatedSeries& f, const PolySymbol& phi, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::input, "composition order N must be >= 1");
  const Coeffs p = poly_coeffs(phi.poly());
  const auto& a = f.coeffs();
  Coeffs acc{a.back()};
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    acc = truncated_mul(acc, p, n);
    acc[0] += a[i];
  }
  acc.resize(n, cd{});
  return TruncatedSeries(std::move(acc));
}

OperatorMatrix composition_matrix(const PolySymbol& phi, std::size_t n, const Tolerances& tol,
                                  std::vector<std::string>* warnings) {
  if (n == 0) throw Error(ErrorKind::input, "composition order N must be >= 1");
  if (warnings != nullptr && phi.sup_on_circle() >= 1.0 - tol.eps_norm) {
    warnings->push_back("symbol reaches the unit circle; composition sections are poorly conditioned");
  }
  const Coeffs p = poly_coeffs(phi.poly());
  Eigen::MatrixXcd e = zero_matrix(n);
  Coeffs power{1.0};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < power.size() && i < n; ++i) {
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = power[i];
    }
    power = truncated_mul(power, p, n);
  }
  return OperatorMatrix(std::move(e));
}

CirclePolynomial compose_polynomials(const CirclePolynomial& outer, const CirclePolynomial& inner) {
  const auto a = outer.coeffs();
  CirclePolynomial acc({a.back()});
  for (std::size_t i = a.size() - 1; i-- > 0;) acc = acc * inner + CirclePolynomial({a[i]});
  return acc;
}

double power_h2_norm(const CirclePolynomial& q, std::size_t m) {
  if (m == 0) return 1.0;
  const std::size_t samples = std::max<std::size_t>(64, m * q.degree() + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
    sum += std::pow(std::abs(q(std::polar(1.0, theta))), 2.0 * static_cast<double>(m));
  }
  return std::sqrt(sum / static_cast<double>(samples));
}

OperatorMatrix sequential_product(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::input, "matrix product with mismatched inner dimensions");
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(b.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cd sum{};
      for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
    }
  }
  return OperatorMatrix(std::move(out));
}

OperatorMatrix HardyOperator::section(std::size_t n) const {
  return std::visit(
      [n](const auto& o) -> OperatorMatrix {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Composition>) {
          return composition_matrix(o.symbol, n);
        } else if constexpr (std::is_same_v<T, PowerRankOne>) {
          const Coeffs col = truncated_power(poly_coeffs(o.q), o.m, n);
          Eigen::MatrixXcd e = zero_matrix(n);
          for (std::size_t i = 0; i < n; ++i) e(static_cast<Eigen::Index>(i), 0) = col[i];
          return OperatorMatrix(std::move(e));
        } else {
          if (o.m.rows() != n || o.m.cols() != n) {
            throw Error(ErrorKind::input, "matrix operator has order " + std::to_string(o.m.rows()) +
                                              ", section of order " + std::to_string(n) + " requested");
          }
          return o.m;
        }
      },
      op);
}

double HardyAlgebra::norm(const HardyOperator& a) const {
  if (const auto* r = std::get_if<PowerRankOne>(&a.op)) return power_h2_norm(r->q, r->m);
  if (const auto* m = std::get_if<Matrix>(&a.op)) return operator_norm(m->m, tol);
  return operator_norm(a.section(order), tol);
}

HardyOperator HardyAlgebra::multiply(const HardyOperator& a, const HardyOperator& b) const {
  const auto* ma = std::get_if<Matrix>(&a.op);
  const auto* mb = std::get_if<Matrix>(&b.op);
  if (ma != nullptr || mb != nullptr) {
    const std::size_t n = ma != nullptr ? ma->m.rows() : mb->m.rows();
    return {Matrix{sequential_product(a.section(n), b.section(n))}};
  }
  const auto* ca = std::get_if<Composition>(&a.op);
  if (ca != nullptr) {
    if (const auto* cb = std::get_if<Composition>(&b.op)) {
      return {Composition{PolySymbol::make(compose_polynomials(cb->symbol.poly(), ca->symbol.poly()), tol)}};
    }
    const auto& r = std::get<PowerRankOne>(b.op);
    return {PowerRankOne{compose_polynomials(r.q, ca->symbol.poly()), r.m}};
  }
  throw Error(ErrorKind::unsupported_product, "product of a rank-one power operator on the left is not represented");
}

ConstantCertificates constant_symbol_certificates(cd z0, std::size_t n) {
  if (!(std::abs(z0) < 1.0)) throw Error(ErrorKind::invalid_symbol, "constant symbol must lie in the open disk");
  if (n < 2) throw Error(ErrorKind::input, "constant-symbol certificates need order N >= 2");
  Eigen::MatrixXcd tl = zero_matrix(n);
  Eigen::MatrixXcd tr = zero_matrix(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    tl(i, i) = -z0;
    tl(i + 1, i) = 1.0;
    tr(i, i + 1) = 1.0;
  }
  return {{Side::left, "T_L f = (z - z0) f on degree < N - 1", {Matrix{OperatorMatrix(std::move(tl))}}},
          {Side::right, "T_R f = sum a_{n+1} z^n", {Matrix{OperatorMatrix(std::move(tr))}}}};
}

Annihilator<HardyOperator> monomial_right_annihilator(std::size_t k, std::size_t n) {
  if (k < 2) throw Error(ErrorKind::input, "monomial annihilator needs k >= 2");
  if (n <= k) throw Error(ErrorKind::input, "monomial annihilator needs order N > k");
  Eigen::MatrixXcd t = zero_matrix(n);
  for (std::size_t i = 1; i < n; i += k) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return {Side::right, "T keeps coefficients with index = 1 mod " + std::to_string(k),
          {Matrix{OperatorMatrix(std::move(t))}}};
}

std::optional<Annihilator<OperatorMatrix>> right_zero_divisor_finite(const OperatorMatrix& t, const Tolerances& tol) {
  if (!t.is_square() || t.rows() == 0) throw Error(ErrorKind::input, "range test needs a nonempty square matrix");
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.dense(), Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const Eigen::Index last = sv.size() - 1;
  if (sv(last) > tol.eps_norm * sv(0)) return std::nullopt;
  Eigen::VectorXcd f = svd.matrixU().col(last);
  Eigen::Index peak = 0;
  f.cwiseAbs().maxCoeff(&peak);
  f *= std::conj(f(peak)) / std::abs(f(peak));
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(t.dense().rows(), t.dense().cols());
  s.row(0) = f.adjoint();
  return Annihilator<OperatorMatrix>{Side::right, "S x = <x, f> e_1 with f orthogonal to the range",
                                     OperatorMatrix(std::move(s))};
}

HardyAnalysis analyze_symbol(const PolySymbol& phi, std::size_t n, const Tolerances& tol) {
  tol.validate();
  if (n < 2) throw Error(ErrorKind::input, "section order N must be >= 2");
  HardyAnalysis out;
  out.sup_on_circle = phi.sup_on_circle();
  auto& v = out.verdict;
  const OperatorMatrix c = composition_matrix(phi, n, tol, &v.warnings);
  out.rank = {n, smallest_singular_value(c), false};
  out.rank.full_rank = out.rank.smallest_singular_value > tol.eps_norm;

  if (phi.is_constant()) {
    out.symbol_class = "constant";
    auto certs = constant_symbol_certificates(phi.value_at_zero(), n);
    v.left_zero_divisor = Tri::yes;
    v.right_zero_divisor = Tri::yes;
    v.tdz = true;
    v.certificate = certs.left;
    out.left = std::move(certs.left);
    out.right = std::move(certs.right);
    return out;
  }
  if (phi.derivative_at_zero() == cd{}) {
    out.symbol_class = "critical_at_zero";
    const auto k = monomial_degree(phi);
    if (k && n > *k) {
      out.right = monomial_right_annihilator(*k, n);
    } else {
      Eigen::MatrixXcd t = zero_matrix(n);
      t(1, 1) = 1.0;
      out.right = Annihilator<HardyOperator>{Side::right, "T g = g_1 z (phi'(0) = 0 kills the z coefficient)",
                                             {Matrix{OperatorMatrix(std::move(t))}}};
    }
    v.right_zero_divisor = Tri::yes;
    v.tdz = true;
    v.certificate = *out.right;
    return out;
  }
  if (is_rotation(phi, tol)) {
    out.symbol_class = "rotation";
    v.regular = true;
    v.right_zero_divisor = Tri::no;
    const cd lambda = phi.derivative_at_zero() / std::abs(phi.derivative_at_zero());
    v.certificate = RegularityBound<HardyOperator>{
        1.0, HardyOperator{Composition{PolySymbol::make(CirclePolynomial({0.0, std::conj(lambda)}), tol)}}};
    return out;
  }
  if (phi.sup_on_circle() < 1.0 - tol.eps_norm) {
    out.symbol_class = "strict_interior";
    v.right_zero_divisor = Tri::not_applicable;
    v.tdz = true;
    v.warnings.push_back("right zero divisor status is not decided for this symbol");
    // Stride so that sup^{s n_witness} <= eps_norm, which forces the decay rule.
    const double wanted = std::log(tol.eps_norm) /
                          (static_cast<double>(tol.n_witness) * std::log(phi.sup_on_circle()));
    std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(wanted)));
    const std::size_t cap = std::max<std::size_t>(1, kMaxQuadrature / (tol.n_witness * phi.poly().degree()));
    if (stride > cap) {
      stride = cap;
      v.warnings.push_back("witness stride capped; certification may not reach the decay threshold");
    }
    v.certificate = WitnessSequence<HardyOperator>{
        Side::left, "T_n f = f(0) z^{" + std::to_string(stride) + " n}",
        [stride](std::size_t k) { return HardyOperator{PowerRankOne{CirclePolynomial({0.0, 1.0}), stride * k}}; }};
    return out;
  }
  out.symbol_class = "undetermined";
  v.right_zero_divisor = Tri::not_applicable;
  v.warnings.push_back("symbol touches the unit circle and is not a rotation; TDZ status undetermined");
  return out;
}

CertificationReport certify(const PolySymbol& phi, const HardyAnalysis& analysis, const Tolerances& tol) {
  const auto& v = analysis.verdict;
  if (!v.certificate) return vacuous_report("no certificate: " + analysis.symbol_class);
  const std::size_t n = analysis.rank.order;
  const HardyAlgebra algebra{n, tol};
  const HardyOperator x{Composition{phi}};
  return std::visit(
      [&](const auto& cert) -> CertificationReport {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, WitnessSequence<HardyOperator>>) {
          return verify_tdz_certificate(algebra, x, cert, tol);
        } else if constexpr (std::is_same_v<T, Annihilator<HardyOperator>>) {
          return verify_annihilator(algebra, x, cert, tol);
        } else {
          const OperatorMatrix section = x.section(n);
          std::optional<double> defect;
          if (cert.inverse) {
            defect = operator_norm(section * cert.inverse->section(n) - OperatorMatrix::identity(n), tol);
          }
          return verify_regularity_bound(cert.lambda0, smallest_singular_value(section), defect, tol);
        }
      },
      *v.certificate);
}

}  // namespace tdz::hardy
