#include "tdz/compose_lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tdz/errors.hpp"
#include "tdz/mult.hpp"
#include "tdz/norms.hpp"

namespace tdz::lp {

namespace {

index_t ceil_div(index_t n, index_t k) { return (n + k - 1) / k; }

// Divide{1} behaves exactly like Shift{0}.
Tail normalized(const Tail& t) {
  if (const auto* d = std::get_if<Divide>(&t); d != nullptr && d->k == 1) return Shift{0};
  return t;
}

OperatorMatrix composition_section(const SelfMapN& phi, std::size_t n) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t row = 1; row <= n; ++row) {
    const index_t target = phi(static_cast<index_t>(row));
    if (target <= static_cast<index_t>(n)) e(static_cast<Eigen::Index>(row - 1), static_cast<Eigen::Index>(target - 1)) = 1.0;
  }
  return OperatorMatrix(std::move(e));
}

// Largest preimage of m (0 when m has none).
index_t last_preimage(const SelfMapN& phi, index_t m) {
  index_t last = 0;
  const auto& pre = phi.prefix();
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (pre[i] == m) last = static_cast<index_t>(i) + 1;
  }
  const index_t p = phi.prefix_length();
  if (const auto* s = std::get_if<Shift>(&phi.tail())) {
    if (m - s->c > p) last = m - s->c;
  } else {
    const index_t k = std::get<Divide>(phi.tail()).k;
    if (m * k > p) last = m * k;
  }
  return last;
}

}  // namespace

SelfMapN::SelfMapN(std::vector<index_t> prefix, Tail tail) : prefix_(std::move(prefix)), tail_(tail) {
  for (index_t v : prefix_) {
    if (v < 1) throw Error(ErrorKind::input, "prefix values must be positive integers");
  }
  if (const auto* s = std::get_if<Shift>(&tail_)) {
    if (prefix_length() + 1 + s->c < 1) {
      throw Error(ErrorKind::input, "shift tail maps index " + std::to_string(prefix_length() + 1) + " outside N");
    }
  } else if (std::get<Divide>(tail_).k < 1) {
    throw Error(ErrorKind::input, "divide tail needs k >= 1");
  }
}

index_t SelfMapN::operator()(index_t n) const {
  if (n < 1) throw Error(ErrorKind::input, "self-maps of N are evaluated at n >= 1");
  if (n <= prefix_length()) return prefix_[static_cast<std::size_t>(n - 1)];
  if (const auto* s = std::get_if<Shift>(&tail_)) return n + s->c;
  return ceil_div(n, std::get<Divide>(tail_).k);
}

index_t SelfMapN::preimage_count(index_t m) const {
  if (m < 1) return 0;
  index_t count = static_cast<index_t>(std::count(prefix_.begin(), prefix_.end(), m));
  const index_t p = prefix_length();
  if (const auto* s = std::get_if<Shift>(&tail_)) {
    if (m - s->c > p) ++count;
  } else {
    const index_t k = std::get<Divide>(tail_).k;
    count += std::max<index_t>(0, m * k - std::max(p, (m - 1) * k));
  }
  return count;
}

index_t SelfMapN::tail_spread() const {
  if (const auto* s = std::get_if<Shift>(&tail_)) return s->c < 0 ? -s->c : s->c;
  return std::get<Divide>(tail_).k;
}

index_t SelfMapN::tail_image_start() const {
  if (const auto* s = std::get_if<Shift>(&tail_)) return prefix_length() + 1 + s->c;
  return ceil_div(prefix_length() + 1, std::get<Divide>(tail_).k);
}

bool SelfMapN::is_identity() const {
  const Tail t = normalized(tail_);
  const auto* s = std::get_if<Shift>(&t);
  if (s == nullptr || s->c != 0) return false;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (prefix_[i] != static_cast<index_t>(i) + 1) return false;
  }
  return true;
}

void CompositionOperatorSpec::validate() const {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::input, "exponent p must lie in [1, inf]");
}

linf::MeasurableFn rn_derivative(const SelfMapN& phi) {
  const auto& pre = phi.prefix();
  index_t bound = pre.empty() ? 0 : *std::max_element(pre.begin(), pre.end());
  const index_t p = phi.prefix_length();
  index_t tail_value = 1;
  if (const auto* s = std::get_if<Shift>(&phi.tail())) {
    bound = std::max(bound, p + s->c);
  } else {
    tail_value = std::get<Divide>(phi.tail()).k;
    bound = std::max(bound, ceil_div(p, tail_value) + 1);
  }
  // Beyond `bound` every value has its full tail preimage set and no prefix preimage.
  std::vector<cd> prefix(static_cast<std::size_t>(bound));
  for (index_t m = 1; m <= bound; ++m) prefix[static_cast<std::size_t>(m - 1)] = static_cast<double>(phi.preimage_count(m));
  return linf::MeasurableFn::periodic(std::move(prefix), {static_cast<double>(tail_value)});
}

index_t max_preimage_count(const SelfMapN& phi) {
  return static_cast<index_t>(std::lround(linf::essential_stats(rn_derivative(phi)).ess_sup));
}

double composition_norm(const CompositionOperatorSpec& spec) {
  spec.validate();
  return std::pow(static_cast<double>(max_preimage_count(spec.phi)), 1.0 / spec.p);
}

MapProperties map_properties(const SelfMapN& phi) {
  MapProperties r;
  const auto& pre = phi.prefix();
  const index_t p = phi.prefix_length();
  const index_t start = phi.tail_image_start();

  // prefix against prefix
  for (index_t b = 2; b <= p && !r.collision; ++b) {
    for (index_t a = 1; a < b; ++a) {
      if (pre[static_cast<std::size_t>(a - 1)] == pre[static_cast<std::size_t>(b - 1)]) {
        r.collision = {a, b};
        break;
      }
    }
  }
  // prefix against tail
  for (index_t a = 1; a <= p && !r.collision; ++a) {
    const index_t v = pre[static_cast<std::size_t>(a - 1)];
    if (v < start) continue;
    if (const auto* s = std::get_if<Shift>(&phi.tail())) {
      r.collision = {a, v - s->c};
    } else {
      const index_t k = std::get<Divide>(phi.tail()).k;
      r.collision = {a, std::max(p + 1, (v - 1) * k + 1)};
    }
  }
  // tail against tail
  if (const auto* d = std::get_if<Divide>(&phi.tail()); d != nullptr && !r.collision && d->k >= 2) {
    const index_t first = std::max(p, (start - 1) * d->k) + 1;
    if (start * d->k - first + 1 >= 2) {
      r.collision = {first, first + 1};
    } else {
      r.collision = {start * d->k + 1, start * d->k + 2};
    }
  }

  for (index_t m = 1; m < start; ++m) {
    if (std::find(pre.begin(), pre.end(), m) == pre.end()) {
      r.missed_value = m;
      break;
    }
  }
  r.injective = !r.collision.has_value();
  r.surjective = !r.missed_value.has_value();
  r.invertible = r.injective && r.surjective;
  return r;
}

double SectionAlgebra::norm(const LpOperator& a) const {
  return operator_norm(a.section(std::max(order, a.min_order)), tol);
}

LpOperator SectionAlgebra::multiply(const LpOperator& a, const LpOperator& b) const {
  return {"(" + a.description + ")(" + b.description + ")",
          [a, b](std::size_t n) { return a.section(n) * b.section(n); }, std::max(a.min_order, b.min_order)};
}

LpOperator composition_operator(const SelfMapN& phi) {
  return {"C_phi", [phi](std::size_t n) { return composition_section(phi, n); }, 1};
}

Annihilator<LpOperator> left_annihilator(const SelfMapN& phi, index_t missed) {
  if (phi.preimage_count(missed) != 0) throw Error(ErrorKind::input, "left annihilator needs a value without preimage");
  const auto m = static_cast<std::size_t>(missed);
  LpOperator t{"T(f) = f(1) chi_" + std::to_string(missed),
               [m](std::size_t n) {
                 Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
                 if (m <= n) e(static_cast<Eigen::Index>(m - 1), 0) = 1.0;
                 return OperatorMatrix(std::move(e));
               },
               m};
  return {Side::left, "C_phi T = 0 since phi misses " + std::to_string(missed) + "; " + t.description, std::move(t)};
}

Annihilator<LpOperator> right_annihilator(const SelfMapN& phi, index_t a, index_t b) {
  if (a == b || phi(a) != phi(b)) throw Error(ErrorKind::input, "right annihilator needs a collision pair");
  const auto ia = static_cast<std::size_t>(a);
  const auto ib = static_cast<std::size_t>(b);
  LpOperator t{"T(g) = (g(" + std::to_string(a) + ") - g(" + std::to_string(b) + ")) chi_1",
               [ia, ib](std::size_t n) {
                 Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
                 if (ia <= n) e(0, static_cast<Eigen::Index>(ia - 1)) = 1.0;
                 if (ib <= n) e(0, static_cast<Eigen::Index>(ib - 1)) = -1.0;
                 return OperatorMatrix(std::move(e));
               },
               std::max({ia, ib, static_cast<std::size_t>(phi(a))})};
  return {Side::right,
          "T C_phi = 0 since phi(" + std::to_string(a) + ") = phi(" + std::to_string(b) + "); " + t.description,
          std::move(t)};
}

DivisorStatus divisor_status(const CompositionOperatorSpec& spec, const Tolerances& tol) {
  spec.validate();
  tol.validate();
  DivisorStatus s{map_properties(spec.phi), {}, std::nullopt, std::nullopt, std::nullopt};
  Verdict<LpOperator>& v = s.verdict;
  v.left_zero_divisor = s.properties.surjective ? Tri::no : Tri::yes;
  v.right_zero_divisor = s.properties.injective ? Tri::no : Tri::yes;
  v.tdz = !s.properties.invertible;
  v.regular = s.properties.invertible;
  if (s.properties.missed_value) s.left = left_annihilator(spec.phi, *s.properties.missed_value);
  if (s.properties.collision) s.right = right_annihilator(spec.phi, s.properties.collision->first, s.properties.collision->second);
  if (s.left) {
    v.certificate = *s.left;
  } else if (s.right) {
    v.certificate = *s.right;
  } else {
    // A bijection of this form permutes 1..P and fixes everything beyond.
    const auto& pre = spec.phi.prefix();
    std::vector<index_t> inv(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) inv[static_cast<std::size_t>(pre[i] - 1)] = static_cast<index_t>(i) + 1;
    s.inverse = SelfMapN(std::move(inv), Shift{0});
    const double inverse_norm = composition_norm({*s.inverse, spec.p});
    v.certificate = RegularityBound<LpOperator>{1.0 / inverse_norm, composition_operator(*s.inverse)};
  }
  return s;
}

OperatorMatrix finite_section_composition(const CompositionOperatorSpec& spec, std::size_t n) {
  spec.validate();
  if (spec.p != 2.0) throw Error(ErrorKind::input, "finite sections are only defined for p = 2");
  if (n == 0) throw Error(ErrorKind::input, "section size must be positive");
  return composition_section(spec.phi, n);
}

std::size_t stabilized_block(const SelfMapN& phi, std::size_t n) {
  const auto cap = static_cast<index_t>(n);
  const index_t excluded = cap - phi.tail_spread();
  index_t block = 0;
  while (block < excluded && last_preimage(phi, block + 1) <= cap) ++block;
  return static_cast<std::size_t>(std::max<index_t>(block, 0));
}

std::size_t minimal_check_order(const SelfMapN& phi) {
  return static_cast<std::size_t>(phi.prefix_length() + phi.tail_spread() + 1);
}

AdjointRnReport adjoint_rn_check(const CompositionOperatorSpec& spec, std::size_t n, const Tolerances& tol) {
  tol.validate();
  const std::size_t minimal = minimal_check_order(spec.phi);
  if (n < minimal) {
    throw Error(ErrorKind::input, "section size " + std::to_string(n) + " is too small; the minimal N is " +
                                      std::to_string(minimal));
  }
  AdjointRnReport r;
  r.n = n;
  const OperatorMatrix c = finite_section_composition(spec, n);
  const linf::MeasurableFn rn = rn_derivative(spec.phi);
  const OperatorMatrix d = mult::finite_section_mult({rn, 2.0}, n);
  const OperatorMatrix gram = c.adjoint() * c;
  r.block = stabilized_block(spec.phi, n);
  const auto b = static_cast<Eigen::Index>(r.block);
  r.max_abs_diff = b == 0 ? 0.0 : (gram.dense().topLeftCorner(b, b) - d.dense().topLeftCorner(b, b)).cwiseAbs().maxCoeff();
  r.identity_holds = r.block > 0 && r.max_abs_diff <= tol.eps_zero;

  r.formula_norm = composition_norm(spec);
  r.section_norm = operator_norm(c, tol);
  r.norm_agrees = std::abs(r.formula_norm - r.section_norm) <= tol.eps_norm * r.formula_norm;

  const MapProperties props = map_properties(spec.phi);
  r.rn_route_tdz = linf::decide_tdz_linf(rn, tol).tdz;
  r.collision = !props.injective;
  r.route_tdz = r.rn_route_tdz || r.collision;
  r.divisor_tdz = divisor_status(spec, tol).verdict.tdz;
  r.routes_agree = r.route_tdz == r.divisor_tdz;
  return r;
}

SelfMapN compose(const SelfMapN& outer, const SelfMapN& inner) {
  if (outer.is_identity()) return inner;
  if (inner.is_identity()) return outer;
  const Tail to = normalized(outer.tail());
  const Tail ti = normalized(inner.tail());
  const index_t p_outer = outer.prefix_length();
  const index_t p_inner = inner.prefix_length();
  const auto* so = std::get_if<Shift>(&to);
  const auto* si = std::get_if<Shift>(&ti);
  const auto* d_outer = std::get_if<Divide>(&to);
  const auto* d_inner = std::get_if<Divide>(&ti);

  // Past `last`, inner(n) lies beyond the outer prefix and both tails apply.
  index_t last = 0;
  Tail tail = Shift{0};
  if (so != nullptr && si != nullptr) {
    last = std::max(p_inner, p_outer - si->c);
    tail = Shift{so->c + si->c};
  } else if (d_outer != nullptr && d_inner != nullptr) {
    last = std::max(p_inner, p_outer * d_inner->k);
    tail = Divide{d_outer->k * d_inner->k};
  } else if (d_outer != nullptr && si != nullptr && si->c == 0) {
    last = std::max(p_inner, p_outer);
    tail = *d_outer;
  } else if (so != nullptr && so->c == 0 && d_inner != nullptr) {
    last = std::max(p_inner, p_outer * d_inner->k);
    tail = *d_inner;
  } else {
    throw Error(ErrorKind::composition_unrepresentable,
                "composing a shift tail with a divide tail leaves the prefix-plus-tail class");
  }
  last = std::max<index_t>(last, 0);
  std::vector<index_t> prefix(static_cast<std::size_t>(last));
  for (index_t n = 1; n <= last; ++n) prefix[static_cast<std::size_t>(n - 1)] = outer(inner(n));
  return SelfMapN(std::move(prefix), tail);
}

CertificationReport certify(const CompositionOperatorSpec& spec, const DivisorStatus& status, const Tolerances& tol,
                            std::size_t order) {
  spec.validate();
  const auto& verdict = status.verdict;
  if (!verdict.certificate) return vacuous_report("verdict carries no certificate");
  const LpOperator c = composition_operator(spec.phi);
  return std::visit(
      [&](const auto& cert) -> CertificationReport {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, Annihilator<LpOperator>>) {
          const SectionAlgebra algebra{std::max(order, cert.element.min_order), tol};
          return verify_annihilator(algebra, c, cert, tol);
        } else if constexpr (std::is_same_v<T, RegularityBound<LpOperator>>) {
          const std::size_t n = std::max(order, static_cast<std::size_t>(spec.phi.prefix_length()) + 1);
          const OperatorMatrix section = c.section(n);
          std::optional<double> defect;
          if (cert.inverse) defect = operator_norm(section * cert.inverse->section(n) - OperatorMatrix::identity(n), tol);
          return verify_regularity_bound(cert.lambda0, smallest_singular_value(section), defect, tol);
        } else {
          return verify_tdz_certificate(SectionAlgebra{order, tol}, c, cert, tol);
        }
      },
      *verdict.certificate);
}

}  // namespace tdz::lp
