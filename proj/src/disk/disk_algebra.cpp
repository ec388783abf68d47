#include "tdz/disk_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "tdz/errors.hpp"

namespace tdz::disk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGoldenIterations = 90;
constexpr int kNewtonSteps = 30;

void trim_exact(std::vector<cd>& c) {
  while (c.size() > 1 && c.back() == cd{}) c.pop_back();
}

double wrap_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  return theta < 0.0 ? theta + kTwoPi : theta;
}

double modulus_squared(const CirclePolynomial& p, double theta) { return std::norm(p(std::polar(1.0, theta))); }

// Minimizes f on [a, b]; returns (argmin, min).
template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kGoldenIterations && b - a > 1e-16; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

std::vector<double> sample_grid(const CirclePolynomial& p, std::size_t m) {
  std::vector<double> g(m);
  const double h = kTwoPi / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) g[k] = modulus_squared(p, h * static_cast<double>(k));
  return g;
}

std::string format_complex(cd z) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
  return os.str();
}

}  // namespace

CirclePolynomial::CirclePolynomial(std::vector<cd> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::input, "polynomial needs at least one coefficient");
  for (const cd& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::input, "polynomial coefficients must be finite");
    }
  }
  trim_exact(coeffs_);
}

CirclePolynomial CirclePolynomial::normalized(std::vector<cd> coeffs, double eps_zero) {
  CirclePolynomial p(std::move(coeffs));
  while (p.coeffs_.size() > 1 && std::abs(p.coeffs_.back()) < eps_zero) p.coeffs_.pop_back();
  if (p.coeffs_.size() == 1 && std::abs(p.coeffs_[0]) < eps_zero) p.coeffs_[0] = cd{};
  return p;
}

CirclePolynomial CirclePolynomial::from_roots(std::span<const cd> roots, cd leading) {
  CirclePolynomial p({leading});
  for (const cd& r : roots) p = p * CirclePolynomial({-r, 1.0});
  return p;
}

cd CirclePolynomial::operator()(cd z) const {
  cd acc = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
  return acc;
}

CirclePolynomial CirclePolynomial::derivative() const {
  if (coeffs_.size() == 1) return CirclePolynomial({cd{}});
  std::vector<cd> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return CirclePolynomial(std::move(d));
}

CirclePolynomial operator*(const CirclePolynomial& a, const CirclePolynomial& b) {
  std::vector<cd> c(a.coeffs_.size() + b.coeffs_.size() - 1, cd{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return CirclePolynomial(std::move(c));
}

CirclePolynomial operator+(const CirclePolynomial& a, const CirclePolynomial& b) {
  std::vector<cd> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cd{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return CirclePolynomial(std::move(c));
}

CirclePolynomial operator-(const CirclePolynomial& a, const CirclePolynomial& b) { return a + cd{-1.0} * b; }

CirclePolynomial operator*(cd s, const CirclePolynomial& a) {
  std::vector<cd> c(a.coeffs_);
  for (cd& x : c) x *= s;
  return CirclePolynomial(std::move(c));
}

std::size_t circle_grid_size(std::size_t degree, double eps_norm) {
  const double bernstein = std::numbers::pi * static_cast<double>(degree) / (2.0 * std::sqrt(eps_norm));
  return std::max<std::size_t>({256, 16 * (degree + 1), static_cast<std::size_t>(std::ceil(bernstein))});
}

CircleExtremum max_on_circle(const CirclePolynomial& p, const Tolerances& tol) {
  if (p.degree() == 0) return {std::abs(p.coeffs()[0]), 0.0};
  const std::size_t m = circle_grid_size(p.degree(), tol.eps_norm);
  const std::vector<double> g = sample_grid(p, m);
  const auto best = static_cast<std::size_t>(std::distance(g.begin(), std::max_element(g.begin(), g.end())));
  const double h = kTwoPi / static_cast<double>(m);
  const double centre = h * static_cast<double>(best);
  auto [theta, neg] = golden_minimize([&](double t) { return -modulus_squared(p, t); }, centre - h, centre + h);
  if (-neg >= g[best]) return {std::sqrt(-neg), wrap_angle(theta)};
  return {std::sqrt(g[best]), centre};
}

double sup_norm_on_circle(const CirclePolynomial& p, const Tolerances& tol) { return max_on_circle(p, tol).value; }

CircleExtremum min_on_circle(const CirclePolynomial& p, const Tolerances& tol, std::size_t grid_factor) {
  if (p.degree() == 0) return {std::abs(p.coeffs()[0]), 0.0};
  const std::size_t m = circle_grid_size(p.degree(), tol.eps_norm) * std::max<std::size_t>(grid_factor, 1);
  const std::vector<double> g = sample_grid(p, m);
  std::vector<std::size_t> local_minima;
  for (std::size_t k = 0; k < m; ++k) {
    const double prev = g[(k + m - 1) % m];
    const double next = g[(k + 1) % m];
    if (g[k] <= prev && g[k] <= next) local_minima.push_back(k);
  }
  // |p|^2 has at most d local minima on the circle.
  const std::size_t keep = std::min(local_minima.size(), p.degree() + 2);
  std::partial_sort(local_minima.begin(), local_minima.begin() + static_cast<std::ptrdiff_t>(keep),
                    local_minima.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });

  const double h = kTwoPi / static_cast<double>(m);
  CircleExtremum best{std::sqrt(g[local_minima.front()]), h * static_cast<double>(local_minima.front())};
  for (std::size_t i = 0; i < keep; ++i) {
    const double centre = h * static_cast<double>(local_minima[i]);
    auto [theta, value] = golden_minimize([&](double t) { return modulus_squared(p, t); }, centre - h, centre + h);
    if (std::sqrt(value) < best.value) best = {std::sqrt(value), wrap_angle(theta)};
  }
  return best;
}

std::vector<cd> polynomial_roots(const CirclePolynomial& p) {
  const std::size_t d = p.degree();
  if (d == 0) return {};
  const auto c = p.coeffs();
  const cd lead = c[d];
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric, "companion eigenvalue solver did not converge");
  }

  const CirclePolynomial dp = p.derivative();
  std::vector<cd> roots;
  roots.reserve(d);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    cd r = solver.eigenvalues()(i);
    double residual = std::abs(p(r));
    for (int step = 0; step < kNewtonSteps && residual > 0.0; ++step) {
      const cd slope = dp(r);
      if (slope == cd{}) break;
      const cd candidate = r - p(r) / slope;
      const double candidate_residual = std::abs(p(candidate));
      if (!(candidate_residual < residual)) break;
      r = candidate;
      residual = candidate_residual;
    }
    roots.push_back(r);
  }
  return roots;
}

CircleZeroSet circle_zeros(const CirclePolynomial& p, const Tolerances& tol) {
  if (p.is_zero()) throw Error(ErrorKind::degenerate_input, "the zero polynomial has no meaningful zero set");
  CircleZeroSet result;
  result.sup_norm = sup_norm_on_circle(p, tol);
  if (p.degree() == 0) {
    result.residual_min = std::abs(p.coeffs()[0]);
    return result;
  }
  result.roots = polynomial_roots(p);
  const CircleExtremum low = min_on_circle(p, tol);
  result.residual_min = low.value;
  result.residual_angle = low.angle;
  const double threshold = tol.eps_norm * result.sup_norm;

  std::vector<cd> near;
  for (const cd& r : result.roots) {
    const double radius = std::abs(r);
    if (std::abs(radius - 1.0) > tol.eps_circle) continue;
    const cd z = r / radius;
    if (std::abs(p(z)) > threshold) continue;
    const bool duplicate = std::any_of(near.begin(), near.end(), [&](cd w) { return std::abs(w - z) <= tol.eps_norm; });
    if (!duplicate) near.push_back(z);
  }

  const bool grid_says_zero = result.residual_min <= threshold;
  if (grid_says_zero && near.empty()) {
    near.push_back(std::polar(1.0, low.angle));
    result.warnings.push_back("root finder placed no root within eps_circle of T but the circle minimum is " +
                              std::to_string(result.residual_min) + "; using the grid argmin as the circle zero");
  } else if (!grid_says_zero && !near.empty()) {
    near.clear();
    result.warnings.push_back("root finder reported a root near T but the circle minimum " +
                              std::to_string(result.residual_min) + " exceeds eps_norm * ||p||; grid verdict kept");
  }
  std::sort(near.begin(), near.end(), [](cd a, cd b) { return wrap_angle(std::arg(a)) < wrap_angle(std::arg(b)); });
  result.zeros = std::move(near);
  return result;
}

Verdict<CirclePolynomial> decide_tdz_disk(const CirclePolynomial& p, const Tolerances& tol) {
  tol.validate();
  if (p.is_zero()) throw Error(ErrorKind::degenerate_input, "the zero polynomial is the trivial zero divisor");
  const CircleZeroSet zs = circle_zeros(p, tol);

  Verdict<CirclePolynomial> v;
  v.left_zero_divisor = Tri::no;  // A(D) is an integral domain
  v.right_zero_divisor = Tri::no;
  v.warnings = zs.warnings;
  if (!zs.zeros.empty()) {
    const cd z0 = zs.zeros.front();
    v.tdz = true;
    v.certificate = WitnessSequence<CirclePolynomial>{
        Side::left, "f_n(z) = ((1 + conj(z0) z) / 2)^n, z0 = " + format_complex(z0),
        [z0, tol](std::size_t n) { return peak_witness(z0, n, tol); }};
    return v;
  }
  const bool interior_root = std::any_of(zs.roots.begin(), zs.roots.end(), [](cd r) { return std::abs(r) < 1.0; });
  if (!interior_root) {
    // Zero-free on the closed disk: the minimum modulus sits on T.
    v.regular = true;
    v.certificate = RegularityBound<CirclePolynomial>{zs.residual_min, std::nullopt};
  }
  return v;
}

CirclePolynomial peak_witness(cd z0, std::size_t n, const Tolerances& tol) {
  if (std::abs(std::abs(z0) - 1.0) > tol.eps_circle) {
    throw Error(ErrorKind::input, "peak point must lie on the unit circle");
  }
  if (n == 0) throw Error(ErrorKind::input, "peak witness index must be positive");
  const CirclePolynomial base({0.5, std::conj(z0) / 2.0});
  CirclePolynomial result = base;
  for (std::size_t k = 1; k < n; ++k) result = result * base;
  return result;
}

CirclePolynomial factor_out_root(const CirclePolynomial& p, cd z0, const Tolerances& tol) {
  const auto a = p.coeffs();
  const std::size_t d = p.degree();
  if (d == 0) {
    if (p.is_zero()) return p;
    throw Error(ErrorKind::not_a_root, "a nonzero constant has no roots");
  }
  std::vector<cd> r(d);
  r[d - 1] = a[d];
  for (std::size_t k = d - 1; k > 0; --k) r[k - 1] = a[k] + z0 * r[k];
  const cd remainder = a[0] + z0 * r[0];
  const double bound = 10.0 * tol.eps_norm * sup_norm_on_circle(p, tol);
  if (std::abs(remainder) > bound) {
    throw Error(ErrorKind::not_a_root, "division remainder " + std::to_string(std::abs(remainder)) +
                                           " exceeds 10 eps_norm ||p||");
  }
  return CirclePolynomial(std::move(r));
}

CertificationReport certify(const CirclePolynomial& p, const Verdict<CirclePolynomial>& verdict,
                            const Tolerances& tol) {
  if (!verdict.certificate) {
    return vacuous_report("singular element of A(D) with interior roots only; it is not a TDZ");
  }
  const DiskAlgebra algebra{tol};
  return std::visit(
      [&](const auto& cert) -> CertificationReport {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, WitnessSequence<CirclePolynomial>>) {
          return verify_tdz_certificate(algebra, p, cert, tol);
        } else if constexpr (std::is_same_v<T, Annihilator<CirclePolynomial>>) {
          return verify_annihilator(algebra, p, cert, tol);
        } else {
          const double estimate = min_on_circle(p, tol, 4).value;
          return verify_regularity_bound(cert.lambda0, estimate, std::nullopt, tol);
        }
      },
      *verdict.certificate);
}

}  // namespace tdz::disk
