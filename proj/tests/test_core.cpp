#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tdz/errors.hpp"
#include "tdz/harness.hpp"
#include "tdz/norms.hpp"

using tdz::cd;
using tdz::OperatorMatrix;

namespace {

// Largest singular value of a 2x2 matrix from the characteristic polynomial
// of M*M: sigma^2 = (S + sqrt(S^2 - 4 |det M|^2)) / 2, S = Frobenius^2.
double two_by_two_norm(cd a, cd b, cd c, cd d) {
  const double s = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det2 = std::norm(a * d - b * c);
  return std::sqrt((s + std::sqrt(std::max(0.0, s * s - 4.0 * det2))) / 2.0);
}

OperatorMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = cd(normal(rng), normal(rng));
  return OperatorMatrix(m);
}

// Bounded sequences truncated to a long window, sup norm. Enough structure to
// drive the harness without pulling in a real module.
struct WindowAlgebra {
  using element_type = std::vector<double>;
  double norm(const element_type& x) const {
    double best = 0.0;
    for (double v : x) {
      if (std::isnan(v)) return v;
      best = std::max(best, std::abs(v));
    }
    return best;
  }
  element_type multiply(const element_type& a, const element_type& b) const {
    element_type c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
    return c;
  }
};

constexpr std::size_t kWindow = 2000;

std::vector<double> reciprocal() {
  std::vector<double> x(kWindow);
  for (std::size_t i = 0; i < kWindow; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
  return x;
}

}  // namespace

TEST_CASE("tolerances validate") {
  tdz::Tolerances tol;
  CHECK_NOTHROW(tol.validate());
  tol.n_witness = 2;
  CHECK_THROWS_AS(tol.validate(), tdz::Error);
  tol = {};
  tol.eps_norm = 0.0;
  CHECK_THROWS_AS(tol.validate(), tdz::Error);
}

TEST_CASE("operator matrix rejects non-finite entries and mismatched shapes") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 1) = cd(std::nan(""), 0.0);
  CHECK_THROWS_AS(OperatorMatrix{m}, tdz::Error);
  CHECK_THROWS_AS(OperatorMatrix(2, 3) * OperatorMatrix(2, 3), tdz::Error);
}

TEST_CASE("operator_norm on the documented examples") {
  CHECK(tdz::operator_norm(OperatorMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-9));
  const std::vector<cd> diag{0, 1, 1, 1, 1};
  CHECK(tdz::operator_norm(OperatorMatrix::diagonal(diag)) == doctest::Approx(1.0).epsilon(1e-9));

  Eigen::MatrixXcd nil = Eigen::MatrixXcd::Zero(2, 2);
  nil(0, 1) = 2.0;
  const double oracle = two_by_two_norm(0, 2, 0, 0);
  CHECK(oracle == doctest::Approx(2.0));
  CHECK(tdz::operator_norm(OperatorMatrix(nil)) == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(tdz::operator_norm(OperatorMatrix(3, 3)) == 0.0);
}

TEST_CASE("operator_norm finds a top singular vector orthogonal to the all-ones start") {
  Eigen::MatrixXcd m(2, 2);
  m << 1, -1, -1, 1;  // M*M has eigenvector (1,-1); ones is in the kernel
  CHECK(tdz::operator_norm(OperatorMatrix(m)) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("operator_norm matches the 2x2 closed form on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const OperatorMatrix m = random_matrix(rng, 2, 2);
    const double oracle = two_by_two_norm(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    CHECK(tdz::operator_norm(m) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("adjoint norm symmetry on random rectangular matrices") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  const tdz::Tolerances tol;
  for (int trial = 0; trial < 100; ++trial) {
    const OperatorMatrix m = random_matrix(rng, dim(rng), dim(rng));
    const double a = tdz::operator_norm(m, tol);
    const double b = tdz::operator_norm(m.adjoint(), tol);
    CHECK(std::abs(a - b) <= tol.eps_norm * a);
  }
}

TEST_CASE("star inequality: identity and orthogonal diagonal cases") {
  const tdz::Tolerances tol;
  const std::vector<OperatorMatrix> unit{OperatorMatrix::identity(3)};
  auto report = tdz::star_tdz_inequality_check(OperatorMatrix::identity(3), unit, tol);
  REQUIRE(report.holds);
  CHECK(report.entries[0].product_norm == doctest::Approx(1.0));

  const std::vector<cd> t_diag{0, 1};
  const std::vector<cd> w_diag{1, 0};
  const std::vector<OperatorMatrix> w{OperatorMatrix::diagonal(w_diag)};
  report = tdz::star_tdz_inequality_check(OperatorMatrix::diagonal(t_diag), w, tol);
  REQUIRE(report.holds);
  CHECK(report.entries[0].product_norm == 0.0);
}

TEST_CASE("star inequality on random 4x4 operators with brute-force norms") {
  std::mt19937_64 rng(2024);
  const tdz::Tolerances tol;
  const OperatorMatrix t = random_matrix(rng, 4, 4);
  std::vector<OperatorMatrix> witnesses;
  for (int i = 0; i < 10; ++i) {
    OperatorMatrix w = random_matrix(rng, 4, 4);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w.dense());
    witnesses.push_back(cd(1.0 / svd.singularValues()(0)) * w);
  }
  const auto report = tdz::star_tdz_inequality_check(t, witnesses, tol);
  CHECK(report.holds);
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> tw((t * witnesses[i]).dense());
    CHECK(report.entries[i].product_norm == doctest::Approx(tw.singularValues()(0)).epsilon(1e-6));
  }
}

TEST_CASE("star inequality rejects non-conformable or non-normalized witnesses") {
  const tdz::Tolerances tol;
  const std::vector<OperatorMatrix> bad_shape{OperatorMatrix::identity(2)};
  CHECK_THROWS_AS(tdz::star_tdz_inequality_check(OperatorMatrix::identity(3), bad_shape, tol), tdz::Error);
  const std::vector<OperatorMatrix> bad_norm{cd(2.0) * OperatorMatrix::identity(3)};
  CHECK_THROWS_AS(tdz::star_tdz_inequality_check(OperatorMatrix::identity(3), bad_norm, tol), tdz::Error);
}

TEST_CASE("harness passes indicator tails of 1/n with product norm 1/(k+1)") {
  const tdz::Tolerances tol;
  tdz::WitnessSequence<std::vector<double>> cert{tdz::Side::left, "indicator of {m > k}", [](std::size_t k) {
                                                   std::vector<double> w(kWindow, 0.0);
                                                   for (std::size_t i = k; i < kWindow; ++i) w[i] = 1.0;
                                                   return w;
                                                 }};
  const auto report = tdz::verify_tdz_certificate(WindowAlgebra{}, reciprocal(), cert, tol);
  CHECK(report.passes);
  REQUIRE(report.samples.size() == tol.n_witness);
  for (const auto& s : report.samples) {
    CHECK(s.product_norm == doctest::Approx(1.0 / static_cast<double>(s.n + 1)));
  }
  const auto json = tdz::to_json(report);
  CHECK(json["side"] == "left");
  CHECK(json["samples"].size() == tol.n_witness);
  CHECK(json.contains("criterion"));
}

TEST_CASE("harness fails a bounded-below element and reports generator failures") {
  const tdz::Tolerances tol;
  std::vector<double> x(kWindow, 0.5);
  tdz::WitnessSequence<std::vector<double>> cert{tdz::Side::left, "unit", [](std::size_t) {
                                                   return std::vector<double>(kWindow, 1.0);
                                                 }};
  CHECK_FALSE(tdz::verify_tdz_certificate(WindowAlgebra{}, x, cert, tol).passes);

  cert.generator = [](std::size_t n) -> std::vector<double> {
    if (n == 4) throw std::runtime_error("boom");
    return std::vector<double>(kWindow, 1.0);
  };
  try {
    (void)tdz::verify_tdz_certificate(WindowAlgebra{}, x, cert, tol);
    FAIL("expected certificate_malformed");
  } catch (const tdz::Error& e) {
    CHECK(e.kind() == tdz::ErrorKind::certificate_malformed);
  }

  cert.generator = [](std::size_t) { return std::vector<double>(kWindow, std::nan("")); };
  try {
    (void)tdz::verify_tdz_certificate(WindowAlgebra{}, x, cert, tol);
    FAIL("expected numeric error");
  } catch (const tdz::Error& e) {
    CHECK(e.kind() == tdz::ErrorKind::numeric);
  }
}

TEST_CASE("decay rule details") {
  const tdz::Tolerances tol;
  std::vector<tdz::WitnessSample> s;
  for (std::size_t n = 1; n <= 10; ++n) s.push_back({n, 1.0, 1.0 / static_cast<double>(n)});
  CHECK(tdz::witness_decay_passes(s, tol));
  s[5].witness_norm = 1.1;  // off-norm witness
  CHECK_FALSE(tdz::witness_decay_passes(s, tol));
  s[5].witness_norm = 1.0;
  s[6].product_norm = 5.0;  // spike breaks windowed monotonicity
  CHECK_FALSE(tdz::witness_decay_passes(s, tol));
  for (auto& x : s) x.product_norm = 0.0;  // exact zero products pass
  CHECK(tdz::witness_decay_passes(s, tol));
}

TEST_CASE("annihilator and regularity reports") {
  const tdz::Tolerances tol;
  std::vector<double> x(kWindow, 1.0);
  x[3] = 0.0;
  std::vector<double> y(kWindow, 0.0);
  y[3] = 1.0;
  const tdz::Annihilator<std::vector<double>> ann{tdz::Side::left, "indicator of {4}", y};
  CHECK(tdz::verify_annihilator(WindowAlgebra{}, x, ann, tol).passes);
  const tdz::Annihilator<std::vector<double>> zero{tdz::Side::left, "zero", std::vector<double>(kWindow, 0.0)};
  CHECK_FALSE(tdz::verify_annihilator(WindowAlgebra{}, x, zero, tol).passes);

  CHECK(tdz::verify_regularity_bound(0.5, 0.5, std::nullopt, tol).passes);
  CHECK_FALSE(tdz::verify_regularity_bound(0.5, 0.4, std::nullopt, tol).passes);
  CHECK_FALSE(tdz::verify_regularity_bound(0.5, 0.5, 1e-3, tol).passes);
  CHECK(tdz::vacuous_report("nothing").passes);
}
