#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "tdz/compose_lp.hpp"
#include "tdz/errors.hpp"
#include "tdz/norms.hpp"

using tdz::lp::CompositionOperatorSpec;
using tdz::lp::index_t;
using tdz::lp::SelfMapN;

namespace {

constexpr index_t kScan = 400;

// Oracles that only evaluate phi pointwise on a long window.
index_t brute_preimages(const SelfMapN& phi, index_t m) {
  index_t count = 0;
  for (index_t n = 1; n <= kScan; ++n) count += phi(n) == m ? 1 : 0;
  return count;
}

bool brute_injective(const SelfMapN& phi) {
  std::set<index_t> seen;
  for (index_t n = 1; n <= kScan; ++n) {
    if (!seen.insert(phi(n)).second) return false;
  }
  return true;
}

bool brute_surjective(const SelfMapN& phi) {
  std::set<index_t> seen;
  for (index_t n = 1; n <= kScan; ++n) seen.insert(phi(n));
  for (index_t m = 1; m <= 40; ++m) {
    if (seen.count(m) == 0) return false;
  }
  return true;
}

SelfMapN random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 5);
  std::uniform_int_distribution<index_t> value(1, 8);
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<index_t> prefix(static_cast<std::size_t>(len(rng)));
  for (auto& v : prefix) v = value(rng);
  const auto p = static_cast<index_t>(prefix.size());
  if (kind(rng) == 0) return SelfMapN::divide(std::uniform_int_distribution<index_t>(1, 3)(rng), prefix);
  if (kind(rng) == 1) {
    // A permutation of 1..P with the identity tail.
    for (index_t i = 0; i < p; ++i) prefix[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(prefix.begin(), prefix.end(), rng);
    return SelfMapN::shift(0, prefix);
  }
  return SelfMapN::shift(std::uniform_int_distribution<index_t>(-p, 3)(rng), prefix);
}

bool is_zero(const tdz::OperatorMatrix& m) { return m.max_abs() == 0.0; }

}  // namespace

TEST_CASE("validation and evaluation") {
  CHECK_THROWS_AS(SelfMapN({0}, tdz::lp::Shift{0}), tdz::Error);
  CHECK_THROWS_AS(SelfMapN({}, tdz::lp::Shift{-1}), tdz::Error);
  CHECK_THROWS_AS(SelfMapN({}, tdz::lp::Divide{0}), tdz::Error);
  const SelfMapN phi = SelfMapN::shift(-1, {1});
  CHECK(phi(1) == 1);
  CHECK(phi(2) == 1);
  CHECK(phi(7) == 6);
  CHECK(SelfMapN::divide(3)(7) == 3);
  CHECK_THROWS_AS(phi(0), tdz::Error);
  CHECK_THROWS_AS(tdz::lp::composition_norm({SelfMapN::identity(), 0.5}), tdz::Error);
}

TEST_CASE("Radon-Nikodym derivative examples") {
  const auto shift = tdz::lp::rn_derivative(SelfMapN::shift(1));
  CHECK(shift(1) == tdz::cd(0.0));
  for (std::size_t n = 2; n <= 20; ++n) CHECK(shift(n) == tdz::cd(1.0));

  const auto id = tdz::lp::rn_derivative(SelfMapN::identity());
  for (std::size_t n = 1; n <= 20; ++n) CHECK(id(n) == tdz::cd(1.0));

  const SelfMapN half = SelfMapN::divide(2);
  const auto rn = tdz::lp::rn_derivative(half);
  for (index_t m = 1; m <= 100; ++m) {
    CHECK(rn(static_cast<std::size_t>(m)) == tdz::cd(2.0));
    CHECK(half.preimage_count(m) == brute_preimages(half, m));
  }
}

TEST_CASE("norm examples against sections") {
  CHECK(tdz::lp::composition_norm({SelfMapN::shift(1), 2.0}) == 1.0);
  CHECK(tdz::lp::composition_norm({SelfMapN::divide(2), 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(tdz::lp::composition_norm({SelfMapN::divide(2), 1.0}) == 2.0);
  CHECK(tdz::lp::composition_norm({SelfMapN::divide(2), INFINITY}) == 1.0);
  CHECK(tdz::lp::composition_norm({SelfMapN::identity(), 3.0}) == 1.0);
  const auto section = tdz::lp::finite_section_composition({SelfMapN::divide(2), 2.0}, 16);
  CHECK(tdz::operator_norm(section) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("map properties examples") {
  const auto s = tdz::lp::map_properties(SelfMapN::shift(1));
  CHECK(s.injective);
  CHECK_FALSE(s.surjective);
  CHECK(s.missed_value == 1);
  CHECK_FALSE(s.invertible);

  const auto back = tdz::lp::map_properties(SelfMapN::shift(-1, {1}));
  CHECK(back.surjective);
  CHECK_FALSE(back.injective);
  REQUIRE(back.collision);
  CHECK(back.collision->first == 1);
  CHECK(back.collision->second == 2);

  CHECK(tdz::lp::map_properties(SelfMapN::identity()).invertible);
  const auto half = tdz::lp::map_properties(SelfMapN::divide(2));
  REQUIRE(half.collision);
  CHECK(half.collision->first == 1);
  CHECK(half.collision->second == 2);
  CHECK(half.surjective);
}

TEST_CASE("divisor status examples") {
  const tdz::Tolerances tol;
  const CompositionOperatorSpec shift{SelfMapN::shift(1), 2.0};
  const auto a = tdz::lp::divisor_status(shift, tol);
  CHECK(a.verdict.left_zero_divisor == tdz::Tri::yes);
  CHECK(a.verdict.right_zero_divisor == tdz::Tri::no);
  CHECK(a.verdict.tdz);
  CHECK(a.verdict.consistent());
  REQUIRE(a.left);
  const auto c = tdz::lp::composition_operator(shift.phi);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(is_zero(c.section(n) * a.left->element.section(n)));
  CHECK(tdz::lp::certify(shift, a, tol).passes);

  const CompositionOperatorSpec back{SelfMapN::shift(-1, {1}), 2.0};
  const auto b = tdz::lp::divisor_status(back, tol);
  CHECK(b.verdict.left_zero_divisor == tdz::Tri::no);
  CHECK(b.verdict.right_zero_divisor == tdz::Tri::yes);
  CHECK(b.verdict.tdz);
  REQUIRE(b.right);
  const auto cb = tdz::lp::composition_operator(back.phi);
  for (std::size_t n = b.right->element.min_order; n <= 12; ++n) {
    CHECK(is_zero(b.right->element.section(n) * cb.section(n)));
    CHECK(tdz::operator_norm(b.right->element.section(n)) >= 1.0 - tol.eps_norm);
  }
  CHECK(tdz::lp::certify(back, b, tol).passes);

  const CompositionOperatorSpec id{SelfMapN::identity(), 2.0};
  const auto i = tdz::lp::divisor_status(id, tol);
  CHECK(i.verdict.regular);
  CHECK_FALSE(i.verdict.tdz);
  CHECK(i.verdict.left_zero_divisor == tdz::Tri::no);
  CHECK(tdz::lp::certify(id, i, tol).passes);

  const CompositionOperatorSpec perm{SelfMapN::shift(0, {3, 1, 2}), 2.0};
  const auto pv = tdz::lp::divisor_status(perm, tol);
  REQUIRE(pv.inverse);
  CHECK(pv.inverse->prefix() == std::vector<index_t>{2, 3, 1});
  CHECK(tdz::lp::certify(perm, pv, tol).passes);
}

TEST_CASE("finite sections examples") {
  const auto s = tdz::lp::finite_section_composition({SelfMapN::shift(1), 2.0}, 3);
  CHECK(s(0, 1) == tdz::cd(1.0));
  CHECK(s(1, 2) == tdz::cd(1.0));
  CHECK(s.dense().row(2).isZero());
  CHECK(s.dense().cwiseAbs().sum() == 2.0);

  const auto id = tdz::lp::finite_section_composition({SelfMapN::identity(), 2.0}, 4);
  CHECK(id.dense().isIdentity());

  const auto half = tdz::lp::finite_section_composition({SelfMapN::divide(2), 2.0}, 4);
  CHECK(half(0, 0) == tdz::cd(1.0));
  CHECK(half(1, 0) == tdz::cd(1.0));
  CHECK(half(2, 1) == tdz::cd(1.0));
  CHECK(half(3, 1) == tdz::cd(1.0));
  CHECK(half.dense().cwiseAbs().sum() == 4.0);

  CHECK_THROWS_AS(tdz::lp::finite_section_composition({SelfMapN::identity(), 1.0}, 4), tdz::Error);
}

TEST_CASE("adjoint identity examples") {
  const tdz::Tolerances tol;
  const CompositionOperatorSpec shift{SelfMapN::shift(1), 2.0};
  const auto r = tdz::lp::adjoint_rn_check(shift, 5, tol);
  CHECK(r.identity_holds);
  CHECK(r.max_abs_diff == 0.0);
  const auto c = tdz::lp::finite_section_composition(shift, 5);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(5, 5);
  expected(0, 0) = 0.0;
  CHECK((c.adjoint() * c).dense() == expected);
  CHECK(r.routes_agree);

  const auto id = tdz::lp::adjoint_rn_check({SelfMapN::identity(), 2.0}, 4, tol);
  CHECK(id.identity_holds);
  CHECK(id.block == 4);

  const CompositionOperatorSpec half{SelfMapN::divide(2), 2.0};
  const auto h = tdz::lp::adjoint_rn_check(half, 8, tol);
  CHECK(h.identity_holds);
  CHECK(h.block == 4);
  // Beyond the stabilized block the truncation loses preimages: index 5 has
  // preimages 9 and 10, both cut off at N = 8.
  const auto ch = tdz::lp::finite_section_composition(half, 8);
  CHECK((ch.adjoint() * ch)(4, 4) == tdz::cd(0.0));
  CHECK(h.norm_agrees);

  try {
    (void)tdz::lp::adjoint_rn_check({SelfMapN::shift(-1, {1}), 2.0}, 2, tol);
    FAIL("expected an input error");
  } catch (const tdz::Error& e) {
    CHECK(std::string(e.what()).find("minimal N is 3") != std::string::npos);
  }
}

TEST_CASE("composition of maps") {
  const SelfMapN a = SelfMapN::shift(2, {4});
  const SelfMapN b = SelfMapN::shift(-1, {1, 1});
  const SelfMapN ab = tdz::lp::compose(a, b);
  for (index_t n = 1; n <= 50; ++n) CHECK(ab(n) == a(b(n)));
  const SelfMapN d = tdz::lp::compose(SelfMapN::divide(2, {3}), SelfMapN::divide(3));
  for (index_t n = 1; n <= 50; ++n) CHECK(d(n) == SelfMapN::divide(2, {3})(SelfMapN::divide(3)(n)));
  const SelfMapN mixed = tdz::lp::compose(SelfMapN::divide(2), SelfMapN::shift(0, {2, 1}));
  for (index_t n = 1; n <= 50; ++n) CHECK(mixed(n) == SelfMapN::divide(2)(SelfMapN::shift(0, {2, 1})(n)));
  try {
    (void)tdz::lp::compose(SelfMapN::shift(1), SelfMapN::divide(2));
    FAIL("expected composition_unrepresentable");
  } catch (const tdz::Error& e) {
    CHECK(e.kind() == tdz::ErrorKind::composition_unrepresentable);
  }
  CHECK_THROWS_AS(tdz::lp::compose(SelfMapN::divide(2), SelfMapN::shift(1)), tdz::Error);

  // C_{outer o inner} = C_inner C_outer on rows where inner stays inside the section.
  const std::size_t n = 16;
  const auto lhs = tdz::lp::finite_section_composition({ab, 2.0}, n);
  const auto rhs = tdz::lp::finite_section_composition({b, 2.0}, n) * tdz::lp::finite_section_composition({a, 2.0}, n);
  for (std::size_t row = 1; row <= n; ++row) {
    if (b(static_cast<index_t>(row)) > static_cast<index_t>(n)) continue;
    CHECK(lhs.dense().row(static_cast<Eigen::Index>(row - 1)) == rhs.dense().row(static_cast<Eigen::Index>(row - 1)));
  }
}

TEST_CASE("surjective but not injective maps lose row rank") {
  const CompositionOperatorSpec back{SelfMapN::shift(-1, {1}), 2.0};
  const auto section = tdz::lp::finite_section_composition(back, 8);
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(section.dense().topRows(7));
  CHECK(tdz::lp::map_properties(back.phi).surjective);
  CHECK(lu.rank() == 6);
}

TEST_CASE("property: random maps against brute-force oracles") {
  const tdz::Tolerances tol;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const SelfMapN phi = random_map(rng);
    const CompositionOperatorSpec spec{phi, 2.0};
    const auto props = tdz::lp::map_properties(phi);
    CHECK(props.injective == brute_injective(phi));
    CHECK(props.surjective == brute_surjective(phi));
    if (props.collision) CHECK(phi(props.collision->first) == phi(props.collision->second));
    if (props.missed_value) CHECK(brute_preimages(phi, *props.missed_value) == 0);
    for (index_t m = 1; m <= 40; ++m) CHECK(phi.preimage_count(m) == brute_preimages(phi, m));
    const auto rn = tdz::lp::rn_derivative(phi);
    for (index_t m = 1; m <= 40; ++m) CHECK(rn(static_cast<std::size_t>(m)).real() == static_cast<double>(brute_preimages(phi, m)));

    const auto status = tdz::lp::divisor_status(spec, tol);
    CHECK(status.verdict.consistent());
    CHECK((status.verdict.right_zero_divisor == tdz::Tri::yes) == !props.injective);
    CHECK((status.verdict.left_zero_divisor == tdz::Tri::yes) == !props.surjective);
    CHECK(status.verdict.tdz == !props.invertible);
    CHECK(tdz::lp::certify(spec, status, tol).passes);

    const auto report = tdz::lp::adjoint_rn_check(spec, 24, tol);
    CHECK(report.identity_holds);
    CHECK(report.routes_agree);
    CHECK(report.rn_route_tdz == !props.surjective);

    // Leading N - K rows are the unit vectors e_{phi(n)}: full row rank iff
    // phi is injective on them.
    const auto section = tdz::lp::finite_section_composition(spec, 24);
    const auto block = static_cast<Eigen::Index>(24 - phi.tail_spread());
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(section.dense().topRows(block));
    bool distinct = true;
    std::set<index_t> cols;
    for (index_t row = 1; row <= block; ++row) distinct = cols.insert(phi(row)).second && distinct;
    CHECK((lu.rank() == block) == distinct);
    if (props.injective) CHECK(lu.rank() == block);
  }
}
