#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tdz/errors.hpp"
#include "tdz/linf.hpp"

using tdz::linf::cd;
using tdz::linf::MeasurableFn;

namespace {

MeasurableFn atoms(std::vector<cd> values) {
  std::vector<double> weights(values.size(), 1.0);
  return MeasurableFn::finite(std::move(weights), std::move(values));
}

MeasurableFn reciprocal_n() { return MeasurableFn::decaying({}, 1.0); }

bool has_value(const std::vector<cd>& values, cd v) {
  for (const cd& w : values) {
    if (std::abs(w - v) < 1e-12) return true;
  }
  return false;
}

// Exhaustive search over nonzero indicators g on m atoms for f g = 0.
bool brute_force_zero_divisor(const std::vector<cd>& f) {
  const std::size_t m = f.size();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    bool kills = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (((mask >> i) & 1u) != 0 && f[i] != cd{}) kills = false;
    }
    if (kills) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS_AS(MeasurableFn::finite({1.0, 0.0}, {1.0, 2.0}), tdz::Error);
  CHECK_THROWS_AS(MeasurableFn::finite({1.0}, {1.0, 2.0}), tdz::Error);
  CHECK_THROWS_AS(MeasurableFn::periodic({1.0}, {}), tdz::Error);
  CHECK_THROWS_AS(MeasurableFn::decaying({}, 0.0), tdz::Error);
  CHECK_THROWS_AS(MeasurableFn(tdz::linf::CountingN{}, tdz::linf::FiniteVector{{1.0}}), tdz::Error);
  CHECK_THROWS_AS(MeasurableFn(tdz::linf::FiniteAtoms{{1.0}}, tdz::linf::EventuallyPeriodic{{}, {1.0}}), tdz::Error);
  const MeasurableFn f = MeasurableFn::periodic({5.0}, {2.0, 3.0});
  CHECK(f(1) == cd(5.0));
  CHECK(f(2) == cd(2.0));
  CHECK(f(5) == cd(3.0));
  CHECK_THROWS_AS(f(0), tdz::Error);
  CHECK_THROWS_AS(atoms({1.0})(2), tdz::Error);
}

TEST_CASE("essential_stats examples") {
  const auto a = tdz::linf::essential_stats(atoms({0.0, 2.0, 3.0}));
  CHECK(a.ess_sup == 3.0);
  CHECK(a.attains_zero);
  CHECK(a.zero_in_ess_range);

  const auto b = tdz::linf::essential_stats(reciprocal_n());
  CHECK(b.ess_sup == 1.0);
  CHECK_FALSE(b.attains_zero);
  CHECK(b.zero_in_ess_range);
  CHECK(b.min_modulus.is_limit);
  CHECK(b.min_modulus.value == 0.0);

  const auto c = tdz::linf::essential_stats(MeasurableFn::periodic({5.0}, {2.0, 3.0}));
  CHECK(c.ess_sup == 5.0);
  CHECK_FALSE(c.zero_in_ess_range);
  CHECK(c.min_modulus.value == 2.0);
  CHECK_FALSE(c.min_modulus.is_limit);

  // The tail maximum sits right after the prefix.
  CHECK(tdz::linf::essential_stats(MeasurableFn::decaying({0.1, 0.1}, 6.0)).ess_sup == doctest::Approx(2.0));
}

TEST_CASE("zero divisor examples") {
  const MeasurableFn f = atoms({0.0, 2.0, 3.0});
  const auto v = tdz::linf::decide_zero_divisor_linf(f);
  CHECK(v.left_zero_divisor == tdz::Tri::yes);
  CHECK(v.right_zero_divisor == tdz::Tri::yes);
  CHECK(v.tdz);
  CHECK(v.consistent());
  const auto& ann = std::get<tdz::Annihilator<MeasurableFn>>(*v.certificate);
  CHECK(ann.element(1) == cd(1.0));
  CHECK(ann.element(2) == cd(0.0));
  const MeasurableFn product = tdz::linf::pointwise_product(f, ann.element);
  CHECK(tdz::linf::essential_stats(product).ess_sup == 0.0);
  CHECK(tdz::linf::certify(f, v).passes);

  const auto none = tdz::linf::decide_zero_divisor_linf(reciprocal_n());
  CHECK(none.left_zero_divisor == tdz::Tri::no);
  CHECK(none.tdz);

  const MeasurableFn g = MeasurableFn::periodic({1.0, 0.0}, {4.0});
  const auto vg = tdz::linf::decide_zero_divisor_linf(g);
  CHECK(vg.zero_divisor());
  const auto& ag = std::get<tdz::Annihilator<MeasurableFn>>(*vg.certificate);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(ag.element(n) == cd(n == 2 ? 1.0 : 0.0));
  CHECK(tdz::linf::essential_stats(tdz::linf::pointwise_product(g, ag.element)).ess_sup == 0.0);

  try {
    (void)tdz::linf::decide_zero_divisor_linf(MeasurableFn::periodic({0.0}, {0.0}));
    FAIL("expected degenerate input");
  } catch (const tdz::Error& e) {
    CHECK(e.kind() == tdz::ErrorKind::degenerate_input);
  }
}

TEST_CASE("TDZ examples and witness norms") {
  const tdz::Tolerances tol;
  const MeasurableFn f = reciprocal_n();
  const auto v = tdz::linf::decide_tdz_linf(f, tol);
  REQUIRE(v.tdz);
  CHECK_FALSE(v.regular);
  const auto& w = std::get<tdz::WitnessSequence<MeasurableFn>>(*v.certificate);
  for (std::size_t n = 1; n <= 20; ++n) {
    const MeasurableFn e = w.generator(n);
    for (std::size_t m = 1; m <= 3 * n + 5; ++m) CHECK(e(m) == cd(m > n ? 1.0 : 0.0));
  }
  const auto report = tdz::linf::certify(f, v, tol);
  CHECK(report.passes);
  for (const auto& s : report.samples) {
    CHECK(s.witness_norm == 1.0);
    CHECK(s.product_norm == doctest::Approx(1.0 / static_cast<double>(s.n + 1)).epsilon(1e-15));
  }

  const auto r = tdz::linf::decide_tdz_linf(atoms({1.0, 2.0, 3.0}), tol);
  CHECK(r.regular);
  CHECK_FALSE(r.tdz);
  const auto& bound = std::get<tdz::RegularityBound<MeasurableFn>>(*r.certificate);
  CHECK(bound.lambda0 == 1.0);
  REQUIRE(bound.inverse);
  CHECK(std::abs((*bound.inverse)(3) - 1.0 / 3.0) < 1e-15);
  CHECK(tdz::linf::certify(atoms({1.0, 2.0, 3.0}), r, tol).passes);

  const MeasurableFn z = atoms({0.0, 2.0, 3.0});
  const auto vz = tdz::linf::decide_tdz_linf(z, tol);
  REQUIRE(vz.tdz);
  const auto& wz = std::get<tdz::WitnessSequence<MeasurableFn>>(*vz.certificate);
  for (std::size_t n = 1; n <= 5; ++n) {
    const MeasurableFn e = wz.generator(n);
    CHECK(e(1) == cd(1.0));
    CHECK(e(2) == cd(0.0));
    CHECK(e(3) == cd(0.0));
  }
  CHECK(tdz::linf::certify(z, vz, tol).passes);
}

TEST_CASE("scaled decaying tail witnesses decide each tail index explicitly") {
  const MeasurableFn f = MeasurableFn::decaying({3.0}, cd(0.0, 2.5));
  for (std::size_t n : {1u, 2u, 7u}) {
    const MeasurableFn e = tdz::linf::sublevel_indicator(f, n);
    for (std::size_t m = 1; m <= 100; ++m) {
      CHECK(e(m) == cd(std::abs(f(m)) < 1.0 / static_cast<double>(n) ? 1.0 : 0.0));
    }
  }
  CHECK(tdz::linf::certify(f, tdz::linf::decide_tdz_linf(f)).passes);
}

TEST_CASE("spectrum examples") {
  using tdz::linf::ZeroClass;
  const auto a = tdz::linf::spectrum_mult(atoms({0.0, 2.0, 3.0}));
  CHECK(a.values.size() == 3);
  CHECK(has_value(a.values, 0.0));
  CHECK(has_value(a.values, 2.0));
  CHECK(has_value(a.values, 3.0));
  CHECK(a.point_values.size() == 3);
  CHECK(a.zero_class == ZeroClass::point_spectrum);

  const auto b = tdz::linf::spectrum_mult(reciprocal_n());
  CHECK(b.values.empty());
  REQUIRE(b.tail);
  CHECK(*b.tail == "{1/n : n > 0}");
  CHECK(b.zero_is_limit);
  CHECK(b.zero_class == ZeroClass::continuous_spectrum);

  const auto c = tdz::linf::spectrum_mult(MeasurableFn::periodic({}, {1.0}));
  REQUIRE(c.values.size() == 1);
  CHECK(c.values[0] == cd(1.0));
  CHECK(c.zero_class == ZeroClass::not_in_spectrum);
  CHECK(tdz::linf::to_string(c.zero_class) == "not_in_spectrum");
}

TEST_CASE("pointwise products") {
  const MeasurableFn a = tdz::linf::pointwise_product(atoms({0.0, 2.0, 3.0}), atoms({1.0, 1.0, 0.0}));
  CHECK(a(1) == cd(0.0));
  CHECK(a(2) == cd(2.0));
  CHECK(a(3) == cd(0.0));

  const MeasurableFn f = MeasurableFn::periodic({}, {2.0, 3.0});
  const MeasurableFn g = MeasurableFn::periodic({}, {1.0, 0.0, 1.0});
  const MeasurableFn fg = tdz::linf::pointwise_product(f, g);
  const auto& rep = std::get<tdz::linf::EventuallyPeriodic>(fg.representation());
  CHECK(rep.cycle.size() == 6);
  const std::vector<cd> expected{2.0, 0.0, 2.0, 3.0, 0.0, 3.0};
  for (std::size_t n = 1; n <= 12; ++n) {
    CHECK(fg(n) == f(n) * g(n));
    CHECK(fg(n) == expected[(n - 1) % 6]);
  }

  const MeasurableFn five = MeasurableFn::periodic({7.0, 7.0}, {5.0});
  const MeasurableFn t = tdz::linf::pointwise_product(reciprocal_n(), five);
  const auto& dt = std::get<tdz::linf::DecayingTail>(t.representation());
  CHECK(dt.c == cd(5.0));
  for (std::size_t n = 1; n <= 20; ++n) CHECK(std::abs(t(n) - reciprocal_n()(n) * five(n)) < 1e-15);

  CHECK(std::holds_alternative<tdz::linf::EventuallyPeriodic>(
      tdz::linf::pointwise_product(MeasurableFn::periodic({}, {0.0}), reciprocal_n()).representation()));

  try {
    (void)tdz::linf::pointwise_product(reciprocal_n(), reciprocal_n());
    FAIL("expected unsupported_product");
  } catch (const tdz::Error& e) {
    CHECK(e.kind() == tdz::ErrorKind::unsupported_product);
  }
  CHECK_THROWS_AS(tdz::linf::pointwise_product(reciprocal_n(), f), tdz::Error);
  CHECK_THROWS_AS(tdz::linf::pointwise_product(atoms({1.0}), reciprocal_n()), tdz::Error);
  CHECK_THROWS_AS(tdz::linf::pointwise_product(atoms({1.0}), MeasurableFn::finite({2.0}, {1.0})), tdz::Error);
}

TEST_CASE("property: brute-force zero divisors on small atom spaces") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_int_distribution<int> value(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<cd> f(static_cast<std::size_t>(size(rng)));
    for (cd& x : f) x = static_cast<double>(value(rng));
    const MeasurableFn fn = atoms(f);
    const bool all_zero = std::all_of(f.begin(), f.end(), [](cd x) { return x == cd{}; });
    if (all_zero) {
      CHECK_THROWS_AS(tdz::linf::decide_zero_divisor_linf(fn), tdz::Error);
      continue;
    }
    const auto v = tdz::linf::decide_zero_divisor_linf(fn);
    CHECK(v.zero_divisor() == brute_force_zero_divisor(f));
    CHECK(v.consistent());
  }
}

TEST_CASE("property: decision paths, spectra and absorption agree") {
  const tdz::Tolerances tol;
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(0, 4);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> value(-2, 2);
  const auto draw = [&](int k) {
    std::vector<cd> prefix(static_cast<std::size_t>(len(rng)));
    for (cd& x : prefix) x = cd(value(rng), value(rng));
    if (k == 0) {
      std::vector<cd> cycle(static_cast<std::size_t>(len(rng)) + 1);
      for (cd& x : cycle) x = cd(value(rng), value(rng));
      return MeasurableFn::periodic(prefix, cycle);
    }
    if (k == 1) return MeasurableFn::decaying(prefix, cd(value(rng) == 0 ? 1 : value(rng), 1));
    prefix.push_back(cd(1, 0));
    return MeasurableFn::finite(std::vector<double>(prefix.size(), 0.5), prefix);
  };
  for (int trial = 0; trial < 300; ++trial) {
    const MeasurableFn f = draw(kind(rng));
    const auto stats = tdz::linf::essential_stats(f, tol);
    const auto v = tdz::linf::decide_tdz_linf(f, tol);
    CHECK(v.consistent());
    CHECK(v.tdz == !v.regular);
    if (stats.attains_zero) CHECK(stats.zero_in_ess_range);
    const auto spec = tdz::linf::spectrum_mult(f, tol);
    CHECK((spec.zero_class == tdz::linf::ZeroClass::point_spectrum) == stats.attains_zero);
    const auto report = tdz::linf::certify(f, v, tol);
    CHECK(report.passes);

    if (v.tdz && f.on_counting_measure()) {
      // Absorption against an eventually constant periodic factor.
      const MeasurableFn g = MeasurableFn::periodic({cd(value(rng), 1)}, {cd(3, value(rng))});
      CHECK(tdz::linf::decide_tdz_linf(tdz::linf::pointwise_product(f, g), tol).tdz);
    }
  }
}
