#include "tdz/linf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tdz/errors.hpp"

namespace tdz::linf {

namespace {

constexpr std::size_t kMaxCycle = std::size_t{1} << 20;

bool is_finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(const std::vector<cd>& values, const char* what) {
  for (const cd& v : values) {
    if (!is_finite(v)) throw Error(ErrorKind::input, std::string(what) + " values must be finite");
  }
}

std::string format_complex(cd z) {
  std::ostringstream os;
  os.precision(12);
  if (z.imag() == 0.0) {
    os << z.real();
  } else {
    os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
  }
  return os.str();
}

// Every explicitly listed value: the atoms, or prefix plus cycle.
std::vector<cd> listed_values(const MeasurableFn& f) {
  return std::visit(
      [](const auto& rep) -> std::vector<cd> {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FiniteVector>) {
          return rep.values;
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          std::vector<cd> all(rep.prefix);
          all.insert(all.end(), rep.cycle.begin(), rep.cycle.end());
          return all;
        } else {
          return rep.prefix;
        }
      },
      f.representation());
}

bool same_space(const AtomicSpace& a, const AtomicSpace& b) {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<FiniteAtoms>(&a)) return fa->weights == std::get<FiniteAtoms>(b).weights;
  return true;
}

template <class Pred>
std::vector<cd> indicator_of(const std::vector<cd>& values, Pred pred) {
  std::vector<cd> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = pred(values[i]) ? 1.0 : 0.0;
  return out;
}

MeasurableFn periodic_product(const MeasurableFn& f, const MeasurableFn& g, std::size_t n, std::size_t period) {
  std::vector<cd> prefix(n);
  for (std::size_t i = 1; i <= n; ++i) prefix[i - 1] = f(i) * g(i);
  std::vector<cd> cycle(period);
  for (std::size_t j = 0; j < period; ++j) cycle[j] = f(n + 1 + j) * g(n + 1 + j);
  return MeasurableFn::periodic(std::move(prefix), std::move(cycle));
}

MeasurableFn decaying_times_periodic(const MeasurableFn& f, const DecayingTail& ft, const MeasurableFn& g,
                                     const EventuallyPeriodic& gp) {
  const cd k = gp.cycle.front();
  if (std::any_of(gp.cycle.begin(), gp.cycle.end(), [&](cd v) { return v != k; })) {
    throw Error(ErrorKind::unsupported_product,
                "a decaying tail times a periodic factor with a non-constant cycle has no closed representation");
  }
  const std::size_t n = std::max(ft.prefix.size(), gp.prefix.size());
  std::vector<cd> prefix(n);
  for (std::size_t i = 1; i <= n; ++i) prefix[i - 1] = f(i) * g(i);
  if (k == cd{}) return MeasurableFn::periodic(std::move(prefix), {cd{}});
  return MeasurableFn::decaying(std::move(prefix), ft.c * k);
}

}  // namespace

MeasurableFn::MeasurableFn(AtomicSpace space, Representation values) : space_(std::move(space)), values_(std::move(values)) {
  if (const auto* atoms = std::get_if<FiniteAtoms>(&space_)) {
    if (atoms->weights.empty()) throw Error(ErrorKind::input, "a finite atomic space needs at least one atom");
    for (double w : atoms->weights) {
      if (!std::isfinite(w) || !(w > 0.0)) throw Error(ErrorKind::input, "atom weights must be positive and finite");
    }
    const auto* vec = std::get_if<FiniteVector>(&values_);
    if (vec == nullptr) throw Error(ErrorKind::input, "finite atoms require a value vector");
    if (vec->values.size() != atoms->weights.size()) {
      throw Error(ErrorKind::input, "value vector length " + std::to_string(vec->values.size()) +
                                        " does not match atom count " + std::to_string(atoms->weights.size()));
    }
    require_finite(vec->values, "vector");
    return;
  }
  if (std::holds_alternative<FiniteVector>(values_)) {
    throw Error(ErrorKind::input, "the counting measure on N requires a periodic or decaying-tail sequence");
  }
  if (const auto* ep = std::get_if<EventuallyPeriodic>(&values_)) {
    if (ep->cycle.empty()) throw Error(ErrorKind::input, "cycle must be nonempty");
    require_finite(ep->prefix, "prefix");
    require_finite(ep->cycle, "cycle");
  } else {
    const auto& dt = std::get<DecayingTail>(values_);
    require_finite(dt.prefix, "prefix");
    if (!is_finite(dt.c) || dt.c == cd{}) throw Error(ErrorKind::input, "decay constant must be finite and nonzero");
  }
}

MeasurableFn MeasurableFn::finite(std::vector<double> weights, std::vector<cd> values) {
  return MeasurableFn(FiniteAtoms{std::move(weights)}, FiniteVector{std::move(values)});
}

MeasurableFn MeasurableFn::periodic(std::vector<cd> prefix, std::vector<cd> cycle) {
  return MeasurableFn(CountingN{}, EventuallyPeriodic{std::move(prefix), std::move(cycle)});
}

MeasurableFn MeasurableFn::decaying(std::vector<cd> prefix, cd c) {
  return MeasurableFn(CountingN{}, DecayingTail{std::move(prefix), c});
}

cd MeasurableFn::operator()(std::size_t n) const {
  if (n == 0) throw Error(ErrorKind::input, "indices start at 1");
  return std::visit(
      [n](const auto& rep) -> cd {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FiniteVector>) {
          if (n > rep.values.size()) throw Error(ErrorKind::input, "atom index out of range");
          return rep.values[n - 1];
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          if (n <= rep.prefix.size()) return rep.prefix[n - 1];
          return rep.cycle[(n - rep.prefix.size() - 1) % rep.cycle.size()];
        } else {
          if (n <= rep.prefix.size()) return rep.prefix[n - 1];
          return rep.c / static_cast<double>(n);
        }
      },
      values_);
}

std::size_t MeasurableFn::prefix_length() const noexcept {
  return std::visit(
      [](const auto& rep) -> std::size_t {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FiniteVector>) {
          return rep.values.size();
        } else {
          return rep.prefix.size();
        }
      },
      values_);
}

EssentialStats essential_stats(const MeasurableFn& f, const Tolerances& tol) {
  EssentialStats s;
  const std::vector<cd> values = listed_values(f);
  double low = INFINITY;
  for (const cd& v : values) {
    const double m = std::abs(v);
    s.ess_sup = std::max(s.ess_sup, m);
    low = std::min(low, m);
    if (m <= tol.eps_zero) s.attains_zero = true;
  }
  if (const auto* dt = std::get_if<DecayingTail>(&f.representation())) {
    s.ess_sup = std::max(s.ess_sup, std::abs(dt->c) / static_cast<double>(dt->prefix.size() + 1));
    s.zero_in_ess_range = true;
    s.min_modulus = s.attains_zero ? MinModulus{low, false} : MinModulus{0.0, true};
  } else {
    s.zero_in_ess_range = s.attains_zero;
    s.min_modulus = {low, false};
  }
  return s;
}

MeasurableFn zero_set_indicator(const MeasurableFn& f, const Tolerances& tol) {
  const auto is_zero = [&](cd v) { return std::abs(v) <= tol.eps_zero; };
  return std::visit(
      [&](const auto& rep) -> MeasurableFn {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FiniteVector>) {
          return MeasurableFn(f.space(), FiniteVector{indicator_of(rep.values, is_zero)});
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          return MeasurableFn::periodic(indicator_of(rep.prefix, is_zero), indicator_of(rep.cycle, is_zero));
        } else {
          return MeasurableFn::periodic(indicator_of(rep.prefix, is_zero), {0.0});
        }
      },
      f.representation());
}

MeasurableFn sublevel_indicator(const MeasurableFn& f, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::input, "sublevel index must be positive");
  const double level = 1.0 / static_cast<double>(n);
  const auto below = [level](cd v) { return std::abs(v) < level; };
  return std::visit(
      [&](const auto& rep) -> MeasurableFn {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FiniteVector>) {
          return MeasurableFn(f.space(), FiniteVector{indicator_of(rep.values, below)});
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          return MeasurableFn::periodic(indicator_of(rep.prefix, below), indicator_of(rep.cycle, below));
        } else {
          // |c|/m < 1/n for every m > n|c| + 1; indices up to that point are
          // decided one at a time.
          const double cut = std::ceil(static_cast<double>(n) * std::abs(rep.c)) + 1.0;
          const std::size_t last = std::max(rep.prefix.size(), static_cast<std::size_t>(cut));
          std::vector<cd> prefix(last);
          for (std::size_t m = 1; m <= last; ++m) prefix[m - 1] = below(f(m)) ? 1.0 : 0.0;
          return MeasurableFn::periodic(std::move(prefix), {1.0});
        }
      },
      f.representation());
}

Verdict<MeasurableFn> decide_zero_divisor_linf(const MeasurableFn& f, const Tolerances& tol) {
  tol.validate();
  const EssentialStats s = essential_stats(f, tol);
  if (!std::holds_alternative<DecayingTail>(f.representation()) && s.ess_sup <= tol.eps_zero) {
    throw Error(ErrorKind::degenerate_input, "identically zero function is the trivial zero divisor");
  }
  Verdict<MeasurableFn> v;
  v.left_zero_divisor = v.right_zero_divisor = s.attains_zero ? Tri::yes : Tri::no;
  v.tdz = s.zero_in_ess_range;
  v.regular = !v.tdz;
  if (s.attains_zero) {
    v.certificate = Annihilator<MeasurableFn>{Side::left, "g = indicator of the zero set {x : f(x) = 0}",
                                              zero_set_indicator(f, tol)};
  }
  return v;
}

Verdict<MeasurableFn> decide_tdz_linf(const MeasurableFn& f, const Tolerances& tol) {
  tol.validate();
  const EssentialStats s = essential_stats(f, tol);
  Verdict<MeasurableFn> v;
  v.left_zero_divisor = v.right_zero_divisor = s.attains_zero ? Tri::yes : Tri::no;
  v.tdz = s.zero_in_ess_range;
  v.regular = !v.tdz;
  if (v.tdz) {
    v.certificate = WitnessSequence<MeasurableFn>{Side::left, "x_n = indicator of E_n = {x : |f(x)| < 1/n}",
                                                  [f](std::size_t n) { return sublevel_indicator(f, n); }};
  } else {
    v.certificate = RegularityBound<MeasurableFn>{s.min_modulus.value, reciprocal(f)};
  }
  return v;
}

std::string_view to_string(ZeroClass zc) {
  switch (zc) {
    case ZeroClass::not_in_spectrum:
      return "not_in_spectrum";
    case ZeroClass::point_spectrum:
      return "point_spectrum";
    case ZeroClass::continuous_spectrum:
      return "continuous_spectrum";
  }
  return "unknown";
}

SpectrumReport spectrum_mult(const MeasurableFn& h, const Tolerances& tol) {
  SpectrumReport r;
  for (cd v : listed_values(h)) {
    if (std::abs(v) <= tol.eps_zero) v = 0.0;
    const bool seen = std::any_of(r.values.begin(), r.values.end(), [&](cd w) { return std::abs(w - v) <= tol.eps_zero; });
    if (!seen) r.values.push_back(v);
  }
  // Every atom carries positive mass, so attained values are eigenvalues.
  r.point_values = r.values;
  const EssentialStats s = essential_stats(h, tol);
  if (const auto* dt = std::get_if<DecayingTail>(&h.representation())) {
    r.tail = "{" + format_complex(dt->c) + "/n : n > " + std::to_string(dt->prefix.size()) + "}";
    r.point_tail = r.tail;
    r.zero_is_limit = true;
  }
  if (s.attains_zero) {
    r.zero_class = ZeroClass::point_spectrum;
  } else if (s.zero_in_ess_range) {
    r.zero_class = ZeroClass::continuous_spectrum;
  }
  return r;
}

MeasurableFn pointwise_product(const MeasurableFn& f, const MeasurableFn& g) {
  if (!same_space(f.space(), g.space())) throw Error(ErrorKind::input, "factors live on different measure spaces");
  const auto& fr = f.representation();
  const auto& gr = g.representation();
  if (const auto* fv = std::get_if<FiniteVector>(&fr)) {
    const auto& gv = std::get<FiniteVector>(gr);
    std::vector<cd> out(fv->values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fv->values[i] * gv.values[i];
    return MeasurableFn(f.space(), FiniteVector{std::move(out)});
  }
  const auto* fp = std::get_if<EventuallyPeriodic>(&fr);
  const auto* gp = std::get_if<EventuallyPeriodic>(&gr);
  if (fp != nullptr && gp != nullptr) {
    const std::size_t period = std::lcm(fp->cycle.size(), gp->cycle.size());
    if (period > kMaxCycle) throw Error(ErrorKind::unsupported_product, "product cycle length exceeds the supported size");
    return periodic_product(f, g, std::max(fp->prefix.size(), gp->prefix.size()), period);
  }
  if (const auto* ft = std::get_if<DecayingTail>(&fr); ft != nullptr && gp != nullptr) {
    return decaying_times_periodic(f, *ft, g, *gp);
  }
  if (const auto* gt = std::get_if<DecayingTail>(&gr); gt != nullptr && fp != nullptr) {
    return decaying_times_periodic(g, *gt, f, *fp);
  }
  throw Error(ErrorKind::unsupported_product, "the product of two decaying tails decays like 1/n^2");
}

MeasurableFn reciprocal(const MeasurableFn& f) {
  const auto invert = [](const std::vector<cd>& values) {
    std::vector<cd> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == cd{}) throw Error(ErrorKind::input, "cannot invert a function that vanishes");
      out[i] = 1.0 / values[i];
    }
    return out;
  };
  return std::visit(
      [&](const auto& rep) -> MeasurableFn {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FiniteVector>) {
          return MeasurableFn(f.space(), FiniteVector{invert(rep.values)});
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          return MeasurableFn::periodic(invert(rep.prefix), invert(rep.cycle));
        } else {
          throw Error(ErrorKind::input, "a decaying tail has an unbounded reciprocal");
        }
      },
      f.representation());
}

double distance_from_one(const MeasurableFn& f) {
  double worst = 0.0;
  for (const cd& v : listed_values(f)) worst = std::max(worst, std::abs(v - 1.0));
  if (const auto* dt = std::get_if<DecayingTail>(&f.representation())) {
    // |w - 1| is convex along the segment from c/(N+1) to 0.
    const cd first = dt->c / static_cast<double>(dt->prefix.size() + 1);
    worst = std::max({worst, 1.0, std::abs(first - 1.0)});
  }
  return worst;
}

LinfAnalysis analyze(const MeasurableFn& f, const Tolerances& tol) {
  LinfAnalysis a;
  a.stats = essential_stats(f, tol);
  a.spectrum = spectrum_mult(f, tol);
  const Verdict<MeasurableFn> zd = decide_zero_divisor_linf(f, tol);
  a.verdict = decide_tdz_linf(f, tol);
  if (zd.certificate) a.verdict.certificate = zd.certificate;
  return a;
}

CertificationReport certify(const MeasurableFn& f, const Verdict<MeasurableFn>& verdict, const Tolerances& tol) {
  if (!verdict.certificate) return vacuous_report("verdict carries no certificate");
  const LinfAlgebra algebra{tol};
  return std::visit(
      [&](const auto& cert) -> CertificationReport {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, WitnessSequence<MeasurableFn>>) {
          return verify_tdz_certificate(algebra, f, cert, tol);
        } else if constexpr (std::is_same_v<T, Annihilator<MeasurableFn>>) {
          return verify_annihilator(algebra, f, cert, tol);
        } else {
          // Independent estimate: evaluate f index by index over one full period.
          std::size_t span = f.prefix_length();
          if (const auto* ep = std::get_if<EventuallyPeriodic>(&f.representation())) span += ep->cycle.size();
          double low = INFINITY;
          for (std::size_t n = 1; n <= span; ++n) low = std::min(low, std::abs(f(n)));
          std::optional<double> defect;
          if (cert.inverse) defect = distance_from_one(pointwise_product(f, *cert.inverse));
          return verify_regularity_bound(cert.lambda0, low, defect, tol);
        }
      },
      *verdict.certificate);
}

}  // namespace tdz::linf
