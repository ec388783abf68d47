#include "tdz/io.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "tdz/compose_lp.hpp"
#include "tdz/disk_algebra.hpp"
#include "tdz/errors.hpp"
#include "tdz/hardy.hpp"
#include "tdz/linf.hpp"
#include "tdz/mult.hpp"
#include "tdz/norms.hpp"

namespace tdz::io {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::input, msg); }

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  return v.get<double>();
}

cd complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  bad(what + " must be a number or a [re, im] pair");
}

std::vector<cd> complex_list(const json& v, const std::string& what) {
  if (!v.is_array()) bad(what + " must be an array");
  std::vector<cd> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complex_value(v[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t positive_size(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 1) bad(what + " must be a positive integer");
  return v.get<std::size_t>();
}

double exponent(const json& v) {
  if (v.is_string() && (v == "inf" || v == "infinity")) return INFINITY;
  return number(v, "p");
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

json complex_list_json(const std::vector<cd>& zs) {
  json out = json::array();
  for (const cd& z : zs) out.push_back(complex_json(z));
  return out;
}

json matrix_json(const OperatorMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json tri_json(Tri t) {
  if (t == Tri::not_applicable) return nullptr;
  return t == Tri::yes;
}

Tolerances tolerances_from(const json& request, const RunOptions& options) {
  Tolerances tol;
  if (request.contains("tolerances")) {
    const json& t = request.at("tolerances");
    if (!t.is_object()) bad("tolerances must be an object");
    if (t.contains("eps_zero")) tol.eps_zero = number(t.at("eps_zero"), "tolerances.eps_zero");
    if (t.contains("eps_norm")) tol.eps_norm = number(t.at("eps_norm"), "tolerances.eps_norm");
    if (t.contains("eps_circle")) tol.eps_circle = number(t.at("eps_circle"), "tolerances.eps_circle");
    if (t.contains("n_witness")) tol.n_witness = positive_size(t.at("n_witness"), "tolerances.n_witness");
  }
  if (options.eps_norm) tol.eps_norm = *options.eps_norm;
  if (options.n_witness) tol.n_witness = *options.n_witness;
  tol.validate();
  return tol;
}

// ---- element parsing ----

linf::MeasurableFn parse_fn(const json& obj, const std::string& where) {
  const json& space = field(obj, "space", where);
  const json& fn = field(obj, "fn", where);
  if (!fn.is_object()) bad(where + ".fn must be an object");
  if (space.is_string() && space == "counting_n") {
    const std::vector<cd> prefix =
        fn.contains("prefix") ? complex_list(fn.at("prefix"), where + ".fn.prefix") : std::vector<cd>{};
    if (fn.contains("cycle")) return linf::MeasurableFn::periodic(prefix, complex_list(fn.at("cycle"), where + ".fn.cycle"));
    if (fn.contains("decay_c")) return linf::MeasurableFn::decaying(prefix, complex_value(fn.at("decay_c"), where + ".fn.decay_c"));
    bad(where + ".fn on counting_n needs \"cycle\" or \"decay_c\"");
  }
  if (space.is_object() && space.contains("finite_atoms")) {
    const json& w = space.at("finite_atoms");
    if (!w.is_array()) bad(where + ".space.finite_atoms must be an array");
    std::vector<double> weights;
    for (const json& x : w) weights.push_back(number(x, where + ".space.finite_atoms entry"));
    return linf::MeasurableFn::finite(std::move(weights), complex_list(field(fn, "vector", where + ".fn"), where + ".fn.vector"));
  }
  bad(where + ".space must be \"counting_n\" or {\"finite_atoms\": [...]}");
}

lp::SelfMapN parse_map(const json& obj) {
  std::vector<lp::index_t> prefix;
  if (obj.contains("prefix")) {
    const json& p = obj.at("prefix");
    if (!p.is_array()) bad("phi.prefix must be an array");
    for (const json& v : p) {
      if (!v.is_number_integer()) bad("phi.prefix entries must be integers");
      prefix.push_back(v.get<lp::index_t>());
    }
  }
  if (!obj.contains("tail")) return lp::SelfMapN(std::move(prefix), lp::Shift{0});
  const json& tail = obj.at("tail");
  if (tail.is_object() && tail.contains("shift") && tail.at("shift").is_number_integer()) {
    return lp::SelfMapN(std::move(prefix), lp::Shift{tail.at("shift").get<lp::index_t>()});
  }
  if (tail.is_object() && tail.contains("divide") && tail.at("divide").is_number_integer()) {
    return lp::SelfMapN(std::move(prefix), lp::Divide{tail.at("divide").get<lp::index_t>()});
  }
  bad("phi.tail must be {\"shift\": c} or {\"divide\": k} with integer values");
}

// ---- serialization ----

json fn_json(const linf::MeasurableFn& f) {
  json out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, linf::FiniteAtoms>) {
          out["space"] = {{"finite_atoms", s.weights}};
        } else {
          out["space"] = "counting_n";
        }
      },
      f.space());
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, linf::FiniteVector>) {
          out["fn"] = {{"vector", complex_list_json(r.values)}};
        } else if constexpr (std::is_same_v<R, linf::EventuallyPeriodic>) {
          out["fn"] = {{"prefix", complex_list_json(r.prefix)}, {"cycle", complex_list_json(r.cycle)}};
        } else {
          out["fn"] = {{"prefix", complex_list_json(r.prefix)}, {"decay_c", complex_json(r.c)}};
        }
      },
      f.representation());
  return out;
}

json element_json(const disk::CirclePolynomial& p) {
  return {{"coeffs", complex_list_json({p.coeffs().begin(), p.coeffs().end()})}};
}
json element_json(const linf::MeasurableFn& f) { return fn_json(f); }
json element_json(const mult::MultOperator& m) { return {{"symbol", fn_json(m.symbol)}}; }
json element_json(const lp::LpOperator& op) { return {{"description", op.description}}; }
json element_json(const hardy::HardyOperator& op) {
  return std::visit(
      [](const auto& o) -> json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, hardy::Composition>) {
          return {{"composition_symbol", complex_list_json({o.symbol.poly().coeffs().begin(), o.symbol.poly().coeffs().end()})}};
        } else if constexpr (std::is_same_v<T, hardy::PowerRankOne>) {
          return {{"rank_one_power", {{"q", complex_list_json({o.q.coeffs().begin(), o.q.coeffs().end()})}, {"m", o.m}}}};
        } else {
          return {{"matrix", matrix_json(o.m)}};
        }
      },
      op.op);
}

template <class E>
json certificate_json(const Certificate<E>& cert, std::size_t n_witness) {
  return std::visit(
      [n_witness](const auto& c) -> json {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, WitnessSequence<E>>) {
          json head = json::array();
          for (std::size_t n = 1; n <= std::min<std::size_t>(3, n_witness); ++n) head.push_back(element_json(c.generator(n)));
          return {{"kind", "witness_sequence"}, {"side", std::string(to_string(c.side))}, {"rule", c.rule},
                  {"first_witnesses", std::move(head)}};
        } else if constexpr (std::is_same_v<C, Annihilator<E>>) {
          return {{"kind", "annihilator"}, {"side", std::string(to_string(c.side))},
                  {"description", c.description}, {"element", element_json(c.element)}};
        } else {
          json out = {{"kind", "regularity_bound"}, {"lambda0", c.lambda0}};
          out["inverse"] = c.inverse ? element_json(*c.inverse) : json(nullptr);
          return out;
        }
      },
      cert);
}

template <class E>
json verdict_json(const Verdict<E>& v, const Tolerances& tol, std::optional<std::string> zero_class = std::nullopt) {
  return {
      {"left_zd", tri_json(v.left_zero_divisor)},
      {"right_zd", tri_json(v.right_zero_divisor)},
      {"zd", v.zero_divisor()},
      {"tdz", v.tdz},
      {"regular", v.regular},
      {"zero_class", zero_class ? json(*zero_class) : json(nullptr)},
      {"certificate", v.certificate ? certificate_json(*v.certificate, tol.n_witness) : json(nullptr)},
      {"warnings", v.warnings},
  };
}

json spectrum_json(const linf::SpectrumReport& s) {
  return {
      {"values", complex_list_json(s.values)},
      {"tail", s.tail ? json(*s.tail) : json(nullptr)},
      {"zero_is_limit", s.zero_is_limit},
      {"point_values", complex_list_json(s.point_values)},
      {"point_tail", s.point_tail ? json(*s.point_tail) : json(nullptr)},
      {"zero_class", std::string(linf::to_string(s.zero_class))},
  };
}

enum class Mode { analyze, certify, section };

struct Parsed {
  Mode mode = Mode::analyze;
  std::optional<std::size_t> section_order;
};

Parsed parse_mode(const json& request) {
  Parsed p;
  if (request.contains("section") && !request.contains("mode")) p.mode = Mode::section;
  if (request.contains("mode")) {
    const json& m = request.at("mode");
    if (m == "analyze") {
      p.mode = Mode::analyze;
    } else if (m == "certify") {
      p.mode = Mode::certify;
    } else if (m == "section") {
      p.mode = Mode::section;
    } else {
      bad("mode must be \"analyze\", \"certify\" or \"section\"");
    }
  }
  if (request.contains("N")) p.section_order = positive_size(request.at("N"), "N");
  if (request.contains("section")) {
    const json& s = request.at("section");
    if (s.is_object()) {
      p.section_order = positive_size(field(s, "N", "section"), "section.N");
    } else {
      p.section_order = positive_size(s, "section");
    }
  }
  return p;
}

std::size_t require_order(const Parsed& p) {
  if (!p.section_order) bad("section mode needs an order \"N\"");
  return *p.section_order;
}

// Fills body with verdict/details/report and returns the exit code.
template <class E>
int finish(json& body, const Verdict<E>& v, const Tolerances& tol, Mode mode,
           const std::function<CertificationReport()>& run_certify, std::optional<std::string> zero_class = std::nullopt) {
  body["verdict"] = verdict_json(v, tol, std::move(zero_class));
  if (mode != Mode::certify) return kExitOk;
  const CertificationReport report = run_certify();
  body["report"] = to_json(report);
  return report.passes ? kExitOk : kExitVerification;
}

int run_disk(const json& req, const Parsed& mode, const Tolerances& tol, json& body) {
  if (mode.mode == Mode::section) bad("section mode is not available for the disk algebra");
  const auto p = disk::CirclePolynomial::normalized(complex_list(field(req, "coeffs", "disk request"), "coeffs"), tol.eps_zero);
  const auto v = disk::decide_tdz_disk(p, tol);
  const auto zeros = disk::circle_zeros(p, tol);
  body["details"] = {{"degree", p.degree()},
                     {"sup_norm", zeros.sup_norm},
                     {"min_modulus_on_circle", zeros.residual_min},
                     {"circle_zeros", complex_list_json(zeros.zeros)}};
  return finish(body, v, tol, mode.mode, [&] { return disk::certify(p, v, tol); });
}

int run_linf(const json& req, const Parsed& mode, const Tolerances& tol, json& body) {
  if (mode.mode == Mode::section) bad("section mode is not available for the L-infinity algebra");
  const auto f = parse_fn(req, "linf request");
  const auto a = linf::analyze(f, tol);
  body["details"] = {{"ess_sup", a.stats.ess_sup},
                     {"min_modulus", a.stats.min_modulus.value},
                     {"min_modulus_is_limit", a.stats.min_modulus.is_limit},
                     {"spectrum", spectrum_json(a.spectrum)}};
  return finish(body, a.verdict, tol, mode.mode, [&] { return linf::certify(f, a.verdict, tol); },
                std::string(linf::to_string(a.spectrum.zero_class)));
}

int run_mult(const json& req, const Parsed& mode, const Tolerances& tol, json& body) {
  const mult::MultOperatorSpec op{parse_fn(field(req, "h", "mult request"), "h"),
                                  req.contains("p") ? exponent(req.at("p")) : 2.0};
  op.validate();
  if (mode.mode == Mode::section) {
    const std::size_t n = require_order(mode);
    const OperatorMatrix s = mult::finite_section_mult(op, n);
    body["section"] = {{"N", n}, {"matrix", matrix_json(s)}, {"operator_norm", operator_norm(s, tol)}};
    return kExitOk;
  }
  const auto a = mult::analyze_mult(op, tol);
  body["details"] = {{"p", std::isinf(op.p) ? json("inf") : json(op.p)}, {"spectrum", spectrum_json(a.spectrum)}};
  return finish(body, a.verdict, tol, mode.mode, [&] { return mult::certify(op, a.verdict, tol); },
                std::string(linf::to_string(a.spectrum.zero_class)));
}

int run_lp(const json& req, const Parsed& mode, const Tolerances& tol, json& body) {
  const lp::CompositionOperatorSpec spec{parse_map(field(req, "phi", "compose_lp request")),
                                         req.contains("p") ? exponent(req.at("p")) : 2.0};
  spec.validate();
  if (mode.mode == Mode::section) {
    const std::size_t n = require_order(mode);
    const auto r = lp::adjoint_rn_check(spec, n, tol);
    body["section"] = {{"N", n},
                       {"matrix", matrix_json(lp::finite_section_composition(spec, n))},
                       {"stabilized_block", r.block},
                       {"adjoint_identity_max_abs_diff", r.max_abs_diff},
                       {"adjoint_identity_holds", r.identity_holds},
                       {"formula_norm", r.formula_norm},
                       {"section_norm", r.section_norm},
                       {"norm_agrees", r.norm_agrees},
                       {"rn_route_tdz", r.rn_route_tdz},
                       {"routes_agree", r.routes_agree}};
    return kExitOk;
  }
  const auto status = lp::divisor_status(spec, tol);
  const auto& pr = status.properties;
  json props = {{"injective", pr.injective}, {"surjective", pr.surjective}, {"invertible", pr.invertible}};
  props["collision"] = pr.collision ? json::array({pr.collision->first, pr.collision->second}) : json(nullptr);
  props["missed_value"] = pr.missed_value ? json(*pr.missed_value) : json(nullptr);
  body["details"] = {{"map_properties", props},
                     {"norm", lp::composition_norm(spec)},
                     {"max_preimage_count", lp::max_preimage_count(spec.phi)}};
  return finish(body, status.verdict, tol, mode.mode, [&] { return lp::certify(spec, status, tol); });
}

int run_hardy(const json& req, const Parsed& mode, const Tolerances& tol, json& body) {
  const json& sym = field(req, "symbol", "compose_hardy request");
  const auto phi = hardy::PolySymbol::make(
      disk::CirclePolynomial::normalized(complex_list(field(sym, "coeffs", "symbol"), "symbol.coeffs"), tol.eps_zero), tol);
  std::size_t order = req.contains("order") ? positive_size(req.at("order"), "order") : 16;
  if (mode.mode == Mode::section) {
    order = require_order(mode);
    std::vector<std::string> warnings;
    const OperatorMatrix c = hardy::composition_matrix(phi, order, tol, &warnings);
    const auto s = hardy::right_zero_divisor_finite(c, tol);
    json range = nullptr;
    if (s) range = {{"annihilator", matrix_json(s->element)}, {"product_norm", operator_norm(s->element * c, tol)}};
    body["section"] = {{"N", order},
                       {"matrix", matrix_json(c)},
                       {"smallest_singular_value", smallest_singular_value(c)},
                       {"range_deficient", range},
                       {"warnings", warnings}};
    return kExitOk;
  }
  const auto a = hardy::analyze_symbol(phi, order, tol);
  body["details"] = {{"symbol_class", a.symbol_class},
                     {"sup_on_circle", a.sup_on_circle},
                     {"order", order},
                     {"smallest_singular_value", a.rank.smallest_singular_value},
                     {"full_rank", a.rank.full_rank},
                     {"left_annihilator", a.left ? json(a.left->description) : json(nullptr)},
                     {"right_annihilator", a.right ? json(a.right->description) : json(nullptr)}};
  return finish(body, a.verdict, tol, mode.mode, [&] { return hardy::certify(phi, a, tol); });
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numeric:
      return kExitInternal;
    case ErrorKind::certificate_malformed:
      return kExitVerification;
    default:
      return kExitInput;
  }
}

RunResult failure(int code, const std::string& kind, const std::string& message) {
  RunResult r;
  r.exit_code = code;
  r.diagnostic = kind + ": " + message;
  r.body = {{"error", {{"kind", kind}, {"message", message}}}};
  return r;
}

}  // namespace

RunResult run_request(const json& request, const RunOptions& options) {
  try {
    if (!request.is_object()) bad("request must be a JSON object");
    const Tolerances tol = tolerances_from(request, options);
    const Parsed mode = parse_mode(request);
    std::string tag;
    if (request.contains("algebra")) {
      if (!request.at("algebra").is_string()) bad("algebra must be a string");
      tag = request.at("algebra").get<std::string>();
    } else if (request.contains("operator")) {
      if (!request.at("operator").is_string()) bad("operator must be a string");
      tag = request.at("operator").get<std::string>();
    } else {
      bad("request needs an \"algebra\" or \"operator\" tag");
    }
    RunResult result;
    json& body = result.body;
    body["request"] = {{"tag", tag},
                       {"mode", mode.mode == Mode::analyze ? "analyze" : mode.mode == Mode::certify ? "certify" : "section"}};
    body["tolerances"] = {{"eps_zero", tol.eps_zero}, {"eps_norm", tol.eps_norm},
                          {"eps_circle", tol.eps_circle}, {"n_witness", tol.n_witness}};
    if (tag == "disk") {
      result.exit_code = run_disk(request, mode, tol, body);
    } else if (tag == "linf") {
      result.exit_code = run_linf(request, mode, tol, body);
    } else if (tag == "mult") {
      result.exit_code = run_mult(request, mode, tol, body);
    } else if (tag == "compose_lp") {
      result.exit_code = run_lp(request, mode, tol, body);
    } else if (tag == "compose_hardy") {
      result.exit_code = run_hardy(request, mode, tol, body);
    } else {
      bad("unknown tag \"" + tag + "\" (expected disk, linf, mult, compose_lp or compose_hardy)");
    }
    if (result.exit_code == kExitVerification) result.diagnostic = "certification failed";
    return result;
  } catch (const Error& e) {
    return failure(exit_code_for(e.kind()), std::string(to_string(e.kind())), e.what());
  } catch (const json::exception& e) {
    return failure(kExitInput, "input", e.what());
  } catch (const std::exception& e) {
    return failure(kExitInternal, "internal", e.what());
  }
}

RunResult run_text(std::string_view text, const RunOptions& options) {
  json request;
  try {
    request = json::parse(text);
  } catch (const json::parse_error& e) {
    return failure(kExitInput, "malformed_json",
                   std::string("invalid JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return run_request(request, options);
}

}  // namespace tdz::io
