#include "tdz/harness.hpp"

#include <algorithm>
#include <sstream>

#include "tdz/norms.hpp"

namespace tdz {

std::string_view to_string(Side side) { return side == Side::left ? "left" : "right"; }

std::string_view to_string(Tri value) {
  switch (value) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

nlohmann::json to_json(const CertificationReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"n", s.n}, {"witness_norm", s.witness_norm}, {"product_norm", s.product_norm}});
  }
  return {
      {"passes", report.passes},
      {"side", report.side ? nlohmann::json(std::string(to_string(*report.side))) : nlohmann::json(nullptr)},
      {"samples", std::move(samples)},
      {"criterion", report.criterion},
  };
}

std::string witness_decay_criterion() {
  return "witness-decay: | ||x_n|| - 1 | <= eps_norm for all n; product(n_witness) < "
         "max(eps_norm, product(1)/2); 3-window means non-increasing (decay convention, not a theorem)";
}

bool witness_decay_passes(std::span<const WitnessSample> samples, const Tolerances& tol) {
  if (samples.size() < 3) return false;
  for (const auto& s : samples) {
    if (std::abs(s.witness_norm - 1.0) > tol.eps_norm) return false;
  }
  const double first = samples.front().product_norm;
  const double last = samples.back().product_norm;
  if (!(last < std::max(tol.eps_norm, first / 2.0))) return false;

  double previous = 0.0;
  for (std::size_t i = 0; i + 2 < samples.size(); ++i) {
    const double mean =
        (samples[i].product_norm + samples[i + 1].product_norm + samples[i + 2].product_norm) / 3.0;
    if (i > 0 && mean > previous + tol.eps_norm) return false;
    previous = mean;
  }
  return true;
}

CertificationReport verify_regularity_bound(double lambda0, double min_modulus_estimate,
                                            std::optional<double> inverse_defect, const Tolerances& tol) {
  tol.validate();
  CertificationReport report;
  report.passes = lambda0 > 0.0 && min_modulus_estimate >= lambda0 - tol.eps_norm;
  std::ostringstream os;
  os.precision(17);
  os << "regularity-bound: lambda0 > 0 and independent min-modulus estimate >= lambda0 - eps_norm; lambda0="
     << lambda0 << ", estimate=" << min_modulus_estimate;
  if (inverse_defect) {
    report.passes = report.passes && *inverse_defect <= tol.eps_norm;
    os << "; ||x*inverse - 1|| = " << *inverse_defect << " (<= eps_norm required)";
  }
  report.criterion = os.str();
  return report;
}

CertificationReport vacuous_report(const std::string& reason) {
  CertificationReport report;
  report.passes = true;
  report.criterion = "no certificate: " + reason;
  return report;
}

StarInequalityReport star_tdz_inequality_check(const OperatorMatrix& t, std::span<const OperatorMatrix> witnesses,
                                               const Tolerances& tol) {
  tol.validate();
  if (!t.is_square()) throw Error(ErrorKind::input, "T must be square");
  const OperatorMatrix t_star = t.adjoint();
  const OperatorMatrix gram = t_star * t;
  StarInequalityReport report;
  report.holds = true;
  for (const auto& w : witnesses) {
    if (w.rows() != t.cols()) throw Error(ErrorKind::input, "witness shape does not conform with T");
    StarInequalityEntry e;
    e.witness_norm = operator_norm(w, tol);
    if (std::abs(e.witness_norm - 1.0) > tol.eps_norm) {
      throw Error(ErrorKind::input, "witness does not have operator norm 1");
    }
    const OperatorMatrix product = t * w;
    e.product_norm = operator_norm(product, tol);
    e.star_product_norm = operator_norm(gram * w, tol);
    e.adjoint_product_norm = operator_norm(product.adjoint(), tol);
    const bool squared = e.product_norm * e.product_norm <= e.star_product_norm * e.witness_norm + tol.eps_norm;
    const bool adjoint = std::abs(e.adjoint_product_norm - e.product_norm) <= tol.eps_norm * std::max(1.0, e.product_norm);
    e.holds = squared && adjoint;
    report.holds = report.holds && e.holds;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace tdz
