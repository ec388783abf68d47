#include "tdz/errors.hpp"

#include <utility>

namespace tdz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::certificate_malformed: return "certificate_malformed";
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::not_a_root: return "not_a_root";
    case ErrorKind::unsupported_product: return "unsupported_product";
    case ErrorKind::invalid_symbol: return "invalid_symbol";
    case ErrorKind::composition_unrepresentable: return "composition_unrepresentable";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

ConvergenceError::ConvergenceError(const std::string& what, double last_estimate,
                                   std::vector<std::complex<double>> last_iterate)
    : Error(ErrorKind::numeric, what),
      last_estimate_(last_estimate),
      last_iterate_(std::move(last_iterate)) {}

}  // namespace tdz
