#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tdz {

enum class ErrorKind {
  input,
  numeric,
  certificate_malformed,
  degenerate_input,
  not_a_root,
  unsupported_product,
  invalid_symbol,
  composition_unrepresentable,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by iterative solvers that hit their iteration cap. Carries the
/// last iterate so callers can inspect how far the solver got.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate,
                   std::vector<std::complex<double>> last_iterate);

  double last_estimate() const noexcept { return last_estimate_; }
  const std::vector<std::complex<double>>& last_iterate() const noexcept { return last_iterate_; }

 private:
  double last_estimate_;
  std::vector<std::complex<double>> last_iterate_;
};

}  // namespace tdz
