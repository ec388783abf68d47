#pragma once

#include <cstddef>

namespace tdz {

struct Tolerances {
  double eps_zero = 1e-9;    // exact-structure checks
  double eps_norm = 1e-6;    // norm estimates
  double eps_circle = 1e-8;  // | |root| - 1 | threshold
  std::size_t n_witness = 50;

  /// Throws Error(input) unless all thresholds are positive and n_witness >= 3.
  void validate() const;
};

}  // namespace tdz
