#include "tdz/tolerances.hpp"

#include <cmath>
#include <string>

#include "tdz/errors.hpp"

namespace tdz {

namespace {
void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::input, std::string(name) + " must be a finite positive number");
  }
}
}  // namespace

void Tolerances::validate() const {
  require_positive(eps_zero, "eps_zero");
  require_positive(eps_norm, "eps_norm");
  require_positive(eps_circle, "eps_circle");
  if (n_witness < 3) throw Error(ErrorKind::input, "n_witness must be at least 3");
}

}  // namespace tdz
