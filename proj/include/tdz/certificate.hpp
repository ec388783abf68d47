#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tdz {

/// Which side the analysed element sits on in the vanishing product.
/// left:  x * y  (x is a left zero divisor / x x_n -> 0)
/// right: y * x  (x is a right zero divisor / x_n x -> 0)
enum class Side { left, right };

enum class Tri { yes, no, not_applicable };

std::string_view to_string(Side side);
std::string_view to_string(Tri value);

/// Symbolic norm-one sequence. generator(n) is defined for every n >= 1 so a
/// harness can probe arbitrarily deep indices.
template <class Element>
struct WitnessSequence {
  Side side = Side::left;
  std::string rule;
  std::function<Element(std::size_t)> generator;
};

/// Explicit nonzero y with x*y = 0 (side left) or y*x = 0 (side right).
template <class Element>
struct Annihilator {
  Side side = Side::left;
  std::string description;
  Element element;
};

/// |x| >= lambda0 on the relevant set (or min-modulus on the boundary);
/// the inverse is stored when it is representable.
template <class Element>
struct RegularityBound {
  double lambda0 = 0.0;
  std::optional<Element> inverse;
};

template <class Element>
using Certificate = std::variant<WitnessSequence<Element>, Annihilator<Element>, RegularityBound<Element>>;

template <class Element>
struct Verdict {
  Tri left_zero_divisor = Tri::no;
  Tri right_zero_divisor = Tri::no;
  bool tdz = false;
  bool regular = false;
  std::optional<Certificate<Element>> certificate;
  std::vector<std::string> warnings;

  bool zero_divisor() const {
    return left_zero_divisor == Tri::yes || right_zero_divisor == Tri::yes;
  }

  /// Zero divisor implies TDZ; regular excludes TDZ and both divisor flags.
  bool consistent() const {
    if (zero_divisor() && !tdz) return false;
    if (regular && (tdz || left_zero_divisor != Tri::no || right_zero_divisor != Tri::no)) return false;
    if (certificate) {
      if (const auto* bound = std::get_if<RegularityBound<Element>>(&*certificate)) {
        if (!regular || !(bound->lambda0 > 0.0)) return false;
      }
    }
    return true;
  }
};

}  // namespace tdz
