#pragma once

#include "charvar/groebner.hpp"

#include <ostream>
#include <string>
#include <vector>

// Hand-derived reduced bases, each checked once against sympy.
namespace charvar::testing {

struct Case {
  const char* name;
  std::vector<std::string> vars;
  MonomialOrder order;
  std::vector<std::string> gens;
  std::vector<std::string> expected;  // reduced, increasing leading monomial
};

inline void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

inline std::vector<QPolynomial> parse_all(const std::vector<std::string>& texts, const RingPtr& ring) {
  std::vector<QPolynomial> out;
  for (const auto& t : texts) out.push_back(parse_polynomial(t, ring));
  return out;
}

inline const std::vector<Case>& hand_cases() {
  static const std::vector<Case> cases = {
      {"circle_line", {"x", "y"}, MonomialOrder::lex(), {"x^2 + y^2 - 1", "x - y"}, {"2*y^2 - 1", "x - y"}},
      {"hyperbola", {"x", "y"}, MonomialOrder::lex(), {"x*y - 1", "y^2 - 1"}, {"y^2 - 1", "x - y"}},
      {"twisted_cubic",
       {"x", "y", "z"},
       MonomialOrder::lex(),
       {"x^2 - y", "x^3 - z"},
       {"y^3 - z^2", "x*z - y^2", "x*y - z", "x^2 - y"}},
      {"diagonal_sphere",
       {"x", "y", "z"},
       MonomialOrder::grevlex(),
       {"x^2 + y^2 + z^2 - 1", "x - y", "y - z"},
       {"y - z", "x - z", "3*z^2 - 1"}},
      {"cubic_syzygy", {"x", "y"}, MonomialOrder::grevlex(), {"x^2 - y^2", "x*y"}, {"x*y", "x^2 - y^2", "y^3"}},
      {"monomial", {"x", "y"}, MonomialOrder::grevlex(), {"x^2", "x*y"}, {"x*y", "x^2"}},
      {"unit", {"x", "y"}, MonomialOrder::grevlex(), {"x", "x - 1"}, {"1"}},
      {"textbook_grevlex",
       {"x", "y"},
       MonomialOrder::grevlex(),
       {"x^3 - 2*x*y", "x^2*y - 2*y^2 + x"},
       {"2*y^2 - x", "x*y", "x^2"}},
      {"textbook_lex", {"x", "y"}, MonomialOrder::lex(), {"x^3 - 2*x*y", "x^2*y - 2*y^2 + x"}, {"y^3", "x - 2*y^2"}},
      {"block_single", {"x", "s"}, MonomialOrder::block(1), {"s*x - 1"}, {"x*s - 1"}},
      {"block_power", {"x", "s"}, MonomialOrder::block(1), {"x^2 - s"}, {"x^2 - s"}},
      {"block_substitution",
       {"x", "y", "s"},
       MonomialOrder::block(2),
       {"x - s^2", "x^2 - y"},
       {"y - s^4", "x - s^2"}},
      {"block_eliminable",
       {"x", "y", "s"},
       MonomialOrder::block(2),
       {"x^2 - s", "y - s^3"},
       {"y - s^3", "x^2 - s"}},
      {"duplicate_and_zero", {"x", "y"}, MonomialOrder::grevlex(), {"x - y", "0", "2*x - 2*y"}, {"x - y"}},
  };
  return cases;
}

}  // namespace charvar::testing
