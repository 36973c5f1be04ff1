#pragma once

#include "charvar/json_io.hpp"
#include "charvar/presentation.hpp"
#include "charvar/trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace charvar {

class UnsupportedRank : public std::invalid_argument {
 public:
  explicit UnsupportedRank(std::size_t rank)
      : std::invalid_argument("rank " + std::to_string(rank) + " is not supported (defining equations need rank <= 3)") {}
};

/// Generators of the ideal of the character variety in the trace
/// coordinates, optionally with the slope coordinate s appended last.
struct VarietyIdeal {
  std::size_t rank = 0;
  Alphabet alphabet;
  RingPtr ring;
  std::vector<QPolynomial> generators;
  std::optional<Word> slope_word;
  std::vector<std::string> warnings;

  bool has_slope() const { return slope_word.has_value(); }
  const std::vector<std::string>& coordinates() const { return ring->names; }
  std::size_t slope_index() const {
    if (!has_slope()) throw std::logic_error("ideal has no slope coordinate");
    return ring->nvars() - 1;
  }
};

/// Relations among the coordinates of a free group: none for rank <= 2, the
/// monic quadratic in v for rank 3.
inline std::vector<QPolynomial> free_group_relations(std::size_t n, ReductionEngine& engine) {
  if (n < 1) throw std::invalid_argument("rank must be at least 1");
  if (n > 3) throw UnsupportedRank(n);
  if (engine.rank() != n) throw std::invalid_argument("engine rank differs");
  if (n < 3) return {};
  return {engine.free_group_relation(1, 2, 3)};
}

/// tr r - 2 and tr(g_i r) - tr(g_i) for every relator r and generator g_i,
/// with zero polynomials dropped.
inline std::vector<QPolynomial> relator_equations(const GroupPresentation& p, ReductionEngine& engine) {
  if (engine.rank() != p.rank()) throw std::invalid_argument("engine rank differs from presentation rank");
  std::vector<QPolynomial> out;
  auto keep = [&](QPolynomial f) {
    if (!f.is_zero()) out.push_back(std::move(f));
  };
  const QPolynomial two = QPolynomial::constant(engine.ring(), 2);
  for (const Word& r : p.relators) {
    keep(engine.reduce(r) - two);
    for (std::uint32_t g = 1; g <= p.rank(); ++g) {
      Word gen(p.rank());
      gen.push_back(Letter(g, 1));
      keep(engine.reduce(concat(gen, r)) - engine.reduce(gen));
    }
  }
  return out;
}

/// Free-group relations followed by the relator equations, each integer
/// primitive with positive leading coefficient. Duplicates are kept.
inline VarietyIdeal variety_ideal(const GroupPresentation& p, ReductionEngine& engine) {
  if (p.rank() > 3) throw UnsupportedRank(p.rank());
  VarietyIdeal v;
  v.rank = p.rank();
  v.alphabet = p.alphabet;
  v.ring = engine.ring();
  for (auto& f : free_group_relations(p.rank(), engine)) v.generators.push_back(primitive_part(f));
  for (auto& f : relator_equations(p, engine)) v.generators.push_back(primitive_part(f));
  return v;
}

inline VarietyIdeal variety_ideal(const GroupPresentation& p) {
  if (p.rank() > 3) throw UnsupportedRank(p.rank());
  ReductionEngine engine(p.rank());
  return variety_ideal(p, engine);
}

/// Ring of the augmented ideal: the coordinates then s, block order with the
/// coordinates dominant.
inline RingPtr slope_ring(const RingPtr& base) {
  auto names = base->names;
  names.push_back("s");
  return make_ring(std::move(names), MonomialOrder::block(base->nvars()));
}

/// Appends s and the generator s - tr(alpha). That generator is kept in
/// exactly this form rather than normalized.
inline VarietyIdeal augment_with_slope(const VarietyIdeal& v, const Word& alpha, ReductionEngine& engine) {
  if (v.has_slope()) throw std::invalid_argument("ideal already has a slope coordinate");
  if (alpha.rank() != v.rank || engine.rank() != v.rank) throw std::invalid_argument("slope word rank differs");
  VarietyIdeal out;
  out.rank = v.rank;
  out.alphabet = v.alphabet;
  out.ring = slope_ring(v.ring);
  out.warnings = v.warnings;
  for (const auto& g : v.generators) out.generators.push_back(g.extended(out.ring));
  QPolynomial s = QPolynomial::variable(out.ring, out.ring->nvars() - 1);
  out.generators.push_back(s - engine.reduce(alpha).extended(out.ring));
  if (cyclic_normal_form(alpha).empty()) {
    out.warnings.push_back("slope word is trivial in the free group; s is the constant 2 and never a valid slope");
  }
  out.slope_word = alpha;
  return out;
}

/// {"rank", "alphabet", "coordinates", "order", "slope_word", "generators"}.
inline Json ideal_to_json(const VarietyIdeal& v) {
  Json gens = Json::array();
  for (const auto& g : v.generators) gens.push_back(polynomial_to_json(g));
  std::string letters(v.alphabet.names().begin(), v.alphabet.names().end());
  return {{"rank", v.rank},
          {"alphabet", letters},
          {"coordinates", v.ring->names},
          {"order", v.ring->order.descriptor()},
          {"slope_word", v.slope_word ? Json(v.alphabet.print(*v.slope_word)) : Json(nullptr)},
          {"generators", gens}};
}

inline VarietyIdeal ideal_from_json(const Json& j) {
  VarietyIdeal v;
  v.rank = j.at("rank").get<std::size_t>();
  auto letters = j.value("alphabet", std::string());
  v.alphabet = letters.empty() ? Alphabet::standard(v.rank) : Alphabet(std::vector<char>(letters.begin(), letters.end()));
  if (v.alphabet.rank() != v.rank) throw FormatError("alphabet size differs from rank");
  auto names = j.at("coordinates").get<std::vector<std::string>>();
  bool slope = !j.at("slope_word").is_null();
  if (names.size() != coordinate_count(v.rank) + (slope ? 1 : 0)) throw FormatError("coordinate count does not match rank");
  std::string order = j.value("order", slope ? MonomialOrder::block(names.size() - 1).descriptor() : "grevlex");
  v.ring = make_ring(std::move(names), MonomialOrder::parse(order, coordinate_count(v.rank)));
  for (const auto& g : j.at("generators")) v.generators.push_back(polynomial_from_json(g, v.ring));
  if (slope) v.slope_word = v.alphabet.parse(j["slope_word"].get<std::string>());
  return v;
}

}  // namespace charvar
