#pragma once

#include "charvar/charvariety.hpp"
#include "charvar/groebner.hpp"
#include "charvar/json_io.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace charvar {

/// Whether R/I is a finitely generated Q[s]-module, read off a reduced basis
/// under an order that puts every monomial with an x-variable above every
/// power of s.
struct FinitenessVerdict {
  RingPtr ring;
  std::size_t slope_var = 0;
  bool finitely_generated = false;
  /// 1 lies in the ideal; the quotient is zero.
  bool unit_ideal = false;
  /// Indexed by ring variable; slot slope_var is always empty.
  std::vector<std::optional<unsigned>> pure_power_degrees;
  /// Monomials in the x-variables spanning R/I over Q[s]; empty unless finitely generated.
  std::vector<Monomial> generating_monomials;
  GroebnerStats stats;

  std::vector<std::string> variables_without_witness() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ring->nvars(); ++i) {
      if (i != slope_var && !pure_power_degrees[i]) out.push_back(ring->names[i]);
    }
    return out;
  }
};

/// True for orders in which s (the last variable) is eliminated last: lex,
/// and block orders whose dominant block is every other variable.
inline bool eliminates_slope_last(const PolyRing& ring, std::size_t slope_var) {
  if (slope_var + 1 != ring.nvars()) return false;
  const auto& o = ring.order;
  if (o.kind() == MonomialOrder::Kind::lex) return true;
  return o.kind() == MonomialOrder::Kind::block && o.dominant() == slope_var;
}

namespace detail {

// Order ideal of monomials in the x-variables avoiding every s-free leading
// monomial, walked by appending variables in nondecreasing index order.
inline std::vector<Monomial> standard_monomials(std::size_t nvars, std::size_t slope_var,
                                                const std::vector<Monomial>& walls) {
  auto blocked = [&](const Monomial& m) {
    return std::ranges::any_of(walls, [&](const Monomial& w) { return w.divides(m); });
  };
  std::vector<Monomial> out;
  std::vector<std::pair<Monomial, std::size_t>> stack;
  Monomial one(nvars);
  if (blocked(one)) return out;
  stack.emplace_back(one, 0);
  while (!stack.empty()) {
    auto [m, first] = std::move(stack.back());
    stack.pop_back();
    for (std::size_t i = first; i < nvars; ++i) {
      if (i == slope_var) continue;
      Monomial next = m * Monomial::variable(nvars, i);
      if (!blocked(next)) stack.emplace_back(std::move(next), i);
    }
    out.push_back(std::move(m));
  }
  auto lex = MonomialOrder::lex();
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return lex.greater(a, b);
  });
  return out;
}

}  // namespace detail

inline FinitenessVerdict finiteness_from_basis(const GroebnerBasis& gb, std::size_t slope_var) {
  if (!eliminates_slope_last(*gb.ring, slope_var)) {
    throw std::invalid_argument("finiteness needs s as the last variable under lex or block(x | s) order, got " +
                                gb.ring->order.descriptor());
  }
  const std::size_t n = gb.ring->nvars();
  FinitenessVerdict v;
  v.ring = gb.ring;
  v.slope_var = slope_var;
  v.stats = gb.stats;
  v.pure_power_degrees.assign(n, std::nullopt);

  std::vector<Monomial> walls;
  for (const auto& g : gb.elements) {
    const Monomial& lm = g.leading_monomial();
    if (lm.is_one()) {
      v.unit_ideal = true;
      v.finitely_generated = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != slope_var) v.pure_power_degrees[i] = 0;
      }
      return v;
    }
    if (lm[slope_var] != 0) continue;
    walls.push_back(lm);
    std::size_t support = 0, var = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (lm[i] != 0) {
        ++support;
        var = i;
      }
    }
    if (support == 1) {
      auto& d = v.pure_power_degrees[var];
      if (!d || lm[var] < *d) d = lm[var];
    }
  }

  v.finitely_generated = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != slope_var && !v.pure_power_degrees[i]) v.finitely_generated = false;
  }
  if (v.finitely_generated) v.generating_monomials = detail::standard_monomials(n, slope_var, walls);
  return v;
}

/// Gröbner basis of `generators` in their ring (s last) and the verdict.
inline FinitenessVerdict module_finiteness(std::span<const QPolynomial> generators, const RingPtr& ring,
                                           const BuchbergerOptions& opts = {}) {
  if (ring->nvars() < 1) throw std::invalid_argument("ring needs a slope variable");
  return finiteness_from_basis(buchberger(generators, ring, opts), ring->nvars() - 1);
}

inline FinitenessVerdict module_finiteness(const VarietyIdeal& ideal, const BuchbergerOptions& opts = {}) {
  if (!ideal.has_slope()) throw std::invalid_argument("ideal has no slope coordinate s");
  return module_finiteness(ideal.generators, ideal.ring, opts);
}

/// Size of the generating set: an upper bound on the free rank, not the rank.
inline std::size_t generating_set_cardinality(const FinitenessVerdict& v) {
  if (!v.finitely_generated) throw std::logic_error("verdict is not finitely generated");
  return v.generating_monomials.size();
}

inline std::vector<std::string> monomial_strings(const FinitenessVerdict& v) {
  std::vector<std::string> out;
  for (const auto& m : v.generating_monomials) out.push_back(monomial_to_string(m, *v.ring));
  return out;
}

inline Json verdict_to_json(const FinitenessVerdict& v, bool timing = false) {
  Json degrees = Json::object();
  for (std::size_t i = 0; i < v.ring->nvars(); ++i) {
    if (i == v.slope_var) continue;
    degrees[v.ring->names[i]] = v.pure_power_degrees[i] ? Json(*v.pure_power_degrees[i]) : Json(nullptr);
  }
  return {{"finitely_generated", v.finitely_generated},
          {"unit_ideal", v.unit_ideal},
          {"pure_power_degrees", degrees},
          {"generators", v.finitely_generated ? Json(monomial_strings(v)) : Json(nullptr)},
          {"groebner_stats", stats_to_json(v.stats, timing)}};
}

// ---------------------------------------------------------------------------
// Detection report

enum class Conclusion { no_closed_surface_detected, inconclusive };

inline std::string to_string(Conclusion c) {
  return c == Conclusion::no_closed_surface_detected ? "NO_CLOSED_SURFACE_DETECTED" : "INCONCLUSIVE";
}

struct SlopeResult {
  std::string slope;  // as printed in the presentation's alphabet
  FinitenessVerdict verdict;
  std::vector<std::string> warnings;
};

struct DetectionReport {
  std::vector<SlopeResult> slopes;
  Conclusion conclusion = Conclusion::inconclusive;
  std::vector<std::string> narrative;
};

/// Folds per-slope verdicts into the conclusion and its justification.
inline DetectionReport assemble_report(std::vector<SlopeResult> slopes) {
  DetectionReport r;
  r.slopes = std::move(slopes);
  bool any = false;
  for (const auto& s : r.slopes) {
    const auto& v = s.verdict;
    const std::string I = "I_{" + s.slope + "}";
    for (const auto& w : s.warnings) r.narrative.push_back("slope " + s.slope + ": warning: " + w);
    if (v.finitely_generated) {
      any = true;
      r.narrative.push_back("slope " + s.slope + ": the rational trace ring is a finitely generated module over Q[" +
                            I + "], spanned by " + std::to_string(v.generating_monomials.size()) +
                            " monomials (a generating set, so an upper bound on the free rank).");
      r.narrative.push_back("slope " + s.slope +
                            ": the character variety is defined over Q, so the complex coordinate ring is likewise "
                            "finitely generated over C[" + I + "].");
      r.narrative.push_back("slope " + s.slope + ": therefore " + I +
                            " has a pole at every ideal point of every curve of characters; no ideal point detects a "
                            "closed essential surface, and " + s.slope +
                            " is not a boundary slope detected by an ideal point.");
    } else {
      std::string missing;
      for (const auto& name : v.variables_without_witness()) missing += (missing.empty() ? "" : ", ") + name;
      r.narrative.push_back("slope " + s.slope + ": not finitely generated over Q[" + I +
                            "]; no monic relation found for " + missing + ".");
      r.narrative.push_back("slope " + s.slope + ": some ideal point has " + I +
                            " finite, so either that ideal point detects a closed essential surface or " + s.slope +
                            " is a boundary slope it detects; without the decomposition into components the "
                            "computation cannot tell which.");
    }
  }
  r.conclusion = any ? Conclusion::no_closed_surface_detected : Conclusion::inconclusive;
  if (any) {
    r.narrative.push_back(
        "conclusion: finite generation for one peripheral trace suffices; the character variety detects no closed "
        "essential surface.");
  } else {
    r.narrative.push_back(
        "conclusion: inconclusive. Only finitely many slopes are boundary slopes, so testing further slopes may "
        "still settle the question.");
  }
  return r;
}

inline Json report_to_json(const DetectionReport& r, bool timing = false) {
  Json slopes = Json::array();
  for (const auto& s : r.slopes) {
    Json j = verdict_to_json(s.verdict, timing);
    j["slope"] = s.slope;
    j["warnings"] = s.warnings;
    slopes.push_back(std::move(j));
  }
  return {{"slopes", slopes}, {"conclusion", to_string(r.conclusion)}, {"narrative", r.narrative}};
}

struct DetectOptions {
  BuchbergerOptions buchberger;
  const GroebnerCache* cache = nullptr;
};

/// Equations, one augmentation per slope, and a verdict for each.
inline DetectionReport detect(const GroupPresentation& p, std::span<const Word> slopes, const DetectOptions& opts = {}) {
  ReductionEngine engine(p.rank());
  VarietyIdeal base = variety_ideal(p, engine);
  std::vector<SlopeResult> results;
  for (const Word& alpha : slopes) {
    VarietyIdeal ideal = augment_with_slope(base, alpha, engine);
    std::optional<GroebnerBasis> gb;
    Json key = ideal_to_json(ideal);
    if (opts.cache) gb = opts.cache->load(key, ideal.ring->order);
    if (!gb) {
      gb = buchberger(ideal.generators, ideal.ring, opts.buchberger);
      if (opts.cache) opts.cache->store(key, ideal.ring->order, *gb);
    }
    results.push_back({p.alphabet.print(alpha), finiteness_from_basis(*gb, ideal.slope_index()), ideal.warnings});
  }
  return assemble_report(std::move(results));
}

}  // namespace charvar
