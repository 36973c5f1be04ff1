#pragma once

#include "charvar/polynomial.hpp"
#include "charvar/presentation.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace charvar {

/// Trace polynomials live in Q[coordinates] with grevlex.
using TracePolynomial = QPolynomial;

/// I_{g_i1 ... g_ik} for i1 < ... < ik, k <= 3.
struct TraceCoordinate {
  std::vector<std::uint32_t> indices;
  std::size_t position = 0;

  Word word(std::size_t rank) const {
    Word w(rank);
    for (auto i : indices) w.push_back(Letter(i, 1));
    return w;
  }
};

inline constexpr std::size_t coordinate_count(std::size_t n) { return n * (n * n + 5) / 6; }

/// All coordinates for rank n, ordered by length and then lexicographically
/// (a, b, c, ab, ac, bc, abc for n = 3).
inline std::vector<TraceCoordinate> basis_coordinates(std::size_t n) {
  if (n < 1) throw std::invalid_argument("rank must be at least 1");
  std::vector<TraceCoordinate> out;
  for (std::uint32_t i = 1; i <= n; ++i) out.push_back({{i}, 0});
  for (std::uint32_t i = 1; i <= n; ++i) {
    for (std::uint32_t j = i + 1; j <= n; ++j) out.push_back({{i, j}, 0});
  }
  for (std::uint32_t i = 1; i <= n; ++i) {
    for (std::uint32_t j = i + 1; j <= n; ++j) {
      for (std::uint32_t k = j + 1; k <= n; ++k) out.push_back({{i, j, k}, 0});
    }
  }
  for (std::size_t p = 0; p < out.size(); ++p) out[p].position = p;
  return out;
}

/// x, y, z, w, t, u, v style names for rank <= 3 (a subset of them for rank
/// 1 and 2); I_ab style names for larger ranks.
inline std::string coordinate_name(const TraceCoordinate& c, std::size_t rank) {
  if (rank <= 3) {
    static const std::array<std::string, 8> names = {"", "x", "y", "z"};
    const auto& ix = c.indices;
    if (ix.size() == 1) return names[ix[0]];
    if (ix.size() == 2) {
      if (ix[0] == 1 && ix[1] == 2) return "w";
      if (ix[0] == 1 && ix[1] == 3) return "t";
      return "u";
    }
    return "v";
  }
  std::string name = "I_";
  for (auto i : c.indices) name += static_cast<char>('a' + i - 1);
  return name;
}

inline std::vector<std::string> coordinate_names(std::size_t rank) {
  std::vector<std::string> out;
  for (const auto& c : basis_coordinates(rank)) out.push_back(coordinate_name(c, rank));
  return out;
}

enum class TraceForm {
  /// The three-phase rewriting only. Results are correct as functions but,
  /// for rank >= 3, only determined modulo the free-group relations.
  raw,
  /// Raw results additionally reduced to degree <= 1 in every triple
  /// coordinate I_{ijk} using its monic quadratic relation; unique
  /// representatives for rank <= 3.
  canonical,
};

/// Reduces trace functions of words to polynomials in the canonical
/// coordinates using the SL(2) trace identities
///
///   tr A = tr A^-1
///   tr AB = tr A tr B - tr AB^-1
///   tr ACB = tr A tr BC + tr B tr AC + tr C tr AB - tr A tr B tr C - tr ABC
///   2 tr ABCD = tr A tr BCD + tr B tr ACD + tr C tr ABD - tr D tr ACB
///             + tr BC tr AD + tr AB tr CD - tr AC tr BD + tr B tr D tr AC
///             - tr A tr B tr CD - tr B tr C tr AD
///
/// Results are memoized on cyclic normal forms. Not thread-safe; use one
/// engine per thread.
class ReductionEngine {
 public:
  explicit ReductionEngine(std::size_t rank, TraceForm form = TraceForm::canonical)
      : rank_(rank), form_(form), coords_(basis_coordinates(rank)), ring_(make_ring(coordinate_names(rank))) {
    if (form_ == TraceForm::canonical && rank_ >= 3) install_triple_rules();
  }

  std::size_t rank() const { return rank_; }
  TraceForm form() const { return form_; }
  const RingPtr& ring() const { return ring_; }
  std::span<const TraceCoordinate> coordinates() const { return coords_; }
  std::size_t memo_size() const { return memo_.size(); }

  std::size_t position_of(std::span<const std::uint32_t> indices) const {
    for (const auto& c : coords_) {
      if (std::ranges::equal(c.indices, indices)) return c.position;
    }
    throw std::out_of_range("no trace coordinate for the given indices");
  }

  TracePolynomial coordinate(std::span<const std::uint32_t> indices) const {
    return TracePolynomial::variable(ring_, position_of(indices));
  }

  const TracePolynomial& reduce(const Word& w) {
    if (w.rank() != rank_) throw std::invalid_argument("reduce: word rank differs from engine rank");
    Word key = cyclic_normal_form(w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    TracePolynomial p = compute(key);
    if (form_ == TraceForm::canonical) p = apply_triple_rules(p);
    return memo_.emplace(std::move(key), std::move(p)).first->second;
  }

  /// The relation v^2 - P v + Q among the coordinates of generators
  /// i < j < k, derived from tr(M) tr(M') = tr(MM') + tr(M M'^-1) with
  /// M = g_i g_j g_k and M' = g_i g_k g_j; integer primitive and monic in v.
  TracePolynomial free_group_relation(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    if (!(1 <= i && i < j && j < k && k <= rank_)) throw std::invalid_argument("need generators i < j < k");
    if (form_ == TraceForm::raw) return derive_triple_relation(*this, i, j, k);
    for (const auto& rule : rules_) {
      if (rule.indices == std::array<std::uint32_t, 3>{i, j, k}) return rule.relation;
    }
    throw std::logic_error("missing triple rule");
  }

 private:
  struct TripleRule {
    std::array<std::uint32_t, 3> indices;
    std::size_t var;
    TracePolynomial linear;    // P
    TracePolynomial constant;  // Q
    TracePolynomial relation;  // v^2 - P v + Q
  };

  struct Syllable {
    std::uint32_t generator;
    long exponent;
  };

  static Word word_of(std::size_t rank, std::initializer_list<std::uint32_t> gens) {
    Word w(rank);
    for (auto g : gens) w.push_back(Letter(g, 1));
    return w;
  }

  static TracePolynomial derive_triple_relation(ReductionEngine& raw, std::uint32_t i, std::uint32_t j,
                                                std::uint32_t k) {
    const std::size_t n = raw.rank_;
    Word m1 = word_of(n, {i, j, k});
    Word m2 = word_of(n, {i, k, j});
    TracePolynomial p = raw.reduce(m1) + raw.reduce(m2);
    TracePolynomial q = raw.reduce(concat(m1, m2)) + raw.reduce(concat(m1, invert(m2)));
    std::array<std::uint32_t, 3> ix{i, j, k};
    TracePolynomial v = raw.coordinate(ix);
    TracePolynomial relation = primitive_part(v * v - p * v + q);
    std::size_t var = raw.position_of(ix);
    if (relation.degree_in(var) != 2 ||
        relation.coeff_of(Monomial::variable(raw.ring_->nvars(), var, 2)) != 1) {
      throw std::logic_error("derived free-group relation is not monic quadratic in the triple coordinate");
    }
    return relation;
  }

  void install_triple_rules() {
    ReductionEngine raw(3, TraceForm::raw);
    TracePolynomial base = derive_triple_relation(raw, 1, 2, 3);
    for (std::uint32_t i = 1; i <= rank_; ++i) {
      for (std::uint32_t j = i + 1; j <= rank_; ++j) {
        for (std::uint32_t k = j + 1; k <= rank_; ++k) {
          std::array<std::uint32_t, 3> map{i, j, k};
          // Relabel generators 1,2,3 -> i,j,k.
          std::vector<std::size_t> target;
          for (const auto& c : raw.coords_) {
            std::vector<std::uint32_t> ix;
            for (auto g : c.indices) ix.push_back(map[g - 1]);
            target.push_back(position_of(ix));
          }
          std::vector<Term<Rational>> terms;
          for (const auto& t : base.terms()) {
            Monomial m(ring_->nvars());
            for (std::size_t p = 0; p < target.size(); ++p) m.set(target[p], t.monomial[p]);
            terms.push_back({m, t.coeff});
          }
          TracePolynomial relation = TracePolynomial::from_terms(ring_, std::move(terms));
          std::size_t var = position_of(map);
          TracePolynomial linear(ring_), constant(ring_);
          for (const auto& t : relation.terms()) {
            unsigned e = t.monomial[var];
            if (e == 1) {
              Monomial m = t.monomial;
              m.set(var, 0);
              linear -= TracePolynomial::monomial(ring_, m, t.coeff);
            } else if (e == 0) {
              constant += TracePolynomial::monomial(ring_, t.monomial, t.coeff);
            }
          }
          rules_.push_back({map, var, std::move(linear), std::move(constant), std::move(relation)});
        }
      }
    }
  }

  // v^e -> v^(e-2) (P v - Q) until every triple coordinate has degree <= 1.
  TracePolynomial apply_triple_rules(TracePolynomial p) const {
    for (const auto& rule : rules_) {
      while (p.degree_in(rule.var) >= 2) {
        TracePolynomial next(ring_);
        std::vector<Term<Rational>> keep;
        for (const auto& t : p.terms()) {
          if (t.monomial[rule.var] < 2) {
            keep.push_back(t);
            continue;
          }
          Monomial m = t.monomial;
          m.set(rule.var, m[rule.var] - 1);
          next += rule.linear.mul_term(m, t.coeff);
          m.set(rule.var, m[rule.var] - 1);
          next -= rule.constant.mul_term(m, t.coeff);
        }
        p = TracePolynomial::from_sorted(ring_, std::move(keep)) + next;
      }
    }
    return p;
  }

  TracePolynomial variable_of(std::uint32_t generator) const {
    std::array<std::uint32_t, 1> ix{generator};
    return coordinate(ix);
  }

  // Syllables of a cyclically reduced word, rotated so that no syllable wraps
  // around the end. Empty result means the word is a single syllable.
  static std::vector<Syllable> cyclic_syllables(const Word& w) {
    std::size_t n = w.size();
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i].generator() != w[(i + n - 1) % n].generator()) {
        start = i;
        break;
      }
    }
    if (start == n) return {};
    std::vector<Syllable> out;
    for (std::size_t k = 0; k < n; ++k) {
      Letter l = w[(start + k) % n];
      if (!out.empty() && out.back().generator == l.generator()) {
        out.back().exponent += l.sign();
      } else {
        out.push_back({l.generator(), l.sign()});
      }
    }
    return out;
  }

  Word spell(std::span<const Syllable> syllables, std::uint32_t tail_generator = 0, long tail_exp = 0) const {
    Word w(rank_);
    auto put = [&](std::uint32_t g, long e) {
      for (long c = 0; c < std::abs(e); ++c) w.push_back(Letter(g, e > 0 ? 1 : -1));
    };
    for (const auto& s : syllables) put(s.generator, s.exponent);
    put(tail_generator, tail_exp);
    return w;
  }

  TracePolynomial tr(std::initializer_list<Letter> letters, const Word& tail = Word()) {
    Word w(rank_);
    for (Letter l : letters) w.push_back(l);
    for (Letter l : tail.letters()) w.push_back(l);
    return reduce(w);
  }

  TracePolynomial compute(const Word& key) {
    if (key.empty()) return TracePolynomial::constant(ring_, 2);

    std::vector<Syllable> syl = cyclic_syllables(key);
    if (syl.empty()) {
      // tr g^e: Chebyshev recurrence T_{k+1} = x T_k - T_{k-1}.
      TracePolynomial x = variable_of(key[0].generator());
      TracePolynomial prev = TracePolynomial::constant(ring_, 2), cur = x;
      for (std::size_t k = 1; k < key.size(); ++k) {
        TracePolynomial next = x * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
      }
      return cur;
    }

    // Phase 1: inverses and exponents via Cayley-Hamilton, leftmost first.
    for (std::size_t i = 0; i < syl.size(); ++i) {
      long e = syl[i].exponent;
      if (e == 1) continue;
      std::uint32_t g = syl[i].generator;
      std::vector<Syllable> rest(syl.begin() + static_cast<std::ptrdiff_t>(i) + 1, syl.end());
      rest.insert(rest.end(), syl.begin(), syl.begin() + static_cast<std::ptrdiff_t>(i));
      TracePolynomial x = variable_of(g);
      if (e >= 2) return x * reduce(spell(rest, g, e - 1)) - reduce(spell(rest, g, e - 2));
      if (e == -1) return x * reduce(spell(rest)) - reduce(spell(rest, g, 1));
      return x * reduce(spell(rest, g, e + 1)) - reduce(spell(rest, g, e + 2));
    }

    // Positive word, cyclically no repeated adjacent generator.
    const std::size_t len = key.size();
    auto gen = [&](std::size_t i) { return key[i].generator(); };
    if (len == 2) {
      std::array<std::uint32_t, 2> ix{std::min(gen(0), gen(1)), std::max(gen(0), gen(1))};
      return coordinate(ix);
    }
    if (len == 3) {
      // Phase 3: rotate the smallest index first; g_a g_c g_b with a < b < c
      // is rewritten into increasing order.
      std::size_t r = 0;
      for (std::size_t i = 1; i < 3; ++i) {
        if (gen(i) < gen(r)) r = i;
      }
      std::uint32_t a = gen(r), p = gen((r + 1) % 3), q = gen((r + 2) % 3);
      if (p < q) {
        std::array<std::uint32_t, 3> ix{a, p, q};
        return coordinate(ix);
      }
      Letter A(a, 1), C(p, 1), B(q, 1);
      return tr({A}) * tr({B, C}) + tr({B}) * tr({A, C}) + tr({C}) * tr({A, B}) - tr({A}) * tr({B}) * tr({C}) -
             tr({A, B, C});
    }

    // Phase 2: split ABCD with A, B, C single letters.
    Letter A = key[0], B = key[1], C = key[2];
    Word D(rank_, key.letters().subspan(3));
    TracePolynomial trA = tr({A}), trB = tr({B}), trC = tr({C}), trD = reduce(D);
    TracePolynomial sum = trA * tr({B, C}, D) + trB * tr({A, C}, D) + trC * tr({A, B}, D) - trD * tr({A, C, B}) +
                          tr({B, C}) * tr({A}, D) + tr({A, B}) * tr({C}, D) - tr({A, C}) * tr({B}, D) +
                          trB * trD * tr({A, C}) - trA * trB * tr({C}, D) - trB * trC * tr({A}, D);
    return sum * Rational(1, 2);
  }

  std::size_t rank_;
  TraceForm form_;
  std::vector<TraceCoordinate> coords_;
  RingPtr ring_;
  std::vector<TripleRule> rules_;
  std::unordered_map<Word, TracePolynomial, WordHash> memo_;
};

// ---------------------------------------------------------------------------
// Exact numeric oracle

struct Matrix2 {
  Rational a = 1, b = 0, c = 0, d = 1;

  Rational det() const { return a * d - b * c; }
  Rational trace() const { return a + d; }
  /// Inverse for determinant-one matrices.
  Matrix2 adjugate() const { return {d, -b, -c, a}; }

  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Trace of the literal product along w; inverses via the adjugate.
inline Rational numeric_trace(const Word& w, std::span<const Matrix2> matrices) {
  if (matrices.size() != w.rank()) throw std::invalid_argument("need one matrix per generator");
  for (const auto& m : matrices) {
    if (m.det() != 1) throw std::invalid_argument("matrix determinant is not 1");
  }
  Matrix2 product;
  for (Letter l : w.letters()) {
    const Matrix2& m = matrices[l.generator() - 1];
    product = product * (l.is_inverse() ? m.adjugate() : m);
  }
  return product.trace();
}

/// Values of all canonical coordinates at the given matrices.
inline std::vector<Rational> coordinate_values(std::span<const Matrix2> matrices) {
  std::vector<Rational> out;
  for (const auto& c : basis_coordinates(matrices.size())) out.push_back(numeric_trace(c.word(matrices.size()), matrices));
  return out;
}

}  // namespace charvar
