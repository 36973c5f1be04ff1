#pragma once

#include "charvar/presentation.hpp"
#include "charvar/trace.hpp"

#include <random>
#include <vector>

namespace charvar::testing {

inline Rational random_rational(std::mt19937_64& rng, int bound = 5) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  return make_rational(num(rng), den(rng));
}

/// Product of random elementary and diagonal factors; determinant exactly 1.
inline Matrix2 random_sl2(std::mt19937_64& rng) {
  Matrix2 m;
  std::uniform_int_distribution<int> steps(2, 4);
  for (int k = steps(rng); k > 0; --k) {
    Rational r = random_rational(rng);
    m = m * Matrix2{1, r, 0, 1};
    r = random_rational(rng);
    m = m * Matrix2{1, 0, r, 1};
  }
  Rational d = random_rational(rng);
  if (d != 0) m = m * Matrix2{d, 0, 0, 1 / d};
  return m;
}

inline std::vector<Matrix2> random_tuple(std::mt19937_64& rng, std::size_t n) {
  std::vector<Matrix2> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_sl2(rng));
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::uint32_t> gen(1, static_cast<std::uint32_t>(rank));
  std::bernoulli_distribution inv(0.5);
  Word w(rank);
  std::size_t target = len(rng);
  while (w.size() < target) {
    Letter l(gen(rng), inv(rng) ? -1 : 1);
    if (!w.empty() && w.back() == l.inverse()) continue;
    w.push_back(l);
  }
  return w;
}

/// Image of `w` under generators -> matrices.
inline Matrix2 word_matrix(const Word& w, const std::vector<Matrix2>& mats) {
  Matrix2 m;
  for (Letter l : w.letters()) {
    const Matrix2& g = mats[l.generator() - 1];
    m = m * (l.is_inverse() ? g.adjugate() : g);
  }
  return m;
}

/// Random word whose exponent sum in every generator is zero.
inline Word random_balanced_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
  Word w = random_word(rng, rank, max_len);
  Word out = w;
  for (Letter l : w.letters()) {
    Word single(rank);
    single.push_back(l.inverse());
    out = concat(out, single);
  }
  return out;
}

inline bool integral(const QPolynomial& p) {
  for (const auto& t : p.terms()) {
    if (!is_integral(t.coeff)) return false;
  }
  return true;
}

}  // namespace charvar::testing
