#pragma once

#include "charvar/finiteness.hpp"

#include <map>
#include <optional>
#include <vector>

// Brute-force linear algebra over Q: with s^D adjoined the quotient is finite
// dimensional, and a degree-truncated Macaulay matrix decides whether the
// generating monomials times 1, s, ..., s^(D-1) span it.
namespace charvar::testing {

/// Row space kept in echelon form: distinct leading monomials, each row monic.
class EchelonSpace {
 public:
  explicit EchelonSpace(RingPtr ring) : ring_(std::move(ring)), rows_(detail::Descending{&ring_->order}) {}

  /// What is left of `p` after cancelling leading terms against pivots.
  QPolynomial reduce(QPolynomial p) const {
    QPolynomial out(ring_);
    while (!p.is_zero()) {
      auto it = rows_.find(p.leading_monomial());
      if (it == rows_.end()) {
        QPolynomial lead = QPolynomial::from_terms(ring_, {{p.leading_monomial(), p.leading_coeff()}});
        out += lead;
        p -= lead;
        continue;
      }
      p -= it->second * p.leading_coeff();
    }
    return out;
  }

  bool contains(const QPolynomial& p) const { return reduce(p).is_zero(); }

  void insert(QPolynomial p) {
    while (!p.is_zero()) {
      auto it = rows_.find(p.leading_monomial());
      if (it == rows_.end()) break;
      p -= it->second * p.leading_coeff();
    }
    if (p.is_zero()) return;
    p *= 1 / p.leading_coeff();
    rows_.emplace(p.leading_monomial(), std::move(p));
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  RingPtr ring_;
  std::map<Monomial, QPolynomial, detail::Descending> rows_;
};

/// Monomials of total degree at most `degree`, optionally restricted to
/// exponent zero in `skip`.
inline std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned degree,
                                             std::optional<std::size_t> skip = std::nullopt) {
  std::vector<Monomial> out{Monomial(nvars)};
  for (std::size_t start = 0; start < out.size(); ++start) {
    Monomial m = out[start];
    if (m.degree() == degree) continue;
    std::size_t last = 0;
    for (std::size_t i = 0; i < nvars; ++i) {
      if (m[i] != 0) last = i;
    }
    for (std::size_t i = last; i < nvars; ++i) {
      if (skip && i == *skip) continue;
      out.push_back(m * Monomial::variable(nvars, i));
    }
  }
  return out;
}

/// First monomial x^a s^k (|a| <= target_degree, k < slope_degree) outside the
/// span of the Macaulay rows of degree <= row_degree and the generating
/// monomials times powers of s; nullopt if all are spanned.
inline std::optional<Monomial> first_unspanned(const std::vector<QPolynomial>& generators,
                                               const FinitenessVerdict& verdict, unsigned slope_degree,
                                               unsigned target_degree, unsigned row_degree) {
  const RingPtr& ring = verdict.ring;
  const std::size_t n = ring->nvars(), s = verdict.slope_var;
  std::vector<QPolynomial> relations = generators;
  Monomial sD(n);
  sD.set(s, slope_degree);
  relations.push_back(QPolynomial::from_terms(ring, {{sD, 1}}));

  EchelonSpace space(ring);
  for (const auto& f : relations) {
    if (f.is_zero() || f.total_degree() > row_degree) continue;
    for (const auto& m : monomials_up_to(n, row_degree - f.total_degree())) {
      space.insert(f * QPolynomial::from_terms(ring, {{m, 1}}));
    }
  }
  for (const auto& g : verdict.generating_monomials) {
    for (unsigned k = 0; k < slope_degree; ++k) {
      Monomial m = g;
      m.set(s, k);
      space.insert(QPolynomial::from_terms(ring, {{m, 1}}));
    }
  }
  for (const auto& x : monomials_up_to(n, target_degree, s)) {
    for (unsigned k = 0; k < slope_degree; ++k) {
      Monomial t = x;
      t.set(s, k);
      if (!space.contains(QPolynomial::from_terms(ring, {{t, 1}}))) return t;
    }
  }
  return std::nullopt;
}

}  // namespace charvar::testing
