#pragma once

#include "charvar/monomial.hpp"
#include "charvar/rational.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace charvar {

/// Variable names plus the monomial order; polynomials keep terms sorted by it.
struct PolyRing {
  std::vector<std::string> names;
  MonomialOrder order = MonomialOrder::grevlex();

  std::size_t nvars() const { return names.size(); }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  }

  friend bool operator==(const PolyRing&, const PolyRing&) = default;
};

using RingPtr = std::shared_ptr<const PolyRing>;

inline RingPtr make_ring(std::vector<std::string> names, MonomialOrder order = MonomialOrder::grevlex()) {
  return std::make_shared<const PolyRing>(PolyRing{std::move(names), order});
}

inline RingPtr with_order(const RingPtr& ring, MonomialOrder order) {
  return make_ring(ring->names, order);
}

template <class Coeff>
struct Term {
  Monomial monomial;
  Coeff coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

class RingMismatch : public std::invalid_argument {
 public:
  RingMismatch() : std::invalid_argument("polynomials belong to different rings") {}
};

/// Sparse polynomial; terms are nonzero and sorted in decreasing monomial order.
template <class Coeff>
class Polynomial {
 public:
  using TermType = Term<Coeff>;

  Polynomial() = default;
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr ring, const Coeff& c) {
    Polynomial p(std::move(ring));
    if (c != 0) p.terms_.push_back({Monomial(p.ring_->nvars()), c});
    return p;
  }

  static Polynomial variable(RingPtr ring, std::size_t index) {
    Polynomial p(std::move(ring));
    p.terms_.push_back({Monomial::variable(p.ring_->nvars(), index), Coeff(1)});
    return p;
  }

  static Polynomial monomial(RingPtr ring, Monomial m, const Coeff& c = Coeff(1)) {
    Polynomial p(std::move(ring));
    if (c != 0) p.terms_.push_back({std::move(m), c});
    return p;
  }

  /// Sorts, merges duplicate monomials and drops zeros.
  static Polynomial from_terms(RingPtr ring, std::vector<TermType> terms) {
    Polynomial p(std::move(ring));
    std::unordered_map<Monomial, Coeff, MonomialHash> acc;
    for (auto& t : terms) {
      if (t.monomial.size() != p.ring_->nvars()) throw std::invalid_argument("monomial has wrong arity");
      acc[t.monomial] += t.coeff;
    }
    p.adopt(acc);
    return p;
  }

  /// Trusts the caller: terms must be nonzero, distinct and already in decreasing order.
  static Polynomial from_sorted(RingPtr ring, std::vector<TermType> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  std::span<const TermType> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }

  const TermType& leading_term() const { return terms_.front(); }
  const Monomial& leading_monomial() const { return terms_.front().monomial; }
  const Coeff& leading_coeff() const { return terms_.front().coeff; }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.monomial[var]);
    return d;
  }

  Coeff coeff_of(const Monomial& m) const {
    for (const auto& t : terms_) {
      if (t.monomial == m) return t.coeff;
    }
    return Coeff(0);
  }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
  }

  Polynomial& operator+=(const Polynomial& q) { return *this = merge(*this, q, Coeff(1)); }
  Polynomial& operator-=(const Polynomial& q) { return *this = merge(*this, q, Coeff(-1)); }

  Polynomial& operator*=(const Coeff& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.coeff *= c;
    }
    return *this;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) { return merge(p, q, Coeff(1)); }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return merge(p, q, Coeff(-1)); }
  friend Polynomial operator*(Polynomial p, const Coeff& c) { return p *= c; }
  friend Polynomial operator*(const Coeff& c, Polynomial p) { return p *= c; }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_ring(q);
    if (p.is_zero() || q.is_zero()) return Polynomial(p.ring_);
    if (q.size() == 1) return p.mul_term(q.terms_[0].monomial, q.terms_[0].coeff);
    if (p.size() == 1) return q.mul_term(p.terms_[0].monomial, p.terms_[0].coeff);
    std::unordered_map<Monomial, Coeff, MonomialHash> acc;
    acc.reserve(p.size() * q.size());
    for (const auto& a : p.terms_) {
      for (const auto& b : q.terms_) acc[a.monomial * b.monomial] += a.coeff * b.coeff;
    }
    Polynomial r(p.ring_);
    r.adopt(acc);
    return r;
  }

  /// Multiplication by c*m preserves term order, so no re-sort is needed.
  Polynomial mul_term(const Monomial& m, const Coeff& c) const {
    Polynomial r(ring_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.monomial * m, t.coeff * c});
    return r;
  }

  Polynomial pow(unsigned k) const {
    Polynomial result = constant(ring_, Coeff(1));
    for (unsigned i = 0; i < k; ++i) result = result * *this;
    return result;
  }

  /// Evaluates at `values` (one per ring variable).
  template <class Value>
  Value evaluate(std::span<const Value> values) const {
    if (values.size() != ring_->nvars()) throw std::invalid_argument("wrong number of values");
    Value sum(0);
    for (const auto& t : terms_) {
      Value prod = convert<Value>(t.coeff);
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (unsigned e = 0; e < t.monomial[i]; ++e) prod *= values[i];
      }
      sum += prod;
    }
    return sum;
  }

  /// Same terms, re-sorted for a ring with identical variables but another order.
  Polynomial in_ring(RingPtr ring) const {
    if (ring->nvars() != ring_->nvars()) throw RingMismatch();
    Polynomial p(std::move(ring));
    p.terms_ = terms_;
    p.sort_terms();
    return p;
  }

  /// Embeds into a ring that appends `extra` variables after the current ones.
  Polynomial extended(RingPtr ring) const {
    if (ring->nvars() < ring_->nvars()) throw RingMismatch();
    Polynomial p(std::move(ring));
    std::size_t extra = p.ring_->nvars() - ring_->nvars();
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) p.terms_.push_back({t.monomial.extended(extra), t.coeff});
    p.sort_terms();
    return p;
  }

  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    if (p.ring_ != q.ring_ && !(p.ring_ && q.ring_ && *p.ring_ == *q.ring_)) return false;
    return p.terms_ == q.terms_;
  }

  void check_ring(const Polynomial& q) const {
    if (ring_ == q.ring_) return;
    if (!ring_ || !q.ring_ || !(*ring_ == *q.ring_)) throw RingMismatch();
  }

 private:
  template <class Value>
  static Value convert(const Coeff& c) {
    if constexpr (std::is_constructible_v<Value, Coeff>) {
      return Value(c);
    } else {
      return Value(mpq_class(c).get_d());
    }
  }

  static Polynomial merge(const Polynomial& p, const Polynomial& q, const Coeff& sign) {
    p.check_ring(q);
    Polynomial r(p.ring_);
    r.terms_.reserve(p.size() + q.size());
    const auto& order = p.ring_->order;
    std::size_t i = 0, j = 0;
    while (i < p.size() && j < q.size()) {
      auto cmp = order.compare(p.terms_[i].monomial, q.terms_[j].monomial);
      if (cmp > 0) {
        r.terms_.push_back(p.terms_[i++]);
      } else if (cmp < 0) {
        r.terms_.push_back({q.terms_[j].monomial, sign * q.terms_[j].coeff});
        ++j;
      } else {
        Coeff c = p.terms_[i].coeff + sign * q.terms_[j].coeff;
        if (c != 0) r.terms_.push_back({p.terms_[i].monomial, std::move(c)});
        ++i;
        ++j;
      }
    }
    for (; i < p.size(); ++i) r.terms_.push_back(p.terms_[i]);
    for (; j < q.size(); ++j) r.terms_.push_back({q.terms_[j].monomial, sign * q.terms_[j].coeff});
    return r;
  }

  void adopt(std::unordered_map<Monomial, Coeff, MonomialHash>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [m, c] : acc) {
      if (c != 0) terms_.push_back({m, std::move(c)});
    }
    sort_terms();
  }

  void sort_terms() {
    const auto& order = ring_->order;
    std::sort(terms_.begin(), terms_.end(),
              [&](const TermType& a, const TermType& b) { return order.greater(a.monomial, b.monomial); });
  }

  RingPtr ring_;
  std::vector<TermType> terms_;
};

using QPolynomial = Polynomial<Rational>;
using ZPolynomial = Polynomial<Integer>;

// ---------------------------------------------------------------------------
// Content and conversions

/// Integer primitive part with positive leading coefficient. Zero stays zero.
inline QPolynomial primitive_part(const QPolynomial& p) {
  if (p.is_zero()) return p;
  Integer den_lcm = 1;
  for (const auto& t : p.terms()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  Integer num_gcd = 0;
  for (const auto& t : p.terms()) {
    Integer scaled = t.coeff.get_num() * (den_lcm / t.coeff.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
  }
  Rational factor(den_lcm, num_gcd);
  factor.canonicalize();
  if (p.leading_coeff() < 0) factor = -factor;
  return p * factor;
}

inline Integer content(const ZPolynomial& p) {
  Integer g = 0;
  for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
  return g;
}

inline ZPolynomial primitive_part(const ZPolynomial& p) {
  if (p.is_zero()) return p;
  Integer g = content(p);
  std::vector<Term<Integer>> terms(p.terms().begin(), p.terms().end());
  if (p.leading_coeff() < 0) g = -g;
  for (auto& t : terms) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), g.get_mpz_t());
  return ZPolynomial::from_terms(p.ring(), std::move(terms));
}

/// Scales to an integer primitive representative with positive leading coefficient.
inline ZPolynomial to_integer(const QPolynomial& p) {
  QPolynomial prim = primitive_part(p);
  std::vector<Term<Integer>> terms;
  terms.reserve(prim.size());
  for (const auto& t : prim.terms()) terms.push_back({t.monomial, t.coeff.get_num()});
  return ZPolynomial::from_terms(p.ring(), std::move(terms));
}

inline QPolynomial to_rational(const ZPolynomial& p) {
  std::vector<Term<Rational>> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.monomial, Rational(t.coeff)});
  return QPolynomial::from_terms(p.ring(), std::move(terms));
}

// ---------------------------------------------------------------------------
// Printing and parsing

inline std::string monomial_to_string(const Monomial& m, const PolyRing& ring) {
  if (m.is_one()) return "1";
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += ring.names[i];
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

/// Terms in ring order, e.g. "x^2 - 2", "2*x*y - 1/2*z".
template <class Coeff>
std::string to_string(const Polynomial<Coeff>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Coeff mag = t.coeff < 0 ? Coeff(-t.coeff) : t.coeff;
    if (first) {
      if (t.coeff < 0) out += "-";
    } else {
      out += t.coeff < 0 ? " - " : " + ";
    }
    first = false;
    bool one = t.monomial.is_one();
    if (mag != 1 || one) {
      out += mag.get_str();
      if (!one) out += "*";
    }
    if (!one) out += monomial_to_string(t.monomial, *p.ring());
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, RingPtr ring) : text_(text), ring_(std::move(ring)) {}

  QPolynomial parse() {
    QPolynomial p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  QPolynomial expr() {
    skip();
    bool negate = false;
    if (peek() == '-' || peek() == '+') negate = text_[pos_++] == '-';
    QPolynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip();
      char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      QPolynomial rhs = term();
      acc = c == '+' ? acc + rhs : acc - rhs;
    }
  }

  QPolynomial term() {
    QPolynomial acc = factor();
    for (;;) {
      skip();
      if (peek() != '*') return acc;
      ++pos_;
      acc = acc * factor();
    }
  }

  QPolynomial factor() {
    QPolynomial base = atom();
    skip();
    if (peek() == '^') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  QPolynomial atom() {
    skip();
    char c = peek();
    if (c == '(') {
      ++pos_;
      QPolynomial inner = expr();
      skip();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/') ++pos_;
      return QPolynomial::constant(ring_, parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
      return QPolynomial::variable(ring_, ring_->index_of(text_.substr(start, pos_ - start)));
    }
    fail("unexpected character");
    return QPolynomial(ring_);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses expressions like "x^2 + 3*x*y - 1/2" over `ring`.
inline QPolynomial parse_polynomial(std::string_view text, const RingPtr& ring) {
  return detail::PolyParser(text, ring).parse();
}

}  // namespace charvar
