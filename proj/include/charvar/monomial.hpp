#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace charvar {

/// Dense exponent vector. All monomials multiplied or compared together must
/// have the same number of slots.
class Monomial {
 public:
  using Exponent = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  Monomial(std::initializer_list<unsigned> exps) {
    exps_.reserve(exps.size());
    for (unsigned e : exps) push(e);
  }
  explicit Monomial(std::span<const unsigned> exps) {
    exps_.reserve(exps.size());
    for (unsigned e : exps) push(e);
  }

  static Monomial variable(std::size_t nvars, std::size_t index, unsigned power = 1) {
    Monomial m(nvars);
    m.set(index, power);
    return m;
  }

  std::size_t size() const { return exps_.size(); }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }
  std::span<const Exponent> exponents() const { return {exps_.data(), exps_.size()}; }

  void set(std::size_t i, unsigned e) {
    check_exponent(e);
    degree_ = degree_ - exps_[i] + e;
    exps_[i] = static_cast<Exponent>(e);
  }

  /// Appends a new variable slot (used when a ring gains a coordinate).
  Monomial extended(std::size_t extra) const {
    Monomial m = *this;
    for (std::size_t k = 0; k < extra; ++k) m.exps_.push_back(0);
    return m;
  }

  bool divides(const Monomial& other) const {
    if (degree_ > other.degree_) return false;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] > other.exps_[i]) return false;
    }
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    check_sizes(a, b);
    Monomial m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      m.set(i, unsigned(a.exps_[i]) + unsigned(b.exps_[i]));
    }
    return m;
  }

  /// Exact quotient; requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    check_sizes(a, b);
    if (!b.divides(a)) throw std::domain_error("monomial quotient is not exact");
    Monomial m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m.set(i, a.exps_[i] - b.exps_[i]);
    return m;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    check_sizes(a, b);
    Monomial m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m.set(i, std::max(a.exps_[i], b.exps_[i]));
    return m;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    check_sizes(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.exps_[i] != 0 && b.exps_[i] != 0) return false;
    }
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && std::ranges::equal(a.exps_, b.exps_);
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Exponent e : exps_) h = (h ^ e) * 0x100000001b3ULL;
    return h;
  }

 private:
  static void check_exponent(unsigned e) {
    if (e > std::numeric_limits<Exponent>::max()) throw std::overflow_error("monomial exponent overflow");
  }
  static void check_sizes(const Monomial& a, const Monomial& b) {
    if (a.size() != b.size()) throw std::invalid_argument("monomials from different rings");
  }
  void push(unsigned e) {
    check_exponent(e);
    exps_.push_back(static_cast<Exponent>(e));
    degree_ += e;
  }

  boost::container::small_vector<Exponent, 12> exps_;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Lex, graded reverse lex, or a two-block elimination order: the first
/// `dominant` variables are compared by grevlex first, ties are broken by
/// grevlex on the remaining variables.
class MonomialOrder {
 public:
  enum class Kind { lex, grevlex, block };

  static MonomialOrder lex() { return MonomialOrder(Kind::lex, 0); }
  static MonomialOrder grevlex() { return MonomialOrder(Kind::grevlex, 0); }
  static MonomialOrder block(std::size_t dominant) { return MonomialOrder(Kind::block, dominant); }

  Kind kind() const { return kind_; }
  std::size_t dominant() const { return dominant_; }

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const {
    switch (kind_) {
      case Kind::lex:
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] != b[i]) return a[i] <=> b[i];
        }
        return std::strong_ordering::equal;
      case Kind::grevlex:
        return grevlex_range(a, b, 0, a.size());
      case Kind::block: {
        std::size_t split = std::min(dominant_, a.size());
        auto head = grevlex_range(a, b, 0, split);
        if (head != 0) return head;
        return grevlex_range(a, b, split, a.size());
      }
    }
    return std::strong_ordering::equal;
  }

  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  std::string descriptor() const {
    switch (kind_) {
      case Kind::lex: return "lex";
      case Kind::grevlex: return "grevlex";
      case Kind::block: return "block:" + std::to_string(dominant_);
    }
    return {};
  }

  /// Parses a descriptor. A bare "block" needs `default_dominant`.
  static MonomialOrder parse(std::string_view text, std::size_t default_dominant = 0) {
    if (text == "lex") return lex();
    if (text == "grevlex") return grevlex();
    if (text == "block") return block(default_dominant);
    if (text.starts_with("block:")) {
      return block(static_cast<std::size_t>(std::stoul(std::string(text.substr(6)))));
    }
    throw std::invalid_argument("unknown monomial order '" + std::string(text) + "'");
  }

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;
  friend std::ostream& operator<<(std::ostream& os, const MonomialOrder& o) { return os << o.descriptor(); }

 private:
  MonomialOrder(Kind kind, std::size_t dominant) : kind_(kind), dominant_(dominant) {}

  static std::strong_ordering grevlex_range(const Monomial& a, const Monomial& b, std::size_t begin,
                                            std::size_t end) {
    unsigned da = 0, db = 0;
    for (std::size_t i = begin; i < end; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da <=> db;
    for (std::size_t i = end; i-- > begin;) {
      if (a[i] != b[i]) return b[i] <=> a[i];
    }
    return std::strong_ordering::equal;
  }

  Kind kind_;
  std::size_t dominant_;
};

}  // namespace charvar
