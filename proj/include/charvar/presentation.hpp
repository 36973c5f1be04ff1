#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace charvar {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A generator (1-based) or its inverse.
class Letter {
 public:
  constexpr Letter(std::uint32_t generator, int sign) : generator_(generator), inverse_(sign < 0) {}

  constexpr std::uint32_t generator() const { return generator_; }
  constexpr int sign() const { return inverse_ ? -1 : 1; }
  constexpr bool is_inverse() const { return inverse_; }
  constexpr Letter inverse() const { return Letter(generator_, inverse_ ? 1 : -1); }

  friend constexpr bool operator==(Letter, Letter) = default;
  /// (index, sign) lexicographic with +1 before -1.
  friend constexpr std::strong_ordering operator<=>(Letter a, Letter b) {
    if (a.generator_ != b.generator_) return a.generator_ <=> b.generator_;
    return a.inverse_ <=> b.inverse_;
  }

 private:
  std::uint32_t generator_;
  bool inverse_;
};

/// Freely reduced word in the free group of the given rank.
class Word {
 public:
  Word() = default;
  explicit Word(std::size_t rank) : rank_(rank) {}
  Word(std::size_t rank, std::span<const Letter> letters) : rank_(rank) {
    for (Letter l : letters) push_back(l);
  }

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  /// Appends with free cancellation.
  void push_back(Letter l) {
    if (l.generator() < 1 || l.generator() > rank_) {
      throw std::out_of_range("generator index " + std::to_string(l.generator()) + " outside rank " +
                              std::to_string(rank_));
    }
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.rank_ != b.rank_) return a.rank_ <=> b.rank_;
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ rank_;
    for (Letter l : letters_) h = (h ^ (l.generator() * 2 + (l.is_inverse() ? 1 : 0))) * 0x100000001b3ULL;
    return h;
  }

 private:
  std::size_t rank_ = 0;
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return w.hash(); }
};

inline Word invert(const Word& w) {
  Word out(w.rank());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(it->inverse());
  return out;
}

inline Word concat(const Word& u, const Word& v) {
  if (u.rank() != v.rank()) throw std::invalid_argument("concat: rank mismatch");
  Word out = u;
  for (Letter l : v.letters()) out.push_back(l);
  return out;
}

/// w^k for any integer k.
inline Word power(const Word& w, long k) {
  Word base = k < 0 ? invert(w) : w;
  Word out(w.rank());
  for (long i = 0; i < std::abs(k); ++i) out = concat(out, base);
  return out;
}

/// Strips inverse pairs from the two ends (conjugation).
inline Word cyclic_reduction(const Word& w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return Word(w.rank(), w.letters().subspan(lo, hi - lo));
}

inline Word rotate(const Word& w, std::size_t k) {
  std::vector<Letter> letters(w.letters().begin(), w.letters().end());
  std::rotate(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k), letters.end());
  return Word(w.rank(), letters);
}

/// Least element (in the Letter order, lexicographic) among all rotations of
/// the cyclic reduction of w and of its inverse. Invariant under conjugation
/// and inversion.
inline Word cyclic_normal_form(const Word& w) {
  Word base = cyclic_reduction(w);
  if (base.empty()) return base;
  Word best = base;
  for (const Word& candidate : {base, invert(base)}) {
    for (std::size_t k = 0; k < candidate.size(); ++k) {
      Word r = rotate(candidate, k);
      if (r < best) best = std::move(r);
    }
  }
  return best;
}

/// Generator names: lowercase letters; uppercase spells the inverse.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<char> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!std::islower(static_cast<unsigned char>(names_[i]))) {
        throw ParseError(std::string("generator name '") + names_[i] + "' is not a lowercase letter");
      }
      if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), names_[i]) !=
          names_.begin() + static_cast<std::ptrdiff_t>(i)) {
        throw ParseError(std::string("duplicate generator name '") + names_[i] + "'");
      }
    }
  }

  /// a, b, c, ...
  static Alphabet standard(std::size_t rank) {
    if (rank > 26) throw std::invalid_argument("at most 26 generators");
    std::vector<char> names;
    for (std::size_t i = 0; i < rank; ++i) names.push_back(static_cast<char>('a' + i));
    return Alphabet(std::move(names));
  }

  std::size_t rank() const { return names_.size(); }
  char name(std::uint32_t generator) const { return names_.at(generator - 1); }
  std::span<const char> names() const { return names_; }

  std::optional<Letter> letter(char c) const {
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(names_.begin(), names_.end(), lower);
    if (it == names_.end()) return std::nullopt;
    return Letter(static_cast<std::uint32_t>(it - names_.begin() + 1), std::isupper(static_cast<unsigned char>(c)) ? -1 : 1);
  }

  Word parse(std::string_view text) const {
    Word w(rank());
    for (char c : text) {
      auto l = letter(c);
      if (!l) throw ParseError(std::string("unknown letter '") + c + "' in word '" + std::string(text) + "'");
      w.push_back(*l);
    }
    return w;
  }

  std::string print(const Word& w) const {
    std::string out;
    for (Letter l : w.letters()) {
      char c = name(l.generator());
      out += l.is_inverse() ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    }
    return out;
  }

 private:
  std::vector<char> names_;
};

/// Parses a letter string over the standard alphabet a, b, c, ... of `rank`.
inline Word parse_word(std::string_view text, std::size_t rank) { return Alphabet::standard(rank).parse(text); }

inline std::string to_string(const Word& w) { return Alphabet::standard(w.rank()).print(w); }

struct GroupPresentation {
  Alphabet alphabet;
  std::vector<Word> relators;
  std::vector<std::pair<std::string, Word>> peripherals;

  std::size_t rank() const { return alphabet.rank(); }

  const Word* peripheral(std::string_view name) const {
    for (const auto& [n, w] : peripherals) {
      if (n == name) return &w;
    }
    return nullptr;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Line-oriented presentation file:
///
///   generators: a b c
///   relators: abAbCaabAbcB abCBcAc
///   peripheral meridian: BAABa
///
/// `#` starts a comment line; `relators:` may repeat.
inline GroupPresentation parse_presentation(std::string_view text) {
  GroupPresentation p;
  bool have_generators = false;
  std::vector<std::pair<std::size_t, std::string>> relator_tokens;
  std::vector<std::tuple<std::size_t, std::string, std::string>> peripheral_tokens;

  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(where() + "expected 'section: values'");
    std::vector<std::string> head = detail::tokens(line.substr(0, colon));
    std::vector<std::string> values = detail::tokens(line.substr(colon + 1));
    if (head.size() == 1 && head[0] == "generators") {
      if (have_generators) throw ParseError(where() + "generators declared twice");
      std::vector<char> names;
      for (const auto& v : values) {
        if (v.size() != 1) throw ParseError(where() + "generator names must be single letters, got '" + v + "'");
        names.push_back(v[0]);
      }
      if (names.empty()) throw ParseError(where() + "at least one generator is required");
      try {
        p.alphabet = Alphabet(std::move(names));
      } catch (const ParseError& e) {
        throw ParseError(where() + e.what());
      }
      have_generators = true;
    } else if (head.size() == 1 && head[0] == "relators") {
      for (auto& v : values) relator_tokens.emplace_back(lineno, std::move(v));
    } else if (head.size() == 2 && head[0] == "peripheral") {
      if (values.size() != 1) throw ParseError(where() + "peripheral '" + head[1] + "' needs exactly one word");
      peripheral_tokens.emplace_back(lineno, head[1], values[0]);
    } else {
      throw ParseError(where() + "unknown section '" + std::string(detail::trim(line.substr(0, colon))) + "'");
    }
  }
  if (!have_generators) throw ParseError("missing 'generators:' line");

  for (const auto& [ln, tok] : relator_tokens) {
    try {
      p.relators.push_back(p.alphabet.parse(tok));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(ln) + ": relator: " + e.what());
    }
  }
  for (const auto& [ln, name, tok] : peripheral_tokens) {
    if (p.peripheral(name) != nullptr) {
      throw ParseError("line " + std::to_string(ln) + ": duplicate peripheral '" + name + "'");
    }
    Word w;
    try {
      w = p.alphabet.parse(tok);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(ln) + ": peripheral: " + e.what());
    }
    if (w.empty()) throw ParseError("line " + std::to_string(ln) + ": peripheral '" + name + "' is trivial");
    p.peripherals.emplace_back(name, std::move(w));
  }
  return p;
}

/// Compiles a slope selector into a word. Accepts a product of peripheral
/// names with optional integer exponents ("meridian^-1 * longitude") or a
/// literal word in the presentation's letters.
inline Word compile_slope(const GroupPresentation& p, std::string_view selector) {
  std::string_view sel = detail::trim(selector);
  if (sel.empty()) throw ParseError("empty slope selector");
  Word out(p.rank());
  std::size_t start = 0;
  std::vector<std::string_view> factors;
  for (std::size_t i = 0; i <= sel.size(); ++i) {
    if (i == sel.size() || sel[i] == '*') {
      factors.push_back(detail::trim(sel.substr(start, i - start)));
      start = i + 1;
    }
  }
  for (std::string_view factor : factors) {
    if (factor.empty()) throw ParseError("malformed slope selector '" + std::string(sel) + "'");
    std::string_view name = factor;
    long exponent = 1;
    if (auto caret = factor.find('^'); caret != std::string_view::npos) {
      name = detail::trim(factor.substr(0, caret));
      std::string exp_text(detail::trim(factor.substr(caret + 1)));
      try {
        std::size_t used = 0;
        exponent = std::stol(exp_text, &used);
        if (used != exp_text.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("bad exponent '" + exp_text + "' in slope selector");
      }
    }
    if (const Word* w = p.peripheral(name)) {
      out = concat(out, power(*w, exponent));
    } else if (factors.size() == 1 && exponent == 1) {
      return p.alphabet.parse(name);
    } else {
      throw ParseError("unknown peripheral '" + std::string(name) + "' in slope selector");
    }
  }
  return out;
}

}  // namespace charvar
