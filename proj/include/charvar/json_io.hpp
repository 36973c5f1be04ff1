#pragma once

#include "charvar/groebner.hpp"
#include "charvar/polynomial.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace charvar {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integers are JSON numbers when they fit in int64, decimal strings otherwise.
inline Json integer_to_json(const Integer& z) {
  if (fits_int64(z)) return to_int64(z);
  return z.get_str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw FormatError("expected an integer, got " + j.dump());
}

/// [[num, den, [exponents...]], ...] in the ring's term order.
inline Json polynomial_to_json(const QPolynomial& p) {
  Json out = Json::array();
  for (const auto& t : p.terms()) {
    Json exps = Json::array();
    for (std::size_t i = 0; i < t.monomial.size(); ++i) exps.push_back(t.monomial[i]);
    out.push_back(Json::array({integer_to_json(t.coeff.get_num()), integer_to_json(t.coeff.get_den()), exps}));
  }
  return out;
}

inline QPolynomial polynomial_from_json(const Json& j, const RingPtr& ring) {
  if (!j.is_array()) throw FormatError("polynomial must be an array of terms");
  std::vector<Term<Rational>> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[2].is_array()) throw FormatError("malformed term " + t.dump());
    if (t[2].size() != ring->nvars()) throw FormatError("term arity differs from the ring");
    Monomial m(ring->nvars());
    for (std::size_t i = 0; i < ring->nvars(); ++i) {
      if (!t[2][i].is_number_unsigned()) throw FormatError("exponent must be a nonnegative integer");
      m.set(i, t[2][i].get<unsigned>());
    }
    Integer den = integer_from_json(t[1]);
    if (den == 0) throw FormatError("zero denominator");
    terms.push_back({m, make_rational(integer_from_json(t[0]), den)});
  }
  return QPolynomial::from_terms(ring, std::move(terms));
}

inline Json ring_to_json(const PolyRing& ring) {
  return {{"variables", ring.names}, {"order", ring.order.descriptor()}};
}

inline RingPtr ring_from_json(const Json& j) {
  auto names = j.at("variables").get<std::vector<std::string>>();
  auto order = MonomialOrder::parse(j.at("order").get<std::string>(), names.size());
  return make_ring(std::move(names), order);
}

inline Json stats_to_json(const GroebnerStats& s, bool timing) {
  Json out = {{"pairs", s.pairs}, {"zero_reductions", s.zero_reductions}, {"max_degree", s.max_degree}};
  out["wall_time"] = timing ? Json(s.wall_seconds) : Json(nullptr);
  return out;
}

inline GroebnerStats stats_from_json(const Json& j) {
  GroebnerStats s;
  s.pairs = j.at("pairs").get<std::uint64_t>();
  s.zero_reductions = j.at("zero_reductions").get<std::uint64_t>();
  s.max_degree = j.at("max_degree").get<std::uint32_t>();
  if (j.contains("wall_time") && j["wall_time"].is_number()) s.wall_seconds = j["wall_time"].get<double>();
  return s;
}

inline Json basis_to_json(const GroebnerBasis& gb, bool timing = false) {
  Json elements = Json::array();
  for (const auto& g : gb.elements) elements.push_back(polynomial_to_json(g));
  return {{"ring", ring_to_json(*gb.ring)}, {"elements", elements}, {"stats", stats_to_json(gb.stats, timing)}};
}

inline GroebnerBasis basis_from_json(const Json& j) {
  GroebnerBasis gb;
  gb.ring = ring_from_json(j.at("ring"));
  for (const auto& e : j.at("elements")) gb.elements.push_back(polynomial_from_json(e, gb.ring));
  gb.stats = stats_from_json(j.at("stats"));
  return gb;
}

inline Json checkpoint_to_json(const Checkpoint& cp) {
  Json polys = Json::array();
  for (const auto& p : cp.polys) polys.push_back(polynomial_to_json(to_rational(p)));
  Json pairs = Json::array();
  for (auto [i, j] : cp.pairs) pairs.push_back({i, j});
  return {{"ring", ring_to_json(*cp.ring)},
          {"polys", polys},
          {"sugar", cp.sugar},
          {"active", cp.active},
          {"pairs", pairs},
          {"selection", cp.selection == Selection::normal ? "normal" : "sugar"},
          {"stats", stats_to_json(cp.stats, true)}};
}

inline Checkpoint checkpoint_from_json(const Json& j) {
  Checkpoint cp;
  cp.ring = ring_from_json(j.at("ring"));
  for (const auto& p : j.at("polys")) {
    QPolynomial q = polynomial_from_json(p, cp.ring);
    std::vector<Term<Integer>> terms;
    for (const auto& t : q.terms()) {
      if (!is_integral(t.coeff)) throw FormatError("checkpoint polynomial has a non-integer coefficient");
      terms.push_back({t.monomial, t.coeff.get_num()});
    }
    cp.polys.push_back(ZPolynomial::from_sorted(cp.ring, std::move(terms)));
  }
  cp.active = j.at("active").get<std::vector<bool>>();
  if (j.contains("sugar")) cp.sugar = j["sugar"].get<std::vector<std::uint32_t>>();
  for (const auto& pr : j.at("pairs")) cp.pairs.emplace_back(pr.at(0).get<std::uint32_t>(), pr.at(1).get<std::uint32_t>());
  cp.stats = stats_from_json(j.at("stats"));
  std::string selection = j.value("selection", std::string("sugar"));
  if (selection != "sugar" && selection != "normal") throw FormatError("unknown selection " + selection);
  cp.selection = selection == "normal" ? Selection::normal : Selection::sugar;
  if (cp.active.size() != cp.polys.size()) throw FormatError("checkpoint active flags do not match polynomials");
  for (auto [a, b] : cp.pairs) {
    if (a >= cp.polys.size() || b >= cp.polys.size()) throw FormatError("checkpoint pair index out of range");
  }
  return cp;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Writes via a temporary file and rename so readers never see partial output.
inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Reduced bases on disk, named by a hash of the serialized input ideal and
/// the order descriptor. The stored key is compared on load, so a hash
/// collision is a miss rather than a wrong answer.
class GroebnerCache {
 public:
  explicit GroebnerCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::string key(const Json& ideal, const MonomialOrder& order) { return ideal.dump() + "|" + order.descriptor(); }

  std::filesystem::path path_for(const std::string& key) const {
    std::ostringstream name;
    name << std::hex;
    name.width(16);
    name.fill('0');
    name << fnv1a64(key);
    return dir_ / (name.str() + ".json");
  }

  std::optional<GroebnerBasis> load(const Json& ideal, const MonomialOrder& order) const {
    std::string k = key(ideal, order);
    auto path = path_for(k);
    if (!std::filesystem::exists(path)) return std::nullopt;
    Json j = read_json_file(path);
    if (j.value("key", std::string()) != k) return std::nullopt;
    return basis_from_json(j.at("basis"));
  }

  void store(const Json& ideal, const MonomialOrder& order, const GroebnerBasis& gb) const {
    std::string k = key(ideal, order);
    write_json_file(path_for(k), {{"key", k}, {"order", order.descriptor()}, {"basis", basis_to_json(gb, false)}});
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace charvar
