#pragma once

#include "charvar/polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace charvar {

struct GroebnerStats {
  std::uint64_t pairs = 0;            // S-pairs reduced
  std::uint64_t zero_reductions = 0;  // of those, how many reduced to zero
  std::uint32_t max_degree = 0;       // largest sugar degree of a reduced pair
  double wall_seconds = 0.0;

  friend bool operator==(const GroebnerStats&, const GroebnerStats&) = default;
};

/// How the next S-pairs are chosen.
enum class Selection {
  /// sugar for graded orders. For elimination orders neither strategy is
  /// reliably fast, so runs alternate between them under a growing work
  /// limit, restarting each time; the reduced basis is the same either way.
  automatic,
  /// all pairs of minimal sugar degree, reduced as one batch
  sugar,
  /// the pairs with the smallest lcm in the monomial order
  normal,
};

struct BuchbergerOptions {
  unsigned threads = 1;
  /// Stop before reducing any pair whose sugar degree is above this. For
  /// graded orders the sugar of a pair is the degree of its lcm.
  std::optional<std::uint32_t> degree_budget;
  /// Stop once this many pairs have been reduced (checked between batches).
  std::optional<std::uint64_t> pair_budget;
  Selection selection = Selection::automatic;
};

/// Reduced basis. Elements are integer primitive with positive leading
/// coefficient and sorted by increasing leading monomial.
struct GroebnerBasis {
  RingPtr ring;
  std::vector<QPolynomial> elements;
  GroebnerStats stats;

  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    out.reserve(elements.size());
    for (const auto& g : elements) out.push_back(g.leading_monomial());
    return out;
  }
};

/// Resumable engine state: every polynomial ever added (inactive ones were
/// made redundant), plus the pending pair queue.
struct Checkpoint {
  RingPtr ring;
  std::vector<ZPolynomial> polys;
  std::vector<std::uint32_t> sugar;
  std::vector<bool> active;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  GroebnerStats stats;
  /// Strategy of the interrupted run; resuming keeps it.
  Selection selection = Selection::sugar;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, Checkpoint checkpoint)
      : std::runtime_error(what), checkpoint_(std::move(checkpoint)) {}
  const Checkpoint& checkpoint() const { return checkpoint_; }

 private:
  Checkpoint checkpoint_;
};

namespace detail {

struct Descending {
  const MonomialOrder* order;
  bool operator()(const Monomial& a, const Monomial& b) const { return order->greater(a, b); }
};

template <class Coeff>
using WorkMap = std::map<Monomial, Coeff, Descending>;

inline void remove_content(WorkMap<Integer>& work, std::vector<Term<Integer>>& rem) {
  Integer g = 0;
  for (const auto& [m, c] : work) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return;
  }
  for (const auto& t : rem) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) return;
  }
  if (g == 0) return;
  for (auto& [m, c] : work) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  for (auto& t : rem) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), g.get_mpz_t());
}

/// Fraction-free full reduction. Returns the primitive part of a nonzero
/// rational multiple of the exact remainder.
inline ZPolynomial reduce_primitive(const ZPolynomial& f, std::span<const ZPolynomial* const> divisors) {
  const RingPtr& ring = f.ring();
  WorkMap<Integer> work(Descending{&ring->order});
  for (const auto& t : f.terms()) work.emplace(t.monomial, t.coeff);
  std::vector<Term<Integer>> rem;
  unsigned steps = 0;
  Integer d, fa, fb;
  while (!work.empty()) {
    auto it = work.begin();
    const ZPolynomial* g = nullptr;
    for (const ZPolynomial* cand : divisors) {
      if (cand->leading_monomial().divides(it->first)) {
        g = cand;
        break;
      }
    }
    if (g == nullptr) {
      rem.push_back({it->first, std::move(it->second)});
      work.erase(it);
      continue;
    }
    Monomial q = it->first / g->leading_monomial();
    const Integer& b = g->leading_coeff();
    mpz_gcd(d.get_mpz_t(), it->second.get_mpz_t(), b.get_mpz_t());
    mpz_divexact(fa.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t());
    mpz_divexact(fb.get_mpz_t(), it->second.get_mpz_t(), d.get_mpz_t());
    work.erase(it);
    if (fa != 1) {
      for (auto& [m, c] : work) c *= fa;
      for (auto& t : rem) t.coeff *= fa;
    }
    auto terms = g->terms();
    for (std::size_t k = 1; k < terms.size(); ++k) {
      auto [slot, inserted] = work.try_emplace(terms[k].monomial * q, 0);
      slot->second -= fb * terms[k].coeff;
      if (slot->second == 0) work.erase(slot);
    }
    if (fa != 1 && ++steps % 8 == 0) remove_content(work, rem);
  }
  return primitive_part(ZPolynomial::from_sorted(ring, std::move(rem)));
}

inline ZPolynomial s_polynomial(const ZPolynomial& f, const ZPolynomial& g) {
  Monomial l = lcm(f.leading_monomial(), g.leading_monomial());
  Integer d;
  mpz_gcd(d.get_mpz_t(), f.leading_coeff().get_mpz_t(), g.leading_coeff().get_mpz_t());
  Integer cf = g.leading_coeff() / d;
  Integer cg = f.leading_coeff() / d;
  return f.mul_term(l / f.leading_monomial(), cf) - g.mul_term(l / g.leading_monomial(), cg);
}

/// Buchberger with the Gebauer-Moeller update and the sugar selection
/// strategy (normal selection by lcm degree, made to behave for non-graded
/// orders by tracking the degree each element would have after
/// homogenization). Pairs of minimal sugar form a batch; a batch is reduced
/// against a fixed snapshot (optionally in parallel) and the results are
/// inserted in batch order, so the run is identical for any thread count.
class BuchbergerEngine {
 public:
  explicit BuchbergerEngine(RingPtr ring) : ring_(std::move(ring)) {}

  explicit BuchbergerEngine(const Checkpoint& cp)
      : ring_(cp.ring), polys_(cp.polys), sugar_(cp.sugar), active_(cp.active), stats_(cp.stats),
        selection_(cp.selection) {
    if (sugar_.size() != polys_.size()) {
      sugar_.clear();
      for (const auto& p : polys_) sugar_.push_back(p.total_degree());
    }
    for (auto [i, j] : cp.pairs) pairs_.push_back(make_pair(i, j));
  }

  void add_generator(const QPolynomial& f) {
    if (f.is_zero()) return;
    f.check_ring(QPolynomial(ring_));
    ZPolynomial h = reduce_primitive(to_integer(f), divisors());
    if (!h.is_zero()) update(std::move(h), std::max(f.total_degree(), h.total_degree()));
  }

  Selection selection() const { return selection_; }
  void set_selection(Selection s) { selection_ = s; }

  /// Runs to completion, or returns false once the added elements' total
  /// size (limbs plus terms) passes `work_limit`.
  bool run(const BuchbergerOptions& opts, std::uint64_t work_limit = UINT64_MAX) {
    auto start = std::chrono::steady_clock::now();
    struct Timer {
      GroebnerStats& stats;
      std::chrono::steady_clock::time_point start;
      ~Timer() { stats.wall_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
    } timer{stats_, start};

    const Selection selection = selection_;
    while (!pairs_.empty()) {
      if (work_ > work_limit) return false;
      std::uint32_t degree = UINT32_MAX;
      const Pair* smallest = nullptr;
      for (const auto& p : pairs_) {
        if (selection == Selection::sugar) {
          degree = std::min(degree, p.sugar);
        } else if (!smallest || ring_->order.compare(p.lcm, smallest->lcm) < 0) {
          smallest = &p;
        }
      }
      Monomial target;
      if (smallest) {
        target = smallest->lcm;
        degree = smallest->sugar;
      }
      if (opts.degree_budget && degree > *opts.degree_budget) {
        throw BudgetExhausted("degree budget " + std::to_string(*opts.degree_budget) +
                                  " exhausted (next pair sugar degree " + std::to_string(degree) + ")",
                              checkpoint());
      }
      if (opts.pair_budget && stats_.pairs >= *opts.pair_budget) {
        throw BudgetExhausted("pair budget " + std::to_string(*opts.pair_budget) + " exhausted", checkpoint());
      }

      std::vector<Pair> batch;
      std::vector<Pair> rest;
      for (auto& p : pairs_) {
        bool take = selection == Selection::sugar ? p.sugar == degree : p.lcm == target;
        (take ? batch : rest).push_back(std::move(p));
      }
      pairs_ = std::move(rest);
      std::sort(batch.begin(), batch.end(), [&](const Pair& a, const Pair& b) {
        auto c = ring_->order.compare(a.lcm, b.lcm);
        if (c != 0) return c < 0;
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
      });

      std::vector<ZPolynomial> reduced = reduce_batch(batch, opts.threads);
      for (auto& h : reduced) {
        if (h.is_zero()) {
          ++stats_.zero_reductions;
          continue;
        }
        // The basis may have grown since the snapshot.
        h = reduce_primitive(h, divisors());
        if (h.is_zero()) {
          ++stats_.zero_reductions;
          continue;
        }
        std::uint32_t sugar = std::max(degree, h.total_degree());
        for (const auto& t : h.terms()) work_ += mpz_size(t.coeff.get_mpz_t()) + 1;
        update(std::move(h), sugar);
      }
      stats_.pairs += batch.size();
      stats_.max_degree = std::max(stats_.max_degree, degree);
    }
    return true;
  }

  GroebnerBasis reduced_basis() const {
    std::vector<const ZPolynomial*> minimal;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      if (!active_[i]) continue;
      bool redundant = false;
      for (std::size_t j = 0; j < polys_.size() && !redundant; ++j) {
        if (j == i || !active_[j]) continue;
        const Monomial& a = polys_[j].leading_monomial();
        const Monomial& b = polys_[i].leading_monomial();
        redundant = a.divides(b) && (a != b || j < i);
      }
      if (!redundant) minimal.push_back(&polys_[i]);
    }
    GroebnerBasis gb{ring_, {}, stats_};
    for (const ZPolynomial* g : minimal) {
      std::vector<const ZPolynomial*> others;
      for (const ZPolynomial* o : minimal) {
        if (o != g) others.push_back(o);
      }
      // The leading term is irreducible modulo the others; only the tail changes.
      ZPolynomial full = reduce_primitive(*g, others);
      gb.elements.push_back(primitive_part(to_rational(full)));
    }
    std::sort(gb.elements.begin(), gb.elements.end(), [&](const QPolynomial& a, const QPolynomial& b) {
      return ring_->order.compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return gb;
  }

  const GroebnerStats& stats() const { return stats_; }

  Checkpoint checkpoint() const {
    Checkpoint cp{ring_, polys_, sugar_, active_, {}, stats_, selection_};
    for (const auto& p : pairs_) cp.pairs.emplace_back(p.i, p.j);
    return cp;
  }

 private:
  struct Pair {
    std::uint32_t i, j;
    Monomial lcm;
    std::uint32_t sugar;
  };

  Pair make_pair(std::uint32_t i, std::uint32_t j) const {
    Monomial l = lcm(polys_[i].leading_monomial(), polys_[j].leading_monomial());
    std::uint32_t d = l.degree();
    std::uint32_t s = std::max(sugar_[i] + d - polys_[i].leading_monomial().degree(),
                               sugar_[j] + d - polys_[j].leading_monomial().degree());
    return {i, j, std::move(l), s};
  }

  std::vector<const ZPolynomial*> divisors() const {
    std::vector<const ZPolynomial*> out;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      if (active_[i]) out.push_back(&polys_[i]);
    }
    return out;
  }

  std::vector<ZPolynomial> reduce_batch(const std::vector<Pair>& batch, unsigned threads) const {
    std::vector<ZPolynomial> out(batch.size());
    std::vector<const ZPolynomial*> snapshot = divisors();
    auto work = [&](std::size_t k) {
      const Pair& p = batch[k];
      out[k] = reduce_primitive(s_polynomial(polys_[p.i], polys_[p.j]), snapshot);
    };
    std::size_t workers = std::min<std::size_t>(std::max(1u, threads), batch.size());
    if (workers <= 1) {
      for (std::size_t k = 0; k < batch.size(); ++k) work(k);
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t k; (k = next.fetch_add(1)) < batch.size();) work(k);
          } catch (...) {
            errors[w] = std::current_exception();
            next = batch.size();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return out;
  }

  // Gebauer-Moeller installation of a new element h.
  void update(ZPolynomial h, std::uint32_t sugar) {
    const auto hi = static_cast<std::uint32_t>(polys_.size());
    const Monomial hlm = h.leading_monomial();
    polys_.push_back(std::move(h));
    sugar_.push_back(sugar);
    active_.push_back(true);

    std::vector<std::uint32_t> candidates;
    for (std::uint32_t g = 0; g < hi; ++g) {
      if (active_[g]) candidates.push_back(g);
    }
    std::vector<Monomial> lcms;
    for (auto g : candidates) lcms.push_back(lcm(hlm, polys_[g].leading_monomial()));

    std::vector<std::size_t> kept;  // positions into candidates
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      bool keep = coprime(hlm, polys_[candidates[pos]].leading_monomial());
      if (!keep) {
        keep = true;
        for (std::size_t other = pos + 1; other < candidates.size() && keep; ++other) {
          if (lcms[other].divides(lcms[pos])) keep = false;
        }
        for (std::size_t other : kept) {
          if (!keep) break;
          if (lcms[other].divides(lcms[pos])) keep = false;
        }
      }
      if (keep) kept.push_back(pos);
    }

    std::vector<Pair> next;
    next.reserve(pairs_.size() + kept.size());
    for (auto& p : pairs_) {
      bool drop = hlm.divides(p.lcm) && lcm(polys_[p.i].leading_monomial(), hlm) != p.lcm &&
                  lcm(hlm, polys_[p.j].leading_monomial()) != p.lcm;
      if (!drop) next.push_back(std::move(p));
    }
    for (std::size_t pos : kept) {
      auto g = candidates[pos];
      if (!coprime(hlm, polys_[g].leading_monomial())) next.push_back(make_pair(g, hi));
    }
    pairs_ = std::move(next);

    for (auto g : candidates) {
      if (hlm.divides(polys_[g].leading_monomial())) active_[g] = false;
    }
  }

  RingPtr ring_;
  std::vector<ZPolynomial> polys_;
  std::vector<std::uint32_t> sugar_;
  std::vector<bool> active_;
  std::vector<Pair> pairs_;
  GroebnerStats stats_;
  Selection selection_ = Selection::sugar;
  std::uint64_t work_ = 0;
};

// Input preparation: sort by leading monomial and reduce each generator by
// the smaller ones until nothing changes. Adding the survivors in increasing
// order keeps the pair set small for elimination orders.
inline std::vector<QPolynomial> interreduce(std::span<const QPolynomial> generators, const RingPtr& ring) {
  std::vector<ZPolynomial> f;
  for (const auto& g : generators) {
    if (!g.is_zero()) f.push_back(primitive_part(to_integer(g)));
  }
  auto by_lm = [&](const ZPolynomial& a, const ZPolynomial& b) {
    return ring->order.compare(a.leading_monomial(), b.leading_monomial()) < 0;
  };
  for (bool changed = true; changed;) {
    std::stable_sort(f.begin(), f.end(), by_lm);
    changed = false;
    std::vector<ZPolynomial> next;
    for (const auto& g : f) {
      std::vector<const ZPolynomial*> smaller;
      for (const auto& h : next) smaller.push_back(&h);
      ZPolynomial r = reduce_primitive(g, smaller);
      if (r != g) changed = true;
      if (!r.is_zero()) next.push_back(std::move(r));
    }
    f = std::move(next);
  }
  std::vector<QPolynomial> out;
  for (const auto& g : f) out.push_back(to_rational(g));
  return out;
}

}  // namespace detail

/// Exact multivariate division: the remainder has no monomial divisible by a
/// leading monomial of `divisors`, and f - remainder lies in their ideal.
/// Divisors are tried in the given order.
inline QPolynomial normal_form(const QPolynomial& f, std::span<const QPolynomial> divisors) {
  const RingPtr& ring = f.ring();
  for (const auto& g : divisors) f.check_ring(g);
  detail::WorkMap<Rational> work(detail::Descending{&ring->order});
  for (const auto& t : f.terms()) work.emplace(t.monomial, t.coeff);
  std::vector<Term<Rational>> rem;
  while (!work.empty()) {
    auto it = work.begin();
    const QPolynomial* g = nullptr;
    for (const auto& cand : divisors) {
      if (!cand.is_zero() && cand.leading_monomial().divides(it->first)) {
        g = &cand;
        break;
      }
    }
    if (g == nullptr) {
      rem.push_back({it->first, std::move(it->second)});
      work.erase(it);
      continue;
    }
    Monomial q = it->first / g->leading_monomial();
    Rational c = it->second / g->leading_coeff();
    work.erase(it);
    auto terms = g->terms();
    for (std::size_t k = 1; k < terms.size(); ++k) {
      auto [slot, inserted] = work.try_emplace(terms[k].monomial * q, 0);
      slot->second -= c * terms[k].coeff;
      if (slot->second == 0) work.erase(slot);
    }
  }
  return QPolynomial::from_sorted(ring, std::move(rem));
}

inline QPolynomial s_polynomial(const QPolynomial& f, const QPolynomial& g) {
  f.check_ring(g);
  Monomial l = lcm(f.leading_monomial(), g.leading_monomial());
  return f.mul_term(l / f.leading_monomial(), 1 / f.leading_coeff()) -
         g.mul_term(l / g.leading_monomial(), 1 / g.leading_coeff());
}

/// Reduced Groebner basis of the ideal generated by `generators` under their
/// ring's order. Throws BudgetExhausted (carrying a checkpoint) when a budget
/// in `opts` is hit.
inline GroebnerBasis buchberger(std::span<const QPolynomial> generators, const RingPtr& ring,
                                const BuchbergerOptions& opts = {}) {
  for (const auto& f : generators) f.check_ring(QPolynomial(ring));
  const std::vector<QPolynomial> prepared = detail::interreduce(generators, ring);
  auto attempt = [&](Selection selection, const BuchbergerOptions& o, std::uint64_t work_limit) {
    auto engine = std::make_unique<detail::BuchbergerEngine>(ring);
    engine->set_selection(selection);
    for (const auto& f : prepared) engine->add_generator(f);
    bool done = engine->run(o, work_limit);
    return std::pair(std::move(engine), done);
  };
  if (opts.selection != Selection::automatic || ring->order.kind() == MonomialOrder::Kind::grevlex) {
    Selection s = opts.selection == Selection::automatic ? Selection::sugar : opts.selection;
    return attempt(s, opts, UINT64_MAX).first->reduced_basis();
  }

  // Lex favours normal selection and block orders sugar; try the favourite
  // first. Pairs spent on abandoned attempts count against a pair budget.
  const Selection first = ring->order.kind() == MonomialOrder::Kind::lex ? Selection::normal : Selection::sugar;
  const Selection second = first == Selection::sugar ? Selection::normal : Selection::sugar;
  BuchbergerOptions o = opts;
  double seconds = 0;
  for (std::uint64_t limit = 1u << 14;; limit *= 2) {
    for (Selection s : {first, second}) {
      auto [engine, done] = attempt(s, o, limit);
      GroebnerBasis gb = done ? engine->reduced_basis() : GroebnerBasis{};
      seconds += engine->stats().wall_seconds;
      if (done) {
        gb.stats.wall_seconds = seconds;
        return gb;
      }
      if (o.pair_budget) *o.pair_budget -= std::min(*o.pair_budget, engine->stats().pairs);
    }
  }
}

inline GroebnerBasis buchberger(std::span<const QPolynomial> generators, const BuchbergerOptions& opts = {}) {
  if (generators.empty()) throw std::invalid_argument("buchberger: ring unknown for an empty generator list");
  return buchberger(generators, generators.front().ring(), opts);
}

/// Continues an interrupted run with the checkpoint's selection strategy
/// unless `opts` names one.
inline GroebnerBasis resume(const Checkpoint& checkpoint, const BuchbergerOptions& opts = {}) {
  detail::BuchbergerEngine engine(checkpoint);
  if (opts.selection != Selection::automatic) engine.set_selection(opts.selection);
  engine.run(opts);
  return engine.reduced_basis();
}

inline bool in_ideal(const QPolynomial& f, const GroebnerBasis& gb) {
  return normal_form(f, gb.elements).is_zero();
}

/// Every S-polynomial of a pair of basis elements reduces to zero.
inline bool satisfies_buchberger_criterion(const GroebnerBasis& gb) {
  for (std::size_t i = 0; i < gb.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < gb.elements.size(); ++j) {
      if (!in_ideal(s_polynomial(gb.elements[i], gb.elements[j]), gb)) return false;
    }
  }
  return true;
}

/// No monomial of any element is divisible by the leading monomial of another.
inline bool is_auto_reduced(const GroebnerBasis& gb) {
  for (std::size_t i = 0; i < gb.elements.size(); ++i) {
    for (std::size_t j = 0; j < gb.elements.size(); ++j) {
      if (i == j) continue;
      for (const auto& t : gb.elements[i].terms()) {
        if (gb.elements[j].leading_monomial().divides(t.monomial)) return false;
      }
    }
  }
  return true;
}

}  // namespace charvar
