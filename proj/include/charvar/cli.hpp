#pragma once

#include "charvar/charvariety.hpp"
#include "charvar/finiteness.hpp"
#include "charvar/groebner.hpp"
#include "charvar/json_io.hpp"
#include "charvar/presentation.hpp"
#include "charvar/trace.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace charvar::cli {

enum ExitCode : int {
  ok = 0,
  io_error = 1,
  usage_error = 2,
  parse_error = 3,
  unsupported_rank = 4,
  budget_exhausted = 5,
  internal_error = 6,
};

enum class Command { reduce, equations, groebner, basis, detect };

inline std::optional<Command> parse_command(std::string_view name) {
  if (name == "reduce") return Command::reduce;
  if (name == "equations") return Command::equations;
  if (name == "groebner") return Command::groebner;
  if (name == "basis") return Command::basis;
  if (name == "detect") return Command::detect;
  return std::nullopt;
}

struct RunConfig {
  Command command = Command::equations;
  std::filesystem::path input;
  std::vector<std::string> slopes;
  std::optional<std::string> word;
  std::optional<std::string> order;  // lex, grevlex or block
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> checkpoint;
  unsigned threads = 1;
  std::optional<std::uint32_t> budget_degree;
  std::optional<std::uint64_t> budget_pairs;
  std::optional<std::filesystem::path> out;
  bool timing = false;
};

/// Failure tagged with the pipeline stage and exit code.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, int code, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)), code_(code) {}
  const std::string& stage() const { return stage_; }
  int code() const { return code_; }

 private:
  std::string stage_;
  int code_;
};

namespace detail {

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StageError("input", io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void validate(const RunConfig& c) {
  bool needs_slope = c.command == Command::basis || c.command == Command::detect;
  if (needs_slope && c.slopes.empty()) throw StageError("config", usage_error, "--slope is required for this command");
  if (c.command == Command::basis && c.slopes.size() != 1) {
    throw StageError("config", usage_error, "basis takes exactly one --slope");
  }
  if ((c.command == Command::groebner || c.command == Command::equations) && c.slopes.size() > 1) {
    throw StageError("config", usage_error, "at most one --slope for this command");
  }
  if (c.command == Command::reduce && !c.word) throw StageError("config", usage_error, "reduce needs --word");
  if (c.threads == 0) throw StageError("config", usage_error, "--threads must be positive");
  if (c.order && *c.order != "lex" && *c.order != "grevlex" && *c.order != "block") {
    throw StageError("config", usage_error, "--order must be lex, grevlex or block");
  }
}

// Ring order requested for an ideal. Without a slope, "block" has no split
// and means grevlex.
inline MonomialOrder order_for(const RunConfig& c, const VarietyIdeal& ideal) {
  std::string name = c.order.value_or(ideal.has_slope() ? "block" : "grevlex");
  if (name == "block") {
    return ideal.has_slope() ? MonomialOrder::block(ideal.ring->nvars() - 1) : MonomialOrder::grevlex();
  }
  return MonomialOrder::parse(name);
}

inline VarietyIdeal reorder(VarietyIdeal ideal, const MonomialOrder& order) {
  RingPtr ring = make_ring(ideal.ring->names, order);
  for (auto& g : ideal.generators) g = g.in_ring(ring);
  ideal.ring = ring;
  return ideal;
}

class Pipeline {
 public:
  Pipeline(const RunConfig& config, std::ostream& out) : c_(config), out_(out) {
    std::string text = read_text(c_.input);
    try {
      p_ = parse_presentation(text);
    } catch (const ParseError& e) {
      throw StageError("parse", parse_error, c_.input.string() + ": " + e.what());
    }
    engine_.emplace(p_.rank());
    out_ << "presentation: " << c_.input.filename().string() << ", " << p_.rank() << " generators, "
         << p_.relators.size() << " relators\n";
    out_ << "coordinates: ";
    for (std::size_t i = 0; i < engine_->ring()->nvars(); ++i) {
      out_ << (i ? " " : "") << engine_->ring()->names[i] << "=I_" << p_.alphabet.print(engine_->coordinates()[i].word(p_.rank()));
    }
    out_ << "\n";
  }

  int run() {
    switch (c_.command) {
      case Command::reduce: return reduce();
      case Command::equations: return equations();
      case Command::groebner: return groebner();
      case Command::basis: return basis();
      case Command::detect: return detect();
    }
    return internal_error;
  }

 private:
  Word slope_word(const std::string& selector) {
    try {
      return compile_slope(p_, selector);
    } catch (const ParseError& e) {
      throw StageError("slope", parse_error, e.what());
    }
  }

  VarietyIdeal ideal(std::optional<std::string> slope) {
    VarietyIdeal v;
    try {
      v = variety_ideal(p_, *engine_);
    } catch (const UnsupportedRank& e) {
      throw StageError("equations", unsupported_rank, e.what());
    }
    out_ << "defining polynomials: " << v.generators.size() << " in " << v.ring->nvars() << " coordinates\n";
    if (slope) {
      Word alpha = slope_word(*slope);
      v = augment_with_slope(v, alpha, *engine_);
      out_ << "slope: " << *slope << " = " << p_.alphabet.print(alpha) << "; with s - I_alpha: "
           << v.generators.size() << " polynomials in " << v.ring->nvars() << " coordinates\n";
      for (const auto& w : v.warnings) out_ << "warning: " << w << "\n";
    }
    return v;
  }

  void emit(const Json& j) {
    if (!c_.out) return;
    try {
      write_json_file(*c_.out, j);
    } catch (const std::exception& e) {
      throw StageError("output", io_error, e.what());
    }
    out_ << "wrote " << c_.out->string() << "\n";
  }

  std::filesystem::path checkpoint_path(const std::string& key) const {
    if (c_.checkpoint) return *c_.checkpoint;
    GroebnerCache naming(c_.cache_dir.value_or("."));
    auto path = naming.path_for(key);
    path.replace_extension(".checkpoint.json");
    return path;
  }

  // Cache lookup, then resume from a matching checkpoint or start fresh. On
  // budget exhaustion the checkpoint is written and the error rethrown.
  GroebnerBasis compute_basis(const VarietyIdeal& v) {
    Json ideal_json = ideal_to_json(v);
    const MonomialOrder& order = v.ring->order;
    std::optional<GroebnerCache> cache;
    if (c_.cache_dir) cache.emplace(*c_.cache_dir);
    if (cache) {
      if (auto hit = cache->load(ideal_json, order)) {
        out_ << "groebner: cache hit\n";
        return *hit;
      }
    }
    std::string key = GroebnerCache::key(ideal_json, order);
    auto cp_path = checkpoint_path(key);
    BuchbergerOptions opts{c_.threads, c_.budget_degree, c_.budget_pairs};
    GroebnerBasis gb;
    try {
      if (std::filesystem::exists(cp_path)) {
        Json j = read_json_file(cp_path);
        if (j.value("key", std::string()) != key) {
          throw StageError("groebner", usage_error, cp_path.string() + " is a checkpoint for a different ideal");
        }
        out_ << "groebner: resuming from " << cp_path.string() << "\n";
        gb = resume(checkpoint_from_json(j.at("checkpoint")), opts);
      } else {
        out_ << "groebner: computing under " << order.descriptor() << " order, " << c_.threads << " thread"
             << (c_.threads == 1 ? "" : "s") << "\n";
        gb = buchberger(v.generators, v.ring, opts);
      }
    } catch (const BudgetExhausted& e) {
      try {
        write_json_file(cp_path, {{"key", key}, {"checkpoint", checkpoint_to_json(e.checkpoint())}});
      } catch (const std::exception& io) {
        throw StageError("groebner", io_error, std::string(e.what()) + "; checkpoint not written: " + io.what());
      }
      throw StageError("groebner", budget_exhausted,
                       std::string(e.what()) + "; checkpoint written to " + cp_path.string() + " (rerun to resume)");
    } catch (const FormatError& e) {
      throw StageError("groebner", io_error, cp_path.string() + ": " + e.what());
    }
    if (std::filesystem::exists(cp_path)) std::filesystem::remove(cp_path);
    if (cache) cache->store(ideal_json, order, gb);
    out_ << "groebner: " << gb.elements.size() << " basis elements, " << gb.stats.pairs << " pairs, max degree "
         << gb.stats.max_degree << "\n";
    return gb;
  }

  FinitenessVerdict verdict_for(const VarietyIdeal& v) {
    if (!eliminates_slope_last(*v.ring, v.slope_index())) {
      throw StageError("config", usage_error, "finiteness needs --order block or lex, not " + v.ring->order.descriptor());
    }
    return finiteness_from_basis(compute_basis(v), v.slope_index());
  }

  void print_verdict(const FinitenessVerdict& f) {
    if (f.finitely_generated) {
      out_ << "verdict: finitely generated over Q[s], " << f.generating_monomials.size() << " generating monomials\n";
      auto names = monomial_strings(f);
      out_ << "generators:";
      for (const auto& n : names) out_ << " " << n;
      out_ << "\n";
    } else {
      out_ << "verdict: not finitely generated over Q[s]; no pure power for";
      for (const auto& n : f.variables_without_witness()) out_ << " " << n;
      out_ << "\n";
    }
  }

  int reduce() {
    Word w;
    try {
      w = p_.alphabet.parse(*c_.word);
    } catch (const ParseError& e) {
      throw StageError("parse", parse_error, e.what());
    }
    const QPolynomial& poly = engine_->reduce(w);
    out_ << to_string(poly) << "\n";
    emit({{"word", p_.alphabet.print(w)},
          {"coordinates", engine_->ring()->names},
          {"polynomial", polynomial_to_json(poly)},
          {"text", to_string(poly)}});
    return ok;
  }

  int equations() {
    VarietyIdeal v = ideal(c_.slopes.empty() ? std::nullopt : std::optional(c_.slopes[0]));
    v = reorder(std::move(v), order_for(c_, v));
    for (std::size_t i = 0; i < v.generators.size(); ++i) out_ << "p" << i << " = " << to_string(v.generators[i]) << "\n";
    emit(ideal_to_json(v));
    return ok;
  }

  int groebner() {
    VarietyIdeal v = ideal(c_.slopes.empty() ? std::nullopt : std::optional(c_.slopes[0]));
    v = reorder(std::move(v), order_for(c_, v));
    GroebnerBasis gb = compute_basis(v);
    for (std::size_t i = 0; i < gb.elements.size(); ++i) out_ << "g" << i << " = " << to_string(gb.elements[i]) << "\n";
    emit(basis_to_json(gb, c_.timing));
    return ok;
  }

  int basis() {
    VarietyIdeal v = ideal(c_.slopes[0]);
    v = reorder(std::move(v), order_for(c_, v));
    FinitenessVerdict f = verdict_for(v);
    print_verdict(f);
    Json j = verdict_to_json(f, c_.timing);
    j["slope"] = p_.alphabet.print(*v.slope_word);
    emit(j);
    return ok;
  }

  int detect() {
    std::vector<SlopeResult> results;
    for (const auto& s : c_.slopes) {
      VarietyIdeal v = ideal(s);
      v = reorder(std::move(v), order_for(c_, v));
      FinitenessVerdict f = verdict_for(v);
      print_verdict(f);
      results.push_back({p_.alphabet.print(*v.slope_word), std::move(f), v.warnings});
    }
    DetectionReport r = assemble_report(std::move(results));
    out_ << "conclusion: " << to_string(r.conclusion) << "\n";
    for (const auto& line : r.narrative) out_ << "  " << line << "\n";
    emit(report_to_json(r, c_.timing));
    return ok;
  }

  const RunConfig& c_;
  std::ostream& out_;
  GroupPresentation p_;
  std::optional<ReductionEngine> engine_;
};

}  // namespace detail

/// Runs one command. Errors go to `err` as "error [stage]: message" and map
/// to the ExitCode values.
inline int run(const RunConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    detail::validate(config);
    detail::Pipeline pipeline(config, out);
    return pipeline.run();
  } catch (const StageError& e) {
    err << "error [" << e.stage() << "]: " << e.what() << "\n";
    return e.code();
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [io]: " << e.what() << "\n";
    return io_error;
  } catch (const std::bad_alloc&) {
    err << "error [internal]: out of memory\n";
    return internal_error;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return internal_error;
  }
}

}  // namespace charvar::cli
