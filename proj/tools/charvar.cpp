#include "charvar/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
  using namespace charvar::cli;
  RunConfig config;
  CLI::App app{"Character variety equations and module finiteness over a peripheral trace"};
  app.require_subcommand(1);

  std::string input;
  std::string order;
  std::string cache_dir, checkpoint, out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", input, "presentation file")->required();
    sub->add_option("--out", out, "write the JSON artifact here");
  };
  auto add_groebner = [&](CLI::App* sub) {
    sub->add_option("--order", order, "monomial order")->check(CLI::IsMember({"lex", "grevlex", "block"}));
    sub->add_option("--cache-dir", cache_dir, "directory for cached bases and checkpoints");
    sub->add_option("--checkpoint", checkpoint, "checkpoint file (default: derived from the ideal hash)");
    sub->add_option("--threads", config.threads, "worker threads for pair reduction")->check(CLI::PositiveNumber);
    sub->add_option("--budget-degree", config.budget_degree, "stop before pairs of higher lcm degree");
    sub->add_option("--budget-pairs", config.budget_pairs, "stop after this many pairs");
    sub->add_flag("--timing", config.timing, "record wall time in JSON output");
  };

  auto* reduce = app.add_subcommand("reduce", "reduce the trace of a word to the canonical coordinates");
  add_common(reduce);
  reduce->add_option("--word", config.word, "word in the presentation's letters")->required();

  auto* equations = app.add_subcommand("equations", "defining polynomials of the character variety");
  add_common(equations);
  equations->add_option("--slope", config.slopes, "append s - I_slope");
  equations->add_option("--order", order, "monomial order")->check(CLI::IsMember({"lex", "grevlex", "block"}));

  auto* groebner = app.add_subcommand("groebner", "reduced Groebner basis of the defining ideal");
  add_common(groebner);
  add_groebner(groebner);
  groebner->add_option("--slope", config.slopes, "append s - I_slope");

  auto* basis = app.add_subcommand("basis", "module finiteness over Q[s] for one slope");
  add_common(basis);
  add_groebner(basis);
  basis->add_option("--slope", config.slopes, "peripheral product like \"meridian^-1 * longitude\" or a word")
      ->required();

  auto* detect = app.add_subcommand("detect", "closed surface detection report over one or more slopes");
  add_common(detect);
  add_groebner(detect);
  detect->add_option("--slope", config.slopes, "repeatable")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : usage_error;
  }

  config.command = *parse_command(app.get_subcommands().front()->get_name());
  config.input = input;
  if (!order.empty()) config.order = order;
  if (!cache_dir.empty()) config.cache_dir = cache_dir;
  if (!checkpoint.empty()) config.checkpoint = checkpoint;
  if (!out.empty()) config.out = out;
  // Progress lines should appear as they happen even when redirected.
  std::cout << std::unitbuf;
  return run(config);
}
