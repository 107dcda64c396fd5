#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmc/cli.hpp"

using namespace gmc;
using namespace gmc::cli;

namespace {

void emit(const Outcome& o, bool json) {
  if (json)
    std::cout << o.json.dump(2) << "\n";
  else
    std::cout << o.text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks generalized multicategories, their free monoidal categories and modules"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Structured output");

  std::string file, second;
  std::optional<Bound> bound;
  std::uint64_t seed = 7;

  auto* check = app.add_subcommand("check", "Check the laws of a presented structure");
  check->add_option("file", file, "Source file")->required();
  check->add_option("--bound", bound, "List bound for sampled laws (default: file bound, else 3)");

  std::size_t max_len = 2;
  std::string emit_kind = "counts";
  auto* free = app.add_subcommand("free-monoidal", "List the free strict monoidal category on a multicategory");
  free->add_option("file", file, "Multicat or category file")->required();
  free->add_option("--max-len", max_len, "Longest object list")->check(CLI::Range(0, 6));
  free->add_option("--emit", emit_kind, "homs or counts")->check(CLI::IsMember({"homs", "counts"}));

  std::size_t under_len = 3;
  auto* under = app.add_subcommand("underlying", "List the underlying multicategory of a strict monoidal category");
  under->add_option("file", file, "Strictmon file")->required();
  under->add_option("--max-len", under_len, "Longest source list")->check(CLI::Range(0, 6));

  Bound adj_bound = 3;
  auto* adj = app.add_subcommand("adjunction-check", "Triangle identities and hom bijection for a pair");
  adj->add_option("multicat", file, "Multicat or category file")->required();
  adj->add_option("strictmon", second, "Strictmon file")->required();
  adj->add_option("--bound", adj_bound, "List bound")->check(CLI::Range(0, 6));
  adj->add_option("--seed", seed, "Seed recorded in the reports");

  std::vector<std::string> suites{"all"};
  SuiteOptions opts;
  std::string mutation;
  auto* laws = app.add_subcommand("laws", "Run law suites on generated batteries");
  laws->add_option("--suite", suites, "Suite names or 'all'");
  laws->add_option("--samples", opts.samples, "Generated instances per family");
  laws->add_option("--seed", opts.seed, "Seed for every generator");
  laws->add_option("--bound", opts.bound, "List bound")->check(CLI::Range(0, 6));
  laws->add_option("--mutate", mutation, "Break the named law on purpose");

  auto* print = app.add_subcommand("print", "Pretty-print a source file in canonical form");
  print->add_option("file", file, "Source file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Outcome out;
  try {
    if (*check) {
      out = cmd_check(read_source(file), bound);
    } else if (*free) {
      out = cmd_free_monoidal(read_source(file), max_len, emit_kind == "homs" ? Emit::Homs : Emit::Counts);
    } else if (*under) {
      out = cmd_underlying(read_source(file), under_len);
    } else if (*adj) {
      out = cmd_adjunction_check(read_source(file), read_source(second), adj_bound, seed);
    } else if (*laws) {
      std::vector<Suite> chosen;
      for (const auto& s : suites) {
        if (s == "all") {
          for (const auto& [k, n] : suite_names()) chosen.push_back(k);
        } else if (auto k = parse_suite(s)) {
          chosen.push_back(*k);
        } else {
          out = usage_error("unknown suite " + s);
          std::cerr << out.text;
          if (json) std::cout << out.json.dump(2) << "\n";
          return out.code;
        }
      }
      if (!mutation.empty()) opts.mutation = mutation;
      out = cmd_laws(chosen, opts);
    } else if (*print) {
      out = cmd_print(read_source(file));
    }
  } catch (const SyntaxError& e) {
    out = usage_error(e.file + ":" + std::to_string(e.loc.line) + ":" + std::to_string(e.loc.col) + ": " + e.message);
    std::cerr << out.text;
    if (json) std::cout << out.json.dump(2) << "\n";
    return out.code;
  } catch (const error& e) {
    out = usage_error(e.what());
    std::cerr << out.text;
    if (json) std::cout << out.json.dump(2) << "\n";
    return out.code;
  }
  emit(out, json);
  return out.code;
}
