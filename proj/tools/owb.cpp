#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "owb/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ordered crossed products and Beurling algebras of finite dynamical systems"};
  app.require_subcommand(1);
  std::string out_file;
  app.add_option("--out", out_file, "Write the JSON report to this file");

  std::string config;
  owb::CrossedFlags crossed_flags;
  owb::BeurlingFlags beurling_flags;
  std::uint64_t seed = 42;
  std::size_t count = 100;
  owb::CorpusOptions caps{8, 4, true};

  auto* check = app.add_subcommand("check", "Validate group, algebra, action and representations");
  check->add_option("file", config, "System configuration (JSON)")->required();

  auto* crossed = app.add_subcommand("crossed", "Build the pre-ordered crossed product");
  crossed->add_option("file", config, "System configuration (JSON)")->required();
  crossed->add_flag("--report-cone", crossed_flags.report_cone, "Cone geometry of the quotient");
  crossed->add_flag("--correspond", crossed_flags.correspond, "Round trips of the ordered correspondence");
  crossed->add_flag("--triple", crossed_flags.triple, "Verify the canonical generating triple");

  auto* beurling = app.add_subcommand("beurling", "Generalized Beurling algebra checks");
  beurling->add_option("file", config, "System configuration with a weight (JSON)")->required();
  beurling->add_flag("--bounds", beurling_flags.bounds, "Representation bounds");
  beurling->add_flag("--lattice", beurling_flags.lattice, "Lattice structure");
  beurling->add_flag("--classical", beurling_flags.classical, "Scalar-algebra corollary");

  auto* random = app.add_subcommand("random", "Invariant battery on random systems");
  random->add_option("--seed", seed, "Generator seed");
  random->add_option("--count", count, "Number of instances");
  random->add_option("--max-order", caps.max_order, "Largest group order")->check(CLI::Range(1, 8));
  random->add_option("--max-dim", caps.max_dim, "Largest algebra dimension")->check(CLI::Range(1, 4));

  for (auto* sub : {check, crossed, beurling, random}) sub->add_option("--out", out_file, "Write the JSON report");

  CLI11_PARSE(app, argc, argv);

  owb::Report report;
  if (check->parsed()) report = owb::cmd_check(config);
  if (crossed->parsed()) report = owb::cmd_crossed(config, crossed_flags);
  if (beurling->parsed()) report = owb::cmd_beurling(config, beurling_flags);
  if (random->parsed()) report = owb::cmd_random(seed, count, caps);

  std::cout << report.to_text();
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    if (!out) {
      std::cerr << "cannot write " << out_file << "\n";
      return 2;
    }
    out << report.to_json().dump(2) << "\n";
  }
  return report.failures() == 0 ? 0 : 1;
}
