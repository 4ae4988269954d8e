#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "partact/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"partact — groupoid twisted partial actions, crossed products, and partial representations"};
  app.require_subcommand(1);

  partact::CliOptions opt;
  std::string input;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", input, "workspace file")->required();
    sub->add_option("--format", opt.format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", opt.seed,
                    "seed recorded in the report; used only when generating randomized test corpora");
    sub->add_option("--max-groupoid", opt.max_groupoid, "cap on groupoid size for constructions");
    sub->add_option("--max-schur-groupoid", opt.max_schur_groupoid, "cap on groupoid size for schur enumeration");
    sub->add_option("--max-schur-field", opt.max_schur_field, "cap on field size for schur enumeration");
    sub->add_option("--max-semigroup", opt.max_semigroup, "cap on materialized semigroup size");
    return sub;
  };

  add_common(app.add_subcommand("verify-action", "check the groupoid and twisted-partial-action axioms"));
  add_common(app.add_subcommand("crossed-product", "build R x| G and certify associativity and unity"));
  auto* glob = add_common(app.add_subcommand("globalize", "check extendability, build the enveloping action"));
  glob->add_flag("--star-literal", opt.star_literal, "evaluate the printed form of condition (*) instead");
  glob->add_option("--out", opt.out_path, "write the constructed global action to this file");
  glob->add_option("--extension", opt.extension_path, "read the [extension] block from a separate file");
  auto* mor = add_common(app.add_subcommand("morita-check", "verify the Morita context between A and B"));
  mor->add_option("--extension", opt.extension_path, "read the [extension] block from a separate file");
  add_common(app.add_subcommand("exel", "build and certify the Exel inverse category E(G)"));
  add_common(app.add_subcommand("cocycle-check", "verify factor sets and partial representations"));
  add_common(app.add_subcommand("schur", "enumerate pm(G) and the partial Schur multiplier data"));
  add_common(app.add_subcommand("semigroup-action", "convert to the K-semigroup picture and verify it"));
  add_common(app.add_subcommand("roundtrip", "run the representation/action correspondences both ways"));

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  partact::RunResult result = partact::run_command(command, input, opt);
  if (opt.format == "json")
    std::cout << result.report.dump(2) << "\n";
  else
    std::cout << partact::render_text(result.report);
  return result.exit_code;
}
