#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "circlebench/workbench.hpp"

namespace {

void add_output_options(CLI::App* cmd, circlebench::RunConfig& cfg) {
  cmd->add_flag("--json", cfg.json, "Emit one JSON document instead of CSV");
  cmd->add_option("--output", cfg.output_path, "Write the report to this file");
}

void add_limit_options(CLI::App* cmd, circlebench::RunConfig& cfg) {
  cmd->add_option("--depth-cap", cfg.limits.depth_cap, "Maximum word length");
  cmd->add_option("--cell-cap", cfg.limits.cell_cap, "Maximum cylinders per level");
  cmd->add_option("--work-cap", cfg.limits.work_cap, "Maximum work units (overrides CIRCLEBENCH_WORK_CAP)");
  cmd->add_option("--conjugacy-depth-cap", cfg.conjugacy_depth_cap, "Maximum refinement depth for h");
}

void add_pair_options(CLI::App* cmd, circlebench::RunConfig& cfg) {
  cmd->add_option("--from", cfg.from_path, "Map spec f (JSON)");
  cmd->add_option("--to", cfg.to_path, "Map spec g (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
  circlebench::RunConfig cfg;
  if (!circlebench::apply_environment(cfg)) {
    std::cerr << "error: CIRCLEBENCH_WORK_CAP must be a positive number\n";
    return circlebench::exit_validation;
  }

  CLI::App app{"Workbench for expanding circle endomorphisms"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a map or homeomorphism spec");
  validate->add_option("--map", cfg.map_path, "Map spec (JSON)");
  validate->add_option("--homeo", cfg.homeo_path, "Homeomorphism spec (JSON)");
  add_output_options(validate, cfg);

  auto* partition = app.add_subcommand("partition", "List the level-n Markov cylinders");
  partition->add_option("--map", cfg.map_path, "Map spec (JSON)")->required();
  partition->add_option("--level", cfg.level, "Partition level n")->required();
  add_limit_options(partition, cfg);
  add_output_options(partition, cfg);

  auto* conjugacy = app.add_subcommand("conjugacy", "Evaluate h with h o f = g o h");
  add_pair_options(conjugacy, cfg);
  conjugacy->get_option("--from")->required();
  conjugacy->get_option("--to")->required();
  conjugacy->add_option("--grid", cfg.grid, "Evaluate at x = j / grid");
  conjugacy->add_option("--tol", cfg.tolerance, "Enclosure width target");
  conjugacy->add_option("--level", cfg.level, "Print the level-n endpoint table instead");
  add_limit_options(conjugacy, cfg);
  add_output_options(conjugacy, cfg);

  auto* analyze = app.add_subcommand("analyze", "Distortion and measure statistics");
  analyze->require_subcommand(1);
  for (const char* name : {"qs", "symmetry", "uqs", "measure", "phi", "tailsum"}) {
    auto* sub = analyze->add_subcommand(name);
    sub->callback([&cfg, name] { cfg.subcommand = name; });
    add_limit_options(sub, cfg);
    add_output_options(sub, cfg);
  }
  auto* qs = analyze->get_subcommand("qs");
  qs->description("Quasisymmetry ratio of h at (x, t)");
  qs->add_option("--homeo", cfg.homeo_path, "Homeomorphism spec (JSON)");
  add_pair_options(qs, cfg);
  qs->add_option("--tol", cfg.tolerance, "Conjugacy enclosure width");
  qs->add_option("--x", cfg.x)->required();
  qs->add_option("--t", cfg.t)->required();

  auto* symmetry = analyze->get_subcommand("symmetry");
  symmetry->description("Sampled symmetry modulus at t = 2^-j");
  symmetry->add_option("--homeo", cfg.homeo_path, "Homeomorphism spec (JSON)");
  add_pair_options(symmetry, cfg);
  symmetry->add_option("--tol", cfg.tolerance, "Conjugacy enclosure width");
  symmetry->add_option("--grid", cfg.grid, "Sample x = k / grid");
  symmetry->add_option("--jmax", cfg.j_max, "Largest dyadic exponent");

  auto* uqs = analyze->get_subcommand("uqs");
  uqs->description("Distortion ratios of f^-n for n = 1..N");
  uqs->add_option("--map", cfg.map_path)->required();
  uqs->add_option("--x", cfg.x)->required();
  uqs->add_option("--t", cfg.t)->required();
  uqs->add_option("--n", cfg.n)->required();

  auto* measure = analyze->get_subcommand("measure");
  measure->description("Preimage lengths of dyadic intervals");
  measure->add_option("--map", cfg.map_path)->required();
  measure->add_option("--dyadic-level", cfg.dyadic_level, "Use intervals of length 2^-L");

  auto* phi = analyze->get_subcommand("phi");
  phi->description("Dilatation ratios of the conjugacy on cylinders");
  add_pair_options(phi, cfg);
  phi->get_option("--from")->required();
  phi->get_option("--to")->required();
  phi->add_option("--level", cfg.level)->required();
  phi->add_option("--coarse", cfg.coarse_level, "Group maxima by level-m cells");
  phi->add_flag("--cells", cfg.cells, "Print the per-cell maxima");

  auto* tailsum = analyze->get_subcommand("tailsum");
  tailsum->description("Tail sums S_k for the cylinder of a word");
  tailsum->add_option("--map", cfg.map_path)->required();
  tailsum->add_option("--word", cfg.word)->required();
  tailsum->add_option("--kmax", cfg.k_max)->required();
  tailsum->add_flag("--enumerate", cfg.enumerate, "Enumerate even when a closed form exists");

  auto* repro = app.add_subcommand("repro", "Reproduce the reference experiments");
  repro->require_subcommand(1);
  auto* falpha = repro->add_subcommand("falpha-uqs", "Distortion ratios of the two-slope family");
  falpha->add_option("--alpha", cfg.alpha);
  falpha->add_option("--t", cfg.t);
  falpha->add_option("--n", cfg.n);
  auto* rigidity = repro->add_subcommand("rigidity-demo", "Rigidity and its contrapositive");
  auto* all = repro->add_subcommand("all", "Every experiment");
  for (auto* sub : {falpha, rigidity, all}) {
    const std::string name = sub->get_name();
    sub->callback([&cfg, name] { cfg.subcommand = name; });
    add_limit_options(sub, cfg);
    add_output_options(sub, cfg);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? circlebench::exit_ok : circlebench::exit_validation;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return circlebench::run(cfg, std::cout, std::cerr);
}
