// gamow: command-line front end for the decay-operator and residue checks.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gamow/commands.hpp"
#include "gamow/io.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  double tol = 0.0;
  int r = 0;
  int j = 0;
  double gamma = 0.0;
  double energy = 0.0;
  int n = 0;
  bool prefactor = false;
  std::vector<int> dyad;
  double t_end = 0.0;
  int steps = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--out", f.out, "Output file (default: stdout)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--energy", f.energy, "Resonance energy E_R");
  sub->add_option("--gamma", f.gamma, "Width Gamma (> 0)");
}

}  // namespace

int main(int argc, char** argv) {
  // Every computation is deterministic; the seed variable is read for
  // interface compatibility only.
  (void)std::getenv("GAMOW_SEED");

  CLI::App app{"Gamow vectors of higher-order S-matrix poles"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* evolve = app.add_subcommand("evolve", "Evolve a dyadic operator and sample its matrix entries");
  add_common(evolve, f);
  evolve->add_option("--config", f.config, "JSON run configuration");
  evolve->add_option("--r", f.r, "Pole order r");
  evolve->add_option("--n", f.n, "Evolve W^(n)");
  evolve->add_flag("--prefactor", f.prefactor, "Include Gamma^n/n! in W^(n)");
  evolve->add_option("--dyad", f.dyad, "Evolve |z_R^(k)><z_R^(m)| given as k m")->expected(2);
  evolve->add_option("--t-end", f.t_end, "Last sample time (> 0)");
  evolve->add_option("--steps", f.steps, "Number of samples (>= 2)");

  CLI::App* expcheck = app.add_subcommand("exp-check", "Solve the exponentiality constraints");
  add_common(expcheck, f);
  expcheck->add_option("--config", f.config, "JSON run configuration");
  expcheck->add_option("--r", f.r, "Pole order r (checks j = 2(r-1) and the restricted system)");
  expcheck->add_option("--j", f.j, "Order bound j");

  CLI::App* residue = app.add_subcommand("residue", "Check the background plus residue decomposition");
  add_common(residue, f);
  residue->add_option("--config", f.config, "Model JSON file")->required();
  residue->add_option("--tol", f.tol, "Relative tolerance (default: model file, else 1e-8)");

  CLI::App* basis = app.add_subcommand("basis", "Exponential-subspace basis W^(0..r-1)");
  add_common(basis, f);
  basis->add_option("--config", f.config, "JSON run configuration");
  basis->add_option("--r", f.r, "Pole order r")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? gamow::kExitOk : gamow::kExitInputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  gamow::RunConfig config;
  config.command = sub->get_name();
  try {
    if (config.command == "residue") {
      config.model_path = f.config;
    } else if (!f.config.empty()) {
      config = gamow::merge_run_config(config, gamow::read_text_file(f.config));
      config.command = sub->get_name();
    }
  } catch (const gamow::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gamow::kExitInputError;
  }

  auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--out")) config.out_path = f.out;
  if (given("--format")) config.format = f.format == "csv" ? gamow::OutputFormat::Csv : gamow::OutputFormat::Json;
  if (given("--energy")) config.energy = f.energy;
  if (given("--gamma")) config.gamma = f.gamma;
  if (given("--tol")) config.tolerance = f.tol;
  if (given("--r")) config.order = f.r;
  if (given("--j")) config.order_bound = f.j;
  if (given("--t-end")) config.t_end = f.t_end;
  if (given("--steps")) config.steps = f.steps;
  if (given("--n") || given("--prefactor")) {
    config.op.kind = gamow::OperatorKind::GammaState;
    if (given("--n")) config.op.n = f.n;
    config.op.include_prefactor = f.prefactor;
  }
  if (given("--dyad")) {
    config.op.kind = gamow::OperatorKind::Dyad;
    config.op.dyad = {f.dyad[0], f.dyad[1]};
  }

  return gamow::run_command(config, std::cout, std::cerr);
}
