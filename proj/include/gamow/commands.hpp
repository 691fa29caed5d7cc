#pragma once

// Subcommands behind the `gamow` executable. Each takes a validated
// RunConfig, writes its artifact to `out`, diagnostics to `err`, and returns
// an exit code.

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "gamow/exact.hpp"

namespace gamow {

enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitInputError = 2 };

enum class OutputFormat { Csv, Json };

enum class OperatorKind { GammaState, Dyad, Table };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::GammaState;
  int n = 0;                       // GammaState: W^(n)
  bool include_prefactor = false;  // GammaState: Gamma^n / n!
  std::pair<int, int> dyad{0, 0};  // Dyad: (ket order, bra order)
  MatrixX<std::complex<double>> b_table;  // Table: b_table(m, k) = B_{m,k}
};

struct RunConfig {
  std::string command;
  double energy = 1.0;
  double gamma = 1.0;
  std::optional<int> order;        // r
  std::optional<int> order_bound;  // j
  OperatorSpec op;
  std::string model_path;
  std::string out_path;  // empty: standard output
  std::optional<OutputFormat> format;  // default: csv for evolve, json otherwise
  std::optional<double> tolerance;     // residue: defaults to the model file's, then 1e-8
  double t_end = 5.0;
  int steps = 51;

  /// Throws InputError on t_end <= 0, steps < 2, or missing/invalid orders.
  void validate() const;
};

/// Fields of a JSON run configuration are merged into `base`.
RunConfig merge_run_config(RunConfig base, const std::string& json_text);

int cmd_evolve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_expcheck(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_residue(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_basis(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command, mapping InputError to exit code 2.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gamow
