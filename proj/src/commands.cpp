#include "gamow/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gamow/decay_operators.hpp"
#include "gamow/io.hpp"
#include "gamow/jordan_core.hpp"
#include "gamow/smatrix_model.hpp"

namespace gamow {

using nlohmann::json;

namespace {

constexpr double kDecayCurveTolerance = 1e-12;

OutputFormat format_or(const RunConfig& config, OutputFormat fallback) { return config.format.value_or(fallback); }

void require_json_format(const RunConfig& config) {
  if (format_or(config, OutputFormat::Json) != OutputFormat::Json)
    throw InputError(config.command + ": only json output is supported");
}

int require_order(const RunConfig& config) {
  if (!config.order) throw InputError(config.command + ": pole order --r is required");
  return *config.order;
}

ComplexPole<Rational> exact_pole(const RunConfig& config, int order) {
  return {Rational::from_double(config.energy), Rational::from_double(config.gamma), order};
}

ComplexRational exact_complex(std::complex<double> z) {
  return {Rational::from_double(z.real()), Rational::from_double(z.imag())};
}

DyadicOperator<Rational> build_operator(const RunConfig& config, const ComplexPole<Rational>& pole) {
  const OperatorSpec& spec = config.op;
  const int r = pole.order();
  switch (spec.kind) {
    case OperatorKind::GammaState:
      return build_W_n(pole, spec.n, spec.include_prefactor);
    case OperatorKind::Dyad: {
      auto [k, m] = spec.dyad;
      if (k < 0 || k >= r || m < 0 || m >= r) throw InputError("evolve: dyad orders must lie in [0, r-1]");
      CoefficientMatrix<Rational> b = CoefficientMatrix<Rational>::b_form(r);
      b.set(m, k, ComplexRational(1));
      return build_general_W(pole, b);
    }
    case OperatorKind::Table: {
      if (spec.b_table.rows() != r || spec.b_table.cols() != r)
        throw InputError("evolve: coefficient table must be r x r");
      MatrixX<ComplexRational> b(r, r);
      for (int m = 0; m < r; ++m)
        for (int k = 0; k < r; ++k) b(m, k) = exact_complex(spec.b_table(m, k));
      return build_general_W(pole, CoefficientMatrix<Rational>::b_form(std::move(b)));
    }
  }
  throw InputError("evolve: unknown operator kind");
}

void write_output(const RunConfig& config, const std::string& payload, std::ostream& out) {
  if (config.out_path.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(config.out_path);
  if (!file) throw InputError("cannot write '" + config.out_path + "'");
  file << payload;
}

json b_tables_to_json(const std::vector<MatrixX<Rational>>& tables) {
  json out = json::array();
  for (const auto& t : tables) out.push_back(rational_matrix_to_json(t));
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("Gamma must be a positive finite number");
  if (!std::isfinite(energy)) throw InputError("E_R must be finite");
  if (order && *order < 1) throw InputError("r must be at least 1");
  if (order_bound && *order_bound < 0) throw InputError("j must be nonnegative");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InputError("time grid: t_end must be positive");
  if (steps < 2) throw InputError("time grid: steps must be at least 2");
  if (tolerance && !(*tolerance > 0.0)) throw InputError("tolerance must be positive");
}

RunConfig merge_run_config(RunConfig base, const std::string& json_text) {
  const json doc = parse_json_text(json_text, "config");
  if (!doc.is_object()) throw InputError("config: top-level value must be an object");
  auto number = [&](const json& obj, const char* key, const std::string& ctx) {
    if (!obj.at(key).is_number()) throw InputError(ctx + ": field '" + key + "' must be a number");
    return obj.at(key).get<double>();
  };
  auto integer = [&](const json& obj, const char* key, const std::string& ctx) {
    if (!obj.at(key).is_number_integer()) throw InputError(ctx + ": field '" + key + "' must be an integer");
    return obj.at(key).get<int>();
  };

  if (doc.contains("command")) base.command = doc.at("command").get<std::string>();
  if (doc.contains("E_R")) base.energy = number(doc, "E_R", "config");
  if (doc.contains("Gamma")) base.gamma = number(doc, "Gamma", "config");
  if (doc.contains("r")) base.order = integer(doc, "r", "config");
  if (doc.contains("j")) base.order_bound = integer(doc, "j", "config");
  if (doc.contains("tol")) base.tolerance = number(doc, "tol", "config");
  if (doc.contains("out")) base.out_path = doc.at("out").get<std::string>();
  if (doc.contains("model")) base.model_path = doc.at("model").get<std::string>();
  if (doc.contains("format")) {
    const std::string f = doc.at("format").get<std::string>();
    if (f != "csv" && f != "json") throw InputError("config: field 'format' must be \"csv\" or \"json\"");
    base.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  }
  if (doc.contains("time_grid")) {
    const json& g = doc.at("time_grid");
    if (g.contains("t_start") && number(g, "t_start", "config.time_grid") != 0.0)
      throw InputError("config.time_grid: t_start must be 0");
    if (g.contains("t_end")) base.t_end = number(g, "t_end", "config.time_grid");
    if (g.contains("steps")) base.steps = integer(g, "steps", "config.time_grid");
  }
  if (doc.contains("operator")) {
    const json& o = doc.at("operator");
    const std::string ctx = "config.operator";
    const std::string kind = o.value("kind", std::string("W"));
    if (kind == "W") {
      base.op.kind = OperatorKind::GammaState;
      if (o.contains("n")) base.op.n = integer(o, "n", ctx);
      base.op.include_prefactor = o.value("prefactor", false);
    } else if (kind == "dyad") {
      base.op.kind = OperatorKind::Dyad;
      base.op.dyad = {integer(o, "ket", ctx), integer(o, "bra", ctx)};
    } else if (kind == "table") {
      base.op.kind = OperatorKind::Table;
      if (!o.contains("B") || !o.at("B").is_array()) throw InputError(ctx + ": field 'B' must be an array of rows");
      const json& rows = o.at("B");
      const auto n = static_cast<Eigen::Index>(rows.size());
      base.op.b_table.resize(n, n);
      for (Eigen::Index m = 0; m < n; ++m) {
        const json& row = rows[static_cast<std::size_t>(m)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
          throw InputError(ctx + ": 'B' must be square");
        for (Eigen::Index k = 0; k < n; ++k)
          base.op.b_table(m, k) = complex_from_json(
              row[static_cast<std::size_t>(k)], "operator.B[" + std::to_string(m) + "][" + std::to_string(k) + "]");
      }
    } else {
      throw InputError(ctx + ": unknown kind '" + kind + "' (expected W, dyad, or table)");
    }
  }
  return base;
}

int cmd_evolve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  const int r = require_order(config);
  const ComplexPole<Rational> pole = exact_pole(config, r);
  const DyadicOperator<Rational> op = build_operator(config, pole);
  const TimePolynomialOperator<Rational> evolved = evolve_operator(op);
  const bool pure = is_pure_exponential(evolved);

  const Eigen::MatrixXcd initial = evolved.evaluate(0.0);
  bool contract_holds = true;
  std::ostringstream csv;
  json samples = json::array();
  csv << "t,entry_l,entry_m,re,im,modulus\n";
  for (int i = 0; i < config.steps; ++i) {
    const double t = config.t_end * i / (config.steps - 1);
    const Eigen::MatrixXcd value = evolved.evaluate(t);
    const double decay = std::exp(-config.gamma * t);
    for (int l = 0; l < r; ++l) {
      for (int m = 0; m < r; ++m) {
        const std::complex<double> v = value(l, m);
        const double modulus = std::abs(v);
        const double modulus0 = std::abs(initial(l, m));
        if (pure && modulus0 > 0.0 && std::abs(modulus / modulus0 - decay) > kDecayCurveTolerance)
          contract_holds = false;
        csv << format_double(t) << ',' << l << ',' << m << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << ',' << format_double(modulus) << '\n';
        samples.push_back({{"t", t}, {"l", l}, {"m", m}, {"re", v.real()}, {"im", v.imag()}, {"modulus", modulus}});
      }
    }
  }

  if (format_or(config, OutputFormat::Csv) == OutputFormat::Csv) {
    write_output(config, csv.str(), out);
  } else {
    json polynomials = json::array();
    for (int l = 0; l < r; ++l)
      for (int m = 0; m < r; ++m) {
        const auto p = evolved.entry(l, m);
        json coeffs = json::array();
        for (int d = 0; d <= p.degree(); ++d) coeffs.push_back(complex_to_json(to_std_complex(p.coefficient(d))));
        polynomials.push_back({{"l", l}, {"m", m}, {"t_powers", std::move(coeffs)}});
      }
    const json doc = {{"command", "evolve"},  {"r", r},
                      {"E_R", config.energy}, {"Gamma", config.gamma},
                      {"operator", dyadic_operator_to_json(op)},
                      {"pure_exponential", pure},
                      {"polynomials", std::move(polynomials)},
                      {"samples", std::move(samples)}};
    write_output(config, doc.dump(2) + "\n", out);
  }

  if (!contract_holds) {
    err << "evolve: modulus ratio deviates from exp(-Gamma t) by more than " << kDecayCurveTolerance << "\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int cmd_expcheck(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  require_json_format(config);
  if (!config.order && !config.order_bound) throw InputError("exp-check: supply --r or --j");
  const int j = config.order ? 2 * (*config.order - 1) : *config.order_bound;

  const ConstraintSystem system = exponentiality_constraints(j);
  const CharacterizationReport characterization = characterize_exponential_operators(j);
  const BinomialSolution recursion = solve_binomial_recursion(j);

  json doc = constraint_system_to_json(system, characterization.solution_dimension);
  doc["expected_dimension"] = j + 1;
  doc["binomial_pattern_matches"] = characterization.matches_binomial_pattern;
  doc["nullspace_basis"] = b_tables_to_json(characterization.nullspace_basis);
  doc["recursion"] = {{"multipliers", rational_matrix_to_json(recursion.multipliers)},
                      {"satisfies_constraints", recursion.satisfies_constraints}};
  bool reproduced = characterization.reproduced();

  if (config.order) {
    const int r = *config.order;
    const RestrictionReport restriction = verify_restriction_equivalence(r);
    const ComplexPole<Rational> pole = exact_pole(config, r);
    json basis = json::array();
    bool basis_pure = true;
    for (int n = 0; n < r; ++n) {
      const auto w = build_W_n(pole, n, false);
      const bool pure = is_pure_exponential(evolve_operator(w));
      basis_pure = basis_pure && pure;
      json entry = dyadic_operator_to_json(w);
      entry["n"] = n;
      entry["pure_exponential"] = pure;
      basis.push_back(std::move(entry));
    }
    doc["restriction"] = {{"r", r},
                          {"solution_dimension", restriction.solution_dimension},
                          {"expected_dimension", r},
                          {"nullspace_basis", b_tables_to_json(restriction.nullspace_basis)},
                          {"matches_restriction", restriction.matches_restriction}};
    doc["basis"] = std::move(basis);
    reproduced = reproduced && restriction.reproduced() && basis_pure;
  }
  doc["verdict"] = reproduced ? "reproduced" : "failed";
  write_output(config, doc.dump(2) + "\n", out);

  if (!reproduced) {
    err << "exp-check: characterization not reproduced for j = " << j << "; full system written to output\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int cmd_basis(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  require_json_format(config);
  const int r = require_order(config);
  const ComplexPole<Rational> pole = exact_pole(config, r);
  json basis = json::array();
  try {
    const auto elements = exponential_subspace_basis(pole);
    for (std::size_t n = 0; n < elements.size(); ++n) {
      json entry = dyadic_operator_to_json(elements[n]);
      entry["n"] = n;
      entry["pure_exponential"] = true;
      basis.push_back(std::move(entry));
    }
  } catch (const std::logic_error& e) {
    err << "basis: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  const json doc = {{"r", r}, {"E_R", config.energy}, {"Gamma", config.gamma}, {"basis", std::move(basis)},
                    {"linearly_independent", true}};
  write_output(config, doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_residue(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  require_json_format(config);
  if (config.model_path.empty()) throw InputError("residue: a model file is required (--config <model.json>)");
  const ModelDocument doc = load_model_document(config.model_path);
  const double tolerance = config.tolerance.value_or(doc.tolerance.value_or(1e-8));

  json reports = json::array();
  bool all_passed = true;
  for (std::size_t a = 0; a < doc.kets.size(); ++a) {
    for (std::size_t b = 0; b < doc.bras.size(); ++b) {
      const DecompositionReport report = decomposition_check(doc.model, doc.kets[a], doc.bras[b], doc.quadrature,
                                                             tolerance);
      json entry = decomposition_report_to_json(report);
      entry["ket"] = a;
      entry["bra"] = b;
      all_passed = all_passed && report.passed;
      reports.push_back(std::move(entry));
    }
  }
  const json result = {{"r", doc.model.order()}, {"tolerance", tolerance}, {"passed", all_passed},
                       {"reports", std::move(reports)}};
  write_output(config, result.dump(2) + "\n", out);
  if (!all_passed) {
    err << "residue: decomposition check failed\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "evolve") return cmd_evolve(config, out, err);
    if (config.command == "exp-check") return cmd_expcheck(config, out, err);
    if (config.command == "residue") return cmd_residue(config, out, err);
    if (config.command == "basis") return cmd_basis(config, out, err);
    throw InputError("unknown command '" + config.command + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace gamow
