#include "gamow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gamow {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& value, const std::string& field) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
    return {value[0].get<double>(), value[1].get<double>()};
  throw InputError("field '" + field + "': expected a number or an [re, im] pair, got " + value.dump());
}

json constraint_system_to_json(const ConstraintSystem& system, int solution_dimension) {
  json equations = json::array();
  for (const auto& eq : system.equations()) {
    json terms = json::array();
    for (const auto& t : eq.terms)
      terms.push_back({{"n", t.n}, {"k", t.k}, {"coeff", json::array({t.coefficient.to_double(), 0.0})}});
    equations.push_back({{"l", eq.l}, {"m", eq.m}, {"n", eq.n}, {"terms", std::move(terms)}});
  }
  return {{"j", system.order_bound()},
          {"equations", std::move(equations)},
          {"equation_count", system.equation_count()},
          {"variable_count", system.variable_count()},
          {"solution_dimension", solution_dimension}};
}

json rational_matrix_to_json(const MatrixX<Rational>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_double());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t offset = e.byte == 0 ? 0 : std::min(e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": JSON parse error: " + e.what());
  }
}

namespace {

const json& require(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(context + ": missing field '" + key + "'");
  return obj.at(key);
}

double require_number(const json& obj, const std::string& key, const std::string& context) {
  const json& v = require(obj, key, context);
  if (!v.is_number()) throw InputError(context + ": field '" + key + "' must be a number");
  return v.get<double>();
}

Polynomial<std::complex<double>> polynomial_from_json(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError("field '" + field + "': expected an array of coefficients");
  VectorX<std::complex<double>> c(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    c(static_cast<Eigen::Index>(i)) = complex_from_json(v[i], field + "[" + std::to_string(i) + "]");
  return Polynomial<std::complex<double>>(std::move(c));
}

// {"num": [...], "den": [...]} or {"num": [...], "poles": [...]}, ascending powers.
RationalFunction<std::complex<double>> rational_from_json(const json& v, const std::string& field) {
  if (!v.is_object()) throw InputError("field '" + field + "': expected an object with 'num' and 'den' or 'poles'");
  Polynomial<std::complex<double>> num = polynomial_from_json(require(v, "num", field), field + ".num");
  Polynomial<std::complex<double>> den;
  if (v.contains("poles")) {
    const json& poles = v.at("poles");
    if (!poles.is_array()) throw InputError("field '" + field + ".poles': expected an array");
    std::vector<std::complex<double>> roots;
    for (std::size_t i = 0; i < poles.size(); ++i)
      roots.push_back(complex_from_json(poles[i], field + ".poles[" + std::to_string(i) + "]"));
    den = Polynomial<std::complex<double>>::from_roots(roots);
  } else {
    den = polynomial_from_json(require(v, "den", field), field + ".den");
  }
  if (den.is_zero()) throw InputError("field '" + field + ".den': denominator is identically zero");
  return {std::move(num), std::move(den)};
}

}  // namespace

ModelDocument parse_model_document(const std::string& text) {
  const json doc = parse_json_text(text, "model");
  const std::string ctx = "model";
  if (!doc.is_object()) throw InputError("model: top-level value must be an object");

  const double energy = require_number(doc, "E_R", ctx);
  const double gamma = require_number(doc, "Gamma", ctx);
  const json& r_json = require(doc, "r", ctx);
  if (!r_json.is_number_integer()) throw InputError("model: field 'r' must be an integer");
  const int r = r_json.get<int>();

  try {
    ComplexPole<double> pole(energy, gamma, r);

    const json& laurent_json = require(doc, "laurent", ctx);
    if (!laurent_json.is_array()) throw InputError("model: field 'laurent' must be an array");
    std::vector<std::complex<double>> laurent;
    for (std::size_t i = 0; i < laurent_json.size(); ++i)
      laurent.push_back(complex_from_json(laurent_json[i], "laurent[" + std::to_string(i) + "]"));

    RationalFunction<std::complex<double>> background;
    if (doc.contains("background")) background = rational_from_json(doc.at("background"), "background");

    SMatrixModel<double> model(pole, std::move(laurent), std::move(background));

    ModelDocument out{std::move(model), {}, {}, {}, std::nullopt};
    const json& fns = require(doc, "test_functions", ctx);
    if (!fns.is_array()) throw InputError("model: field 'test_functions' must be an array");
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const std::string field = "test_functions[" + std::to_string(i) + "]";
      const json& role_json = require(fns[i], "role", field);
      const std::string role = role_json.is_string() ? role_json.get<std::string>() : "";
      if (role != "ket" && role != "bra") throw InputError("field '" + field + ".role': expected \"ket\" or \"bra\"");
      const FunctionRole fr = role == "ket" ? FunctionRole::Ket : FunctionRole::Bra;
      try {
        TestFunction<double> fn(rational_from_json(fns[i], field), fr);
        (fr == FunctionRole::Ket ? out.kets : out.bras).push_back(std::move(fn));
      } catch (const std::invalid_argument& e) {
        throw InputError("field '" + field + "': " + e.what());
      }
    }
    if (out.kets.empty() || out.bras.empty())
      throw InputError("model: 'test_functions' needs at least one ket and one bra");

    if (doc.contains("tolerance")) out.tolerance = require_number(doc, "tolerance", ctx);
    if (doc.contains("quadrature")) {
      const json& q = doc.at("quadrature");
      const std::string qctx = "quadrature";
      if (q.contains("abs_tol")) out.quadrature.abs_tol = require_number(q, "abs_tol", qctx);
      if (q.contains("rel_tol")) out.quadrature.rel_tol = require_number(q, "rel_tol", qctx);
      if (q.contains("max_depth")) out.quadrature.max_depth = static_cast<unsigned>(require_number(q, "max_depth", qctx));
      if (q.contains("refinement_widths"))
        out.quadrature.refinement_widths = require_number(q, "refinement_widths", qctx);
    }
    return out;
  } catch (const InputError&) {
    throw;
  } catch (const std::domain_error& e) {
    throw InputError(std::string("model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("model: ") + e.what());
  }
}

ModelDocument load_model_document(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_model_document(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

json decomposition_report_to_json(const DecompositionReport& report) {
  return {{"direct", complex_to_json(report.direct)},
          {"background", complex_to_json(report.background)},
          {"residue", complex_to_json(report.residue)},
          {"direct_error", report.direct_error},
          {"background_error", report.background_error},
          {"discrepancy", report.discrepancy},
          {"tolerance", report.tolerance},
          {"quadrature_converged", report.quadrature_converged},
          {"passed", report.passed}};
}

}  // namespace gamow
